/*
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <filesystem>
#include <string>

#include "leaksim/scenario.hpp"

namespace leaksim {

inline constexpr int kSchemaVersion = 1;

/// Parses scenario text. Relative file references resolve against
/// `base_dir`. Throws ConfigError with the offending line.
Scenario parse_scenario(const std::string &text, const std::string &source_name = "<config>",
                        const std::filesystem::path &base_dir = ".");

Scenario load_scenario(const std::filesystem::path &path);

/// Emits every key explicitly. Re-parsing yields an equal Scenario.
std::string to_config_text(const Scenario &scenario);

/// Canonical form used for hashing: file references are replaced by the
/// data they loaded, so the text is host independent.
std::string canonical_text(const Scenario &scenario);

/// "fnv1a64:<hex>" of canonical_text.
std::string scenario_digest(const Scenario &scenario);

} // namespace leaksim
