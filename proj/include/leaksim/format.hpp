/*
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace leaksim {

/// Shortest decimal text that parses back to exactly `v`. Locale-independent.
std::string format_double(double v);

/// Strict full-string parse; rejects trailing garbage and non-finite values.
bool parse_double(std::string_view text, double &out);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL);

std::string hex64(std::uint64_t v);

} // namespace leaksim
