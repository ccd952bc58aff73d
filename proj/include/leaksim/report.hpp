/*
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <string>

#include "leaksim/network.hpp"
#include "leaksim/scenario.hpp"

namespace leaksim {

inline constexpr const char *kTraceHeader = "t,v_cap,i_harvest_out,i_load,phase";

/// Per-node trace, one row per integration segment, shortest round-trip floats.
std::string trace_csv(const NodeTrace &trace);

/// Line-oriented `key = value` run summary. Contains no wall-clock data, so
/// identical scenarios yield identical bytes.
std::string summary_text(const Scenario &scenario, const SimResult &result);

} // namespace leaksim
