/*
 * SPDX-License-Identifier: Apache-2.0
 */

#include "leaksim/report.hpp"

#include <sstream>

#include "leaksim/config.hpp"
#include "leaksim/format.hpp"

namespace leaksim {

std::string trace_csv(const NodeTrace &trace) {
  std::string out = kTraceHeader;
  out += '\n';
  out.reserve(trace.samples.size() * 48);
  for (std::size_t k = 0; k < trace.samples.size(); ++k) {
    const PowerSample &s = trace.samples[k];
    out += format_double(s.t.seconds());
    out += ',';
    out += format_double(s.v_cap);
    out += ',';
    out += format_double(s.i_harvest_out);
    out += ',';
    out += format_double(s.i_load);
    out += ',';
    out += to_string(trace.phases[k]);
    out += '\n';
  }
  return out;
}

std::string summary_text(const Scenario &sc, const SimResult &result) {
  std::ostringstream os;
  os << "scenario_digest = " << scenario_digest(sc) << "\n"
     << "horizon_seconds = " << format_double(sc.horizon) << "\n"
     << "dt_seconds = " << format_double(sc.dt) << "\n"
     << "nodes = " << sc.nodes.size() << "\n";
  for (std::size_t i = 0; i < sc.nodes.size(); ++i) {
    const NodeSpec &node = sc.nodes[i];
    const NodeTrace &tr = result.traces[i];
    const std::string p = "node." + node.id + ".";
    const Meters d = distance_to_gateway(sc, node);
    os << p << "activation_seconds = "
       << (tr.activation_time ? format_double(tr.activation_time->seconds()) : "none") << "\n"
       << p << "tx_count = " << tr.tx_events.size() << "\n"
       << p << "brownout_count = " << tr.brownout_events.size() << "\n"
       << p << "aborted_tx = " << tr.aborted_tx << "\n"
       << p << "peak_v_cap = " << format_double(tr.peak_v_cap) << "\n"
       << p << "distance_m = " << format_double(d) << "\n"
       << p << "rx_power_dbm = " << format_double(received_power(sc.gateway.link, sc.radio, d))
       << "\n"
       << p << "link_margin_db = " << format_double(link_margin(sc.gateway.link, sc.radio, d))
       << "\n"
       << p << "deliverable = " << (is_deliverable(sc.gateway.link, sc.radio, d) ? "true" : "false")
       << "\n";
    if (!tr.samples.empty())
      os << p << "trace_digest = fnv1a64:" << hex64(fnv1a64(trace_csv(tr))) << "\n";
  }
  os << "packets_sent = " << result.packets_sent << "\n"
     << "packets_delivered = " << result.packets_delivered << "\n"
     << "packets_collided = " << result.packets_collided << "\n"
     << "packets_out_of_range = " << result.packets_out_of_range << "\n"
     << "delivery_ratio = " << format_double(result.delivery_ratio) << "\n";
  for (const auto &w : result.warnings)
    os << "warning = " << w << "\n";
  return os.str();
}

} // namespace leaksim
