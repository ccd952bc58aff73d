/*
 * SPDX-License-Identifier: Apache-2.0
 */

#include "leaksim/network.hpp"

#include <algorithm>
#include <stdexcept>

#include "leaksim/errors.hpp"
#include "leaksim/event_queue.hpp"

namespace leaksim {

std::string_view to_string(PacketOutcome outcome) {
  switch (outcome) {
  case PacketOutcome::Delivered:
    return "delivered";
  case PacketOutcome::Collided:
    return "collided";
  case PacketOutcome::OutOfRange:
    return "out_of_range";
  }
  return "unknown";
}

namespace {

struct NodeRuntime {
  const NodeSpec *spec = nullptr;
  NodeState state;
  SupercapState cap;
  SimTime integrated_to;
  std::optional<WaterEvent> water; // onset already jittered
  DecibelMilliwatts rx_power = 0.0;
  bool deliverable = true;
  NodeTrace trace;
};

class Engine {
public:
  Engine(const Scenario &scenario, const RunOptions &options)
      : sc_(scenario), opt_(options), dt_(SimTime::from_seconds(scenario.dt)),
        horizon_(SimTime::from_seconds(scenario.horizon)) {}

  SimResult run() {
    init_nodes();
    queue_.schedule(std::min(dt_, horizon_), EventKind::StateCheck);
    queue_.schedule(horizon_, EventKind::SimEnd);

    SimTime last;
    while (true) {
      const Event ev = queue_.next_event();
      if (ev.time < last)
        throw InvariantViolation("engine time moved backward");
      last = ev.time;

      for (auto &n : nodes_)
        integrate(n, ev.time);
      for (std::size_t i = 0; i < nodes_.size(); ++i)
        settle(i, ev.time);

      if (ev.kind == EventKind::SimEnd)
        break;
      if (ev.kind == EventKind::StateCheck && ev.node == kAllNodes && ev.time + dt_ < horizon_)
        queue_.schedule(ev.time + dt_, EventKind::StateCheck);
      if (opt_.stop_at_activation && all_wet_nodes_activated())
        break;
    }
    return finish();
  }

private:
  void init_nodes() {
    const auto onsets = water_onsets(sc_);
    SupercapState cap = sc_.supercap;
    cap.v_max = sc_.converter.v_target;
    nodes_.resize(sc_.nodes.size());
    for (std::size_t i = 0; i < sc_.nodes.size(); ++i) {
      NodeRuntime &n = nodes_[i];
      n.spec = &sc_.nodes[i];
      n.cap = cap;
      if (onsets[i]) {
        n.water = WaterEvent{onsets[i]->seconds(), n.spec->water->depth};
        if (*onsets[i] < horizon_)
          queue_.schedule(*onsets[i], EventKind::WaterOnset, i);
      }
      const Meters d = distance_to_gateway(sc_, *n.spec);
      n.rx_power = received_power(sc_.gateway.link, sc_.radio, d);
      n.deliverable = is_deliverable(sc_.gateway.link, sc_.radio, d);
      n.trace.peak_v_cap = n.cap.voltage;
      if (opt_.record_samples)
        record(n, PowerSample{SimTime{}, n.cap.voltage, 0.0, 0.0});
    }
  }

  HarvesterOutput source(const NodeRuntime &n, SimTime t) const {
    if (!n.water)
      return {};
    return sample(n.spec->harvester.model, *n.water, t.seconds());
  }

  void record(NodeRuntime &n, const PowerSample &s) {
    n.trace.samples.push_back(s);
    n.trace.phases.push_back(n.state.phase);
  }

  void integrate(NodeRuntime &n, SimTime to) {
    while (n.integrated_to < to) {
      const SimTime seg_end = std::min(to, n.integrated_to + dt_);
      const Seconds h = (seg_end - n.integrated_to).seconds();
      const HarvesterOutput src = source(n, n.integrated_to);
      const Amperes i_load = load_current(n.spec->firmware, n.state);
      const Amperes i_in = regulated_input_current(
          n.cap, converter_output_current(sc_.converter, src, n.cap.voltage), i_load, h);
      n.cap = step_supercap(n.cap, i_in, i_load, h);
      if (!(n.cap.voltage >= 0.0) || n.cap.voltage > sc_.converter.v_target + 1e-9)
        throw InvariantViolation("supercap voltage left [0, v_target]");
      n.integrated_to = seg_end;
      n.trace.peak_v_cap = std::max(n.trace.peak_v_cap, n.cap.voltage);
      if (opt_.record_samples)
        record(n, PowerSample{seg_end, n.cap.voltage, i_in, i_load});
    }
  }

  void settle(std::size_t index, SimTime t) {
    NodeRuntime &n = nodes_[index];
    const NodeConfig &cfg = n.spec->firmware;
    const bool harvesting = source(n, t).active();
    // Each lifecycle edge moves forward; seven covers any chain at one instant.
    for (int guard = 0; guard < 7; ++guard) {
      const NodeState next = transition(cfg, n.state, n.cap.voltage, t, sc_.radio, harvesting);
      if (next == n.state)
        return;
      on_change(index, n.state, next, t);
      n.state = next;
      if (auto due = next_timed_edge(cfg, n.state, sc_.radio); due && *due > t && *due <= horizon_)
        queue_.schedule(*due, kind_for(n.state.phase), index);
    }
    throw InvariantViolation("node '" + n.spec->id + "' lifecycle did not settle");
  }

  static EventKind kind_for(Phase phase) {
    switch (phase) {
    case Phase::Idle:
      return EventKind::TxStart;
    case Phase::Transmitting:
      return EventKind::TxEnd;
    default:
      return EventKind::StateCheck;
    }
  }

  void on_change(std::size_t index, const NodeState &prev, const NodeState &next, SimTime t) {
    NodeRuntime &n = nodes_[index];
    if (next.phase == Phase::Booting) {
      if (n.cap.voltage < n.spec->firmware.v_on)
        throw InvariantViolation("node booted below v_on");
      if (!n.trace.activation_time)
        n.trace.activation_time = t;
    }
    if (next.phase == Phase::Brownout) {
      n.trace.brownout_events.push_back(t);
      if (prev.phase == Phase::Transmitting)
        ++n.trace.aborted_tx;
    }
    if (prev.phase == Phase::Transmitting && next.phase == Phase::Idle) {
      const TxEvent tx{prev.phase_entered_at, t - prev.phase_entered_at};
      n.trace.tx_events.push_back(tx);
      transmissions_.push_back(Transmission{index, tx.start, tx.duration, sc_.radio.freq,
                                            sc_.radio.sf, n.rx_power});
    }
  }

  bool all_wet_nodes_activated() const {
    bool any = false;
    for (const auto &n : nodes_) {
      if (!n.water)
        continue;
      any = true;
      if (!n.trace.activation_time)
        return false;
    }
    return any;
  }

  SimResult finish() {
    SimResult result;
    std::stable_sort(transmissions_.begin(), transmissions_.end(),
                     [](const Transmission &a, const Transmission &b) {
                       return a.start != b.start ? a.start < b.start : a.node < b.node;
                     });
    const auto survives = detect_collisions(transmissions_, sc_.capture_threshold_db);
    for (std::size_t k = 0; k < transmissions_.size(); ++k) {
      PacketRecord rec{transmissions_[k], PacketOutcome::Delivered};
      if (!nodes_[rec.tx.node].deliverable) {
        rec.outcome = PacketOutcome::OutOfRange;
        ++result.packets_out_of_range;
      } else if (!survives[k]) {
        rec.outcome = PacketOutcome::Collided;
        ++result.packets_collided;
      } else {
        ++result.packets_delivered;
      }
      result.packets.push_back(rec);
    }
    result.packets_sent = static_cast<int>(result.packets.size());
    if (result.packets_sent != result.packets_delivered + result.packets_collided +
                                   result.packets_out_of_range)
      throw InvariantViolation("packet accounting identity violated");
    if (result.packets_sent > 0)
      result.delivery_ratio =
          static_cast<double>(result.packets_delivered) / result.packets_sent;

    bool any_active = false;
    for (auto &n : nodes_) {
      if (n.trace.activation_time)
        any_active = true;
      else
        result.warnings.push_back("node '" + n.spec->id + "' never activated before the horizon");
      result.traces.push_back(std::move(n.trace));
    }
    if (!nodes_.empty() && !any_active)
      result.warnings.push_back("no node activated before the horizon");
    return result;
  }

  const Scenario &sc_;
  RunOptions opt_;
  SimTime dt_;
  SimTime horizon_;
  EventQueue queue_;
  std::vector<NodeRuntime> nodes_;
  std::vector<Transmission> transmissions_;
};

} // namespace

SimResult run(const Scenario &scenario, const RunOptions &options) {
  scenario.validate();
  return Engine(scenario, options).run();
}

NodeTrace run_node(const Scenario &scenario, const RunOptions &options) {
  if (scenario.nodes.size() != 1 || !scenario.nodes.front().water)
    throw std::invalid_argument("run_node: scenario must hold exactly one wetted node");
  return std::move(run(scenario, options).traces.front());
}

} // namespace leaksim
