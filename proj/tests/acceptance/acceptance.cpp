/*
 * SPDX-License-Identifier: Apache-2.0
 */

// Acceptance checks. Usage: acceptance <scenario-dir>
// Prints one line per criterion and exits non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "leaksim/config.hpp"
#include "leaksim/experiments.hpp"
#include "leaksim/lora_phy.hpp"
#include "leaksim/network.hpp"
#include "leaksim/power.hpp"
#include "oracles.hpp"

using namespace leaksim;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string &what, const std::string &detail) {
  std::cout << (ok ? "[PASS] " : "[FAIL] ") << id << " " << what << ": " << detail << "\n";
  if (!ok)
    ++failures;
}

std::string read_file(const fs::path &p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

template <class F> void guarded(int id, const std::string &what, F &&body) {
  try {
    body();
  } catch (const std::exception &e) {
    report(id, false, what, std::string("exception: ") + e.what());
  }
}

void activation(const fs::path &dir) {
  guarded(1, "activation near 50 s", [&] {
    const Scenario sc = load_scenario(dir / "paper_fig4.cfg");
    const auto t0 = std::chrono::steady_clock::now();
    const NodeTrace tr = run_node(sc);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool act = tr.activation_time.has_value();
    const double t = act ? tr.activation_time->seconds() : -1.0;
    std::ostringstream d;
    d << "activation " << t << " s (band 40..60), runtime " << wall << " s (< 5)";
    report(1, act && t >= 40.0 && t <= 60.0 && wall < 5.0, "activation near 50 s", d.str());
  });
}

void dips(const fs::path &dir) {
  guarded(2, "dip structure", [&] {
    const Scenario sc = load_scenario(dir / "paper_fig4.cfg");
    const NodeTrace tr = run_node(sc);
    const auto &s = tr.samples;
    if (!tr.activation_time || tr.tx_events.size() < 3) {
      report(2, false, "dip structure", "too few transmissions");
      return;
    }
    auto v_at = [&](SimTime t) {
      auto it = std::lower_bound(s.begin(), s.end(), t,
                                 [](const PowerSample &p, SimTime x) { return p.t < x; });
      return it->v_cap;
    };
    auto min_over = [&](SimTime a, SimTime b) {
      double m = INFINITY;
      for (const auto &p : s)
        if (p.t >= a && p.t <= b)
          m = std::min(m, p.v_cap);
      return m;
    };
    const auto &txs = tr.tx_events;
    const double boot_dip = v_at(*tr.activation_time) - min_over(*tr.activation_time, txs[0].end());

    bool spacing = true;
    for (std::size_t k = 1; k < txs.size(); ++k)
      spacing = spacing && (txs[k].start - txs[k - 1].start).ticks() == 10'000'000'000;

    const double c = sc.supercap.capacitance;
    const double i_tx = sc.nodes[0].firmware.i_tx;
    bool depth_ok = true, boot_largest = true;
    double lo = INFINITY, hi = 0.0, est_lo = INFINITY, est_hi = 0.0;
    for (std::size_t k = 1; k < txs.size(); ++k) {
      const double v0 = v_at(txs[k].start);
      const double dip = v0 - min_over(txs[k].start, txs[k].end());
      const double e_tx = txs[k].duration.seconds() * v0 * i_tx;
      const double est = e_tx / (c * v0);
      depth_ok = depth_ok && dip > 0.0 && dip <= 2.0 * est && dip >= 0.5 * est;
      boot_largest = boot_largest && boot_dip > dip;
      lo = std::min(lo, dip);
      hi = std::max(hi, dip);
      est_lo = std::min(est_lo, est);
      est_hi = std::max(est_hi, est);
    }
    std::ostringstream d;
    d << "boot dip " << boot_dip * 1e3 << " mV, TX dips " << lo * 1e3 << ".." << hi * 1e3
      << " mV vs estimate " << est_lo * 1e3 << ".." << est_hi * 1e3 << " mV, spacing "
      << (spacing ? "exactly 10 s" : "irregular");
    report(2, spacing && depth_ok && boot_largest, "dip structure", d.str());
  });
}

void depth_sweep(const fs::path &dir) {
  guarded(3, "depth insensitivity", [&] {
    const Scenario sc = load_scenario(dir / "paper_fig6_sweep.cfg");
    const std::vector<double> depths{0.5, 1.0, 2.0, 0.2};
    const auto rows = sweep_depth(sc, depths);
    bool same = rows[0].activation.has_value();
    for (int k = 1; k < 3; ++k)
      same = same && rows[k].activation == rows[0].activation &&
             std::memcmp(&rows[k].peak_v_cap, &rows[0].peak_v_cap, sizeof(double)) == 0;
    const bool shallow = !rows[3].activation;
    std::ostringstream d;
    d << "activation " << (rows[0].activation ? *rows[0].activation : -1.0)
      << " s at 0.5/1/2 mm " << (same ? "identical" : "differ") << ", 0.2 mm "
      << (shallow ? "never activates" : "activates");
    report(3, same && shallow, "depth insensitivity", d.str());
  });
}

void range(const fs::path &dir) {
  guarded(4, "100 m through walls", [&] {
    const Scenario sc = load_scenario(dir / "paper_range_100m.cfg");
    const double dist = distance_to_gateway(sc, sc.nodes.at(0));
    const double margin = link_margin(sc.gateway.link, sc.radio, dist);
    const bool deliverable = is_deliverable(sc.gateway.link, sc.radio, dist);
    const auto boundary = range_boundary(sc.gateway.link, sc.radio);
    const SimResult r = run(sc, RunOptions{false, false});
    const bool delivered = r.packets_sent > 0 && r.packets_delivered == r.packets_sent;
    std::ostringstream d;
    d << dist << " m, " << sc.gateway.link.n_walls << " walls, margin " << margin
      << " dB, boundary " << (boundary ? *boundary : 0.0) << " m, delivered "
      << r.packets_delivered << "/" << r.packets_sent;
    report(4, deliverable && margin > 0.0 && boundary && *boundary > 100.0 && delivered,
           "100 m through walls", d.str());
  });
}

void toa() {
  guarded(5, "time on air oracle", [&] {
    double worst = 0.0;
    for (const auto &c : oracle::toa_cases()) {
      RadioConfig r;
      r.sf = c.sf;
      r.bw = static_cast<double>(c.bw);
      r.cr_denominator = c.cr;
      worst = std::max(worst, std::fabs(time_on_air(r, c.payload) * 1e6 - c.micros));
    }
    const double def = time_on_air(RadioConfig{}, 12);
    std::ostringstream d;
    d << oracle::toa_cases().size() << " cases, worst error " << worst << " us, default "
      << def * 1e3 << " ms";
    report(5, oracle::toa_cases().size() >= 20 && worst < 1.0 && std::fabs(def - 20.608e-3) < 1e-6,
           "time on air oracle", d.str());
  });
}

void energy(const fs::path &dir) {
  guarded(6, "energy conservation", [&] {
    const Scenario sc = load_scenario(dir / "paper_fig4.cfg");
    const NodeTrace tr = run_node(sc);
    const auto &s = tr.samples;
    const double c = sc.supercap.capacitance;
    const double g = sc.supercap.leak_conductance;
    double flow = 0.0;
    for (std::size_t k = 1; k < s.size(); ++k) {
      const double h = (s[k].t - s[k - 1].t).seconds();
      const double v_mid = 0.5 * (s[k].v_cap + s[k - 1].v_cap);
      flow += (s[k].i_harvest_out - s[k].i_load) * v_mid * h - g * s[k - 1].v_cap * v_mid * h;
    }
    const double e_end = 0.5 * c * s.back().v_cap * s.back().v_cap;
    const double de = e_end - 0.5 * c * s.front().v_cap * s.front().v_cap;
    const double rel = std::fabs(de - flow) / e_end;
    std::ostringstream d;
    d << "dE " << de << " J, net flow " << flow << " J, relative residual " << rel;
    report(6, rel < 1e-3, "energy conservation", d.str());
  });
}

void charging() {
  guarded(7, "analytic charging time", [&] {
    const ConverterParams conv;
    HarvesterOutput src;
    src.v_oc = 1.3;
    src.i_sc = 0.22;
    src.r_int = src.v_oc / src.i_sc;
    src.p_mpp = src.v_oc * src.i_sc / 4.0;
    SupercapState cap;
    cap.voltage = conv.v_floor; // above the floor the converter delivers constant power
    const double analytic =
        analytic_time_to_threshold(conv, src.p_mpp, cap.capacitance, cap.voltage, 3.7);
    bool ok = true;
    std::ostringstream d;
    d << "analytic " << analytic << " s;";
    for (double dt : {10e-3, 1e-3, 0.1e-3}) {
      const auto sim = simulate_time_to_threshold(conv, src, cap, 3.7, dt, 10.0 * analytic);
      const double err = sim ? std::fabs(*sim - analytic) : INFINITY;
      ok = ok && err <= 2.0 * dt;
      d << " dt " << dt << ": error " << err << " s";
    }
    report(7, ok, "analytic charging time", d.str());
  });
}

void collisions() {
  guarded(8, "collision oracle", [&] {
    std::mt19937_64 rng(8);
    int mismatches = 0;
    for (int round = 0; round < 200; ++round) {
      const std::size_t n = 1 + rng() % 5;
      std::vector<Transmission> v;
      for (std::size_t k = 0; k < n; ++k) {
        Transmission t;
        t.node = k;
        t.start = SimTime::from_ticks(static_cast<std::int64_t>(rng() % 60'000'000));
        t.duration = SimTime::from_ticks(10'000'000 + static_cast<std::int64_t>(rng() % 30'000'000));
        t.sf = 7 + static_cast<int>(rng() % 2);
        t.channel = (rng() % 4 == 0) ? 916e6 : 915e6;
        t.rx_power_at_gateway = -100.0 + static_cast<double>(rng() % 15);
        v.push_back(t);
      }
      if (detect_collisions(v, 6.0) != oracle::collisions_brute_force(v, 6.0))
        ++mismatches;
    }
    report(8, mismatches == 0, "collision oracle",
           "200 instances, " + std::to_string(mismatches) + " mismatches");
  });
}

void determinism(const fs::path &dir) {
  guarded(9, "determinism", [&] {
    const fs::path scratch = fs::temp_directory_path() / "leaksim_acceptance";
    fs::remove_all(scratch);
    int scenarios = 0, files = 0;
    bool same = true;
    for (const auto &entry : fs::directory_iterator(dir)) {
      if (entry.path().extension() != ".cfg")
        continue;
      ++scenarios;
      const std::string stem = entry.path().stem().string();
      const RunReport a = simulate_to_dir(load_scenario(entry.path()), scratch / "a" / stem);
      const RunReport b = simulate_to_dir(load_scenario(entry.path()), scratch / "b" / stem);
      same = same && a.scenario_digest == b.scenario_digest && a.outputs.size() == b.outputs.size();
      for (const auto &p : fs::directory_iterator(scratch / "a" / stem)) {
        ++files;
        same = same && read_file(p.path()) == read_file(scratch / "b" / stem / p.path().filename());
      }
    }
    fs::remove_all(scratch);
    report(9, same && scenarios > 0, "determinism",
           std::to_string(scenarios) + " scenarios, " + std::to_string(files) + " files " +
               (same ? "byte-identical" : "differ"));
  });
}

} // namespace

int main(int argc, char **argv) {
  if (argc != 2) {
    std::cerr << "usage: acceptance <scenario-dir>\n";
    return 2;
  }
  const fs::path dir = argv[1];
  activation(dir);
  dips(dir);
  depth_sweep(dir);
  range(dir);
  toa();
  energy(dir);
  charging();
  collisions();
  determinism(dir);
  std::cout << (failures ? std::to_string(failures) + " criteria failed" : "all criteria passed")
            << "\n";
  return failures ? 1 : 0;
}
