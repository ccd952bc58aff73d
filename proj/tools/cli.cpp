/*
 * SPDX-License-Identifier: Apache-2.0
 */

#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "leaksim/config.hpp"
#include "leaksim/errors.hpp"
#include "leaksim/experiments.hpp"
#include "leaksim/format.hpp"
#include "leaksim/lora_phy.hpp"

namespace leaksim::cli {

namespace {

struct Overrides {
  std::optional<double> horizon;
  std::optional<double> dt;
};

Scenario load_with_overrides(const std::string &path, const Overrides &ov) {
  Scenario sc = load_scenario(path);
  if (ov.horizon)
    sc.horizon = *ov.horizon;
  if (ov.dt)
    sc.dt = *ov.dt;
  try {
    sc.validate();
  } catch (const std::invalid_argument &e) {
    throw ConfigError(path, 0, std::string("after command-line overrides: ") + e.what());
  }
  return sc;
}

std::string fmt_opt(const std::optional<Seconds> &t) {
  return t ? format_double(*t) : std::string("none");
}

void print_report(std::ostream &out, const std::string &config, const RunReport &r) {
  out << "config = " << config << "\n"
      << "scenario_digest = " << r.scenario_digest << "\n";
  for (const auto &[id, t] : r.activation_times)
    out << "node." << id << ".activation_seconds = " << fmt_opt(t) << "\n";
  out << "packets_sent = " << r.packets_sent << "\n"
      << "packets_delivered = " << r.packets_delivered << "\n"
      << "packets_collided = " << r.packets_collided << "\n"
      << "packets_out_of_range = " << r.packets_out_of_range << "\n"
      << "delivery_ratio = " << format_double(r.delivery_ratio) << "\n";
  for (const auto &p : r.outputs)
    out << "output = " << p.string() << "\n";
  out << "wall_clock_seconds = " << std::fixed << std::setprecision(3) << r.wall_clock_seconds
      << std::defaultfloat << "\n";
}

int simulate(const std::vector<std::string> &configs, const std::string &out_dir,
             const Overrides &ov, unsigned jobs, bool quiet, std::ostream &out,
             std::ostream &err) {
  struct Slot {
    RunReport report;
    std::exception_ptr error;
  };
  std::vector<Slot> slots(configs.size());
  auto dir_for = [&](std::size_t i) {
    if (configs.size() == 1)
      return std::filesystem::path(out_dir);
    return std::filesystem::path(out_dir) / std::filesystem::path(configs[i]).stem();
  };
  auto work = [&](std::size_t i) {
    try {
      slots[i].report = simulate_to_dir(load_with_overrides(configs[i], ov), dir_for(i));
    } catch (...) {
      slots[i].error = std::current_exception();
    }
  };

  jobs = std::clamp<unsigned>(jobs, 1, static_cast<unsigned>(configs.size()));
  if (jobs == 1) {
    for (std::size_t i = 0; i < configs.size(); ++i)
      work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < jobs; ++w)
      pool.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < configs.size();)
          work(i);
      });
    for (auto &t : pool)
      t.join();
  }

  for (std::size_t i = 0; i < configs.size(); ++i) {
    if (slots[i].error)
      std::rethrow_exception(slots[i].error);
    for (const auto &w : slots[i].report.warnings)
      err << "warning: " << configs[i] << ": " << w << "\n";
    if (!quiet) {
      if (i)
        out << "\n";
      print_report(out, configs[i], slots[i].report);
    }
  }
  return kOk;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Battery-less water-leak LoRa node simulator", "leaksim"};
  app.require_subcommand(1);

  Overrides ov;
  bool quiet = false;
  std::vector<std::string> configs;
  std::string config;
  std::string out_dir = "out";

  auto add_common = [&](CLI::App *sub, bool many) {
    if (many)
      sub->add_option("--config", configs, "Scenario file(s)")->required();
    else
      sub->add_option("--config", config, "Scenario file")->required();
    sub->add_option("--horizon", ov.horizon, "Override simulation horizon [s]");
    sub->add_option("--dt", ov.dt, "Override integration step [s]");
    sub->add_flag("--quiet", quiet, "Suppress the report on stdout");
  };

  auto *sim = app.add_subcommand("simulate", "Run a scenario and write traces + summary");
  add_common(sim, true);
  sim->add_option("--out", out_dir, "Output directory");
  unsigned jobs = 1;
  sim->add_option("--jobs", jobs, "Worker threads when several configs are given");

  auto *sweep = app.add_subcommand("sweep-depth", "Activation time versus water depth");
  add_common(sweep, false);
  std::vector<double> depths;
  sweep->add_option("--depths", depths, "Depths in mm (comma separated)")->delimiter(',');

  auto *cal = app.add_subcommand("calibrate", "Fit converter efficiency to an activation time");
  add_common(cal, false);
  double target = 50.0, tolerance = 0.5;
  cal->add_option("--target", target, "Target activation time [s]");
  cal->add_option("--tolerance", tolerance, "Acceptable activation error [s]");
  cal->add_option("--out", out_dir, "Directory for calibrated.cfg");

  auto *toa = app.add_subcommand("toa", "LoRa time on air");
  RadioConfig radio;
  int payload = NodeConfig{}.payload_len;
  bool implicit_header = false, no_crc = false;
  std::string ldro = "auto";
  toa->add_option("--sf", radio.sf, "Spreading factor 7..12");
  toa->add_option("--bw", radio.bw, "Bandwidth [Hz]");
  toa->add_option("--cr", radio.cr_denominator, "Coding rate denominator 5..8");
  toa->add_option("--preamble", radio.preamble_len, "Preamble symbols");
  toa->add_option("--payload", payload, "Payload bytes");
  toa->add_flag("--implicit-header", implicit_header);
  toa->add_flag("--no-crc", no_crc);
  toa->add_option("--ldro", ldro, "Low data rate optimize")
      ->check(CLI::IsMember({"auto", "on", "off"}));

  auto *range = app.add_subcommand("range", "Zero-margin link distance");
  std::optional<int> walls;
  std::string range_config;
  range->add_option("--walls", walls, "Wall count between node and gateway");
  range->add_option("--config", range_config, "Scenario supplying radio and link parameters");

  auto *validate = app.add_subcommand("validate", "Check scenario files against the schema");
  validate->add_option("--config", configs, "Scenario file(s)")->required();

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    if (sim->parsed())
      return simulate(configs, out_dir, ov, jobs, quiet, out, err);

    if (sweep->parsed()) {
      const Scenario sc = load_with_overrides(config, ov);
      if (depths.empty())
        depths = sc.sweep_depths.empty() ? std::vector<double>{0.5, 1.0, 2.0} : sc.sweep_depths;
      const auto rows = sweep_depth(sc, depths);
      if (!quiet) {
        out << "depth_mm,activation_seconds,peak_v_cap\n";
        for (const auto &r : rows)
          out << format_double(r.depth) << "," << fmt_opt(r.activation) << ","
              << format_double(r.peak_v_cap) << "\n";
      }
      return kOk;
    }

    if (cal->parsed()) {
      if (!(target > 0.0)) {
        err << "error: --target must be positive\n";
        return kConfigError;
      }
      Scenario sc = load_with_overrides(config, ov);
      if (sc.nodes.size() != 1 || !sc.nodes.front().water)
        throw ConfigError(config, 0, "calibrate needs exactly one node with a water event");
      const Calibration c = calibrate(sc, target, tolerance);
      if (!c.feasible) {
        err << "infeasible: activation at efficiency 1 is " << fmt_opt(c.activation)
            << " s, later than the " << format_double(target) << " s target\n";
        return kInfeasible;
      }
      sc.converter.efficiency = c.efficiency;
      std::filesystem::create_directories(out_dir);
      const auto path = std::filesystem::path(out_dir) / "calibrated.cfg";
      std::ofstream(path, std::ios::binary | std::ios::trunc) << to_config_text(sc);
      if (!quiet)
        out << "efficiency = " << format_double(c.efficiency) << "\n"
            << "activation_seconds = " << fmt_opt(c.activation) << "\n"
            << "iterations = " << c.iterations << "\n"
            << "output = " << path.string() << "\n";
      return kOk;
    }

    if (toa->parsed()) {
      radio.explicit_header = !implicit_header;
      radio.crc_on = !no_crc;
      if (ldro != "auto")
        radio.low_data_rate_optimize = (ldro == "on");
      try {
        radio.validate();
        const SimTime t = time_on_air_exact(radio, payload);
        out << "time_on_air_ms = " << format_double(static_cast<double>(t.ticks()) / 1e6) << "\n"
            << "payload_symbols = " << payload_symbols(radio, payload) << "\n"
            << "symbol_time_ms = " << format_double(symbol_time(radio) * 1e3) << "\n"
            << "low_data_rate_optimize = "
            << (uses_low_data_rate_optimize(radio) ? "true" : "false") << "\n";
      } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << "\n";
        return kConfigError;
      }
      return kOk;
    }

    if (range->parsed()) {
      Scenario sc;
      if (!range_config.empty())
        sc = load_scenario(range_config);
      LinkParams link = sc.gateway.link;
      if (walls) {
        if (*walls < 0) {
          err << "error: --walls must be non-negative\n";
          return kConfigError;
        }
        link.n_walls = *walls;
      }
      const auto boundary = range_boundary(link, sc.radio);
      out << "walls = " << link.n_walls << "\n"
          << "range_boundary_m = " << (boundary ? format_double(*boundary) : "none") << "\n";
      if (boundary && *boundary >= 1.0)
        out << "margin_at_100m_db = " << format_double(link_margin(link, sc.radio, 100.0)) << "\n";
      return kOk;
    }

    if (validate->parsed()) {
      for (const auto &c : configs) {
        const Scenario sc = load_scenario(c);
        out << "ok " << c << " " << scenario_digest(sc) << "\n";
      }
      return kOk;
    }
  } catch (const ConfigError &e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const InvariantViolation &e) {
    err << "internal invariant violation: " << e.what() << "\n";
    return kInvariant;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}

} // namespace leaksim::cli
