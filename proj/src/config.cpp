/*
 * SPDX-License-Identifier: Apache-2.0
 */

#include "leaksim/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "leaksim/errors.hpp"
#include "leaksim/format.hpp"

namespace leaksim {

namespace {

struct Entry {
  std::string value;
  int line = 0;
};

struct Section {
  std::string name; // "simulation", "node", ...
  std::string id;   // node id
  int line = 0;
  std::map<std::string, Entry> entries;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool valid_id(const std::string &id) {
  return !id.empty() && std::all_of(id.begin(), id.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '-';
  });
}

/// Consumes typed keys from one section; leftovers are reported as unknown.
class Reader {
public:
  Reader(const std::string &source, Section &section) : source_(source), sec_(section) {}

  [[noreturn]] void fail(int line, const std::string &msg) const {
    throw ConfigError(source_, line, msg);
  }

  std::string label() const {
    return sec_.name == "node" ? "[node " + sec_.id + "]" : "[" + sec_.name + "]";
  }

  const Entry *take(const std::string &key) {
    auto it = sec_.entries.find(key);
    if (it == sec_.entries.end())
      return nullptr;
    taken_.emplace(key, it->second);
    sec_.entries.erase(it);
    return &taken_.at(key);
  }

  bool has(const std::string &key) const { return sec_.entries.count(key) != 0; }

  void number(const std::string &key, double &out,
              const std::function<bool(double)> &ok = nullptr, const char *range = nullptr) {
    const Entry *e = take(key);
    if (!e)
      return;
    double v = 0.0;
    if (!parse_double(e->value, v))
      fail(e->line, label() + " " + key + ": expected a number, got '" + e->value + "'");
    if (ok && !ok(v))
      fail(e->line, label() + " " + key + " = " + e->value + " is out of range (" + range + ")");
    out = v;
  }

  void integer(const std::string &key, int &out, long lo, long hi) {
    const Entry *e = take(key);
    if (!e)
      return;
    double v = 0.0;
    if (!parse_double(e->value, v) || v != std::floor(v))
      fail(e->line, label() + " " + key + ": expected an integer, got '" + e->value + "'");
    if (v < static_cast<double>(lo) || v > static_cast<double>(hi))
      fail(e->line, label() + " " + key + " = " + e->value + " is out of range [" +
                        std::to_string(lo) + ", " + std::to_string(hi) + "]");
    out = static_cast<int>(v);
  }

  void unsigned64(const std::string &key, std::uint64_t &out) {
    const Entry *e = take(key);
    if (!e)
      return;
    try {
      std::size_t used = 0;
      if (e->value.empty() || e->value.front() == '-')
        throw std::invalid_argument("sign");
      out = std::stoull(e->value, &used);
      if (used != e->value.size())
        throw std::invalid_argument("trailing");
    } catch (const std::exception &) {
      fail(e->line, label() + " " + key + ": expected an unsigned integer");
    }
  }

  void boolean(const std::string &key, bool &out) {
    const Entry *e = take(key);
    if (!e)
      return;
    if (e->value == "true")
      out = true;
    else if (e->value == "false")
      out = false;
    else
      fail(e->line, label() + " " + key + ": expected true or false");
  }

  void tristate(const std::string &key, std::optional<bool> &out) {
    const Entry *e = take(key);
    if (!e)
      return;
    if (e->value == "auto")
      out.reset();
    else if (e->value == "true")
      out = true;
    else if (e->value == "false")
      out = false;
    else
      fail(e->line, label() + " " + key + ": expected auto, true or false");
  }

  std::vector<double> list(const std::string &key, std::size_t min_count, std::size_t max_count,
                           const Entry **where = nullptr) {
    const Entry *e = take(key);
    if (where)
      *where = e;
    if (!e)
      return {};
    std::vector<double> values;
    std::stringstream ss(e->value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      double v = 0.0;
      if (!parse_double(trim(item), v))
        fail(e->line, label() + " " + key + ": expected comma-separated numbers");
      values.push_back(v);
    }
    if (values.size() < min_count || values.size() > max_count)
      fail(e->line, label() + " " + key + ": wrong number of values");
    return values;
  }

  void position(const std::string &key, Position &out) {
    auto v = list(key, 2, 2);
    if (!v.empty())
      out = {v[0], v[1]};
  }

  const Entry *text(const std::string &key, std::string &out) {
    const Entry *e = take(key);
    if (e)
      out = e->value;
    return e;
  }

  void finish() const {
    if (!sec_.entries.empty()) {
      const auto &[key, entry] = *sec_.entries.begin();
      fail(entry.line, "unknown key '" + key + "' in " + label());
    }
  }

  /// Runs a struct-level validator, blaming the section header.
  template <class F> void check(F &&validate) const {
    try {
      validate();
    } catch (const std::invalid_argument &e) {
      fail(sec_.line, label() + ": " + e.what());
    }
  }

private:
  const std::string &source_;
  Section &sec_;
  std::map<std::string, Entry> taken_;
};

auto positive = [](double v) { return v > 0.0; };
auto non_negative = [](double v) { return v >= 0.0; };

std::filesystem::path resolve(const std::filesystem::path &base, const std::string &p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

void read_firmware(Reader &r, NodeConfig &f) {
  r.number("on_volts", f.v_on, non_negative, ">= 0");
  r.number("off_volts", f.v_off, non_negative, ">= 0");
  r.number("tx_interval_seconds", f.tx_interval, positive, "> 0");
  r.number("tx_amperes", f.i_tx, non_negative, ">= 0");
  r.number("idle_amperes", f.i_idle, non_negative, ">= 0");
  r.number("boot_amperes", f.boot_surge_current, non_negative, ">= 0");
  r.number("boot_seconds", f.boot_duration, non_negative, ">= 0");
  r.integer("payload_bytes", f.payload_len, 0, 255);
}

void read_harvester(Reader &r, HarvesterSetup &h, const std::filesystem::path &base,
                    const std::string &source) {
  HarvesterParams &p = h.model.params;
  r.number("peak_volts", p.v_peak, positive, "> 0");
  r.number("steady_volts", p.v_steady, positive, "> 0");
  r.number("peak_amperes", p.i_peak, positive, "> 0");
  r.number("steady_amperes", p.i_steady, positive, "> 0");
  r.number("rise_seconds", p.t_rise, positive, "> 0");
  r.number("decay_seconds", p.tau_decay, positive, "> 0");
  r.number("min_depth_mm", p.min_depth, positive, "> 0");
  auto trace = [&](const char *key, std::string &path, std::optional<PiecewiseLinear> &series) {
    std::string raw;
    if (const Entry *e = r.text(key, raw)) {
      if (raw.empty() || raw == "none") {
        path.clear();
        series.reset();
        return;
      }
      path = resolve(base, raw).string();
      try {
        series = load_series(path);
      } catch (const std::exception &ex) {
        throw ConfigError(source, e->line, std::string(key) + ": " + ex.what());
      }
    }
  };
  trace("ocv_trace_path", h.ocv_trace_path, h.model.ocv_trace);
  trace("scc_trace_path", h.scc_trace_path, h.model.scc_trace);
}

std::vector<Section> split_sections(const std::string &text, const std::string &source,
                                    Section &top) {
  std::vector<Section> sections;
  Section *current = &top;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty())
      continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(source, lineno, "malformed section header '" + line + "'");
      std::string inner = trim(std::string_view(line).substr(1, line.size() - 2));
      Section sec;
      sec.line = lineno;
      if (inner.rfind("node", 0) == 0 && inner.size() > 4 && (inner[4] == ' ' || inner[4] == '\t')) {
        sec.name = "node";
        sec.id = trim(std::string_view(inner).substr(4));
        if (!valid_id(sec.id))
          throw ConfigError(source, lineno, "node id '" + sec.id +
                                                "' must use letters, digits, '_' or '-'");
      } else {
        sec.name = inner;
      }
      for (const auto &s : sections)
        if (s.name == sec.name && s.id == sec.id)
          throw ConfigError(source, lineno, "duplicate section [" + inner + "]");
      sections.push_back(std::move(sec));
      current = &sections.back();
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(source, lineno, "expected 'key = value'");
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty())
      throw ConfigError(source, lineno, "missing key before '='");
    if (current->entries.count(key))
      throw ConfigError(source, lineno, "duplicate key '" + key + "'");
    current->entries.emplace(key, Entry{value, lineno});
  }
  return sections;
}

} // namespace

Scenario parse_scenario(const std::string &text, const std::string &source,
                        const std::filesystem::path &base_dir) {
  Section top;
  top.name = "top level";
  std::vector<Section> sections = split_sections(text, source, top);

  {
    Reader r(source, top);
    const Entry *e = r.take("schema_version");
    if (!e)
      throw ConfigError(source, 0, "missing required key 'schema_version'");
    if (e->value != std::to_string(kSchemaVersion))
      throw ConfigError(source, e->line,
                        "unsupported schema_version '" + e->value + "' (expected " +
                            std::to_string(kSchemaVersion) + ")");
    r.finish();
  }

  auto find = [&](const std::string &name) -> Section * {
    for (auto &s : sections)
      if (s.name == name)
        return &s;
    return nullptr;
  };
  auto require = [&](const std::string &name) -> Section & {
    Section *s = find(name);
    if (!s)
      throw ConfigError(source, 0, "missing required section [" + name + "]");
    return *s;
  };

  static const char *const known[] = {"simulation", "radio",     "gateway",  "converter",
                                      "supercap",   "harvester", "firmware", "sweep", "node"};
  for (const auto &s : sections)
    if (std::find_if(std::begin(known), std::end(known),
                     [&](const char *k) { return s.name == k; }) == std::end(known))
      throw ConfigError(source, s.line, "unknown section [" + s.name + "]");

  Scenario sc;
  {
    Reader r(source, require("simulation"));
    r.number("horizon_seconds", sc.horizon, positive, "> 0");
    r.number("dt_seconds", sc.dt, [](double v) { return v > 0.0 && v <= kMaxStep; },
             "0 < dt <= 0.01");
    r.unsigned64("seed", sc.seed);
    r.number("capture_threshold_db", sc.capture_threshold_db, non_negative, ">= 0");
    r.finish();
  }
  {
    Reader r(source, require("radio"));
    RadioConfig &rc = sc.radio;
    r.number("frequency_hz", rc.freq, positive, "> 0");
    r.integer("spreading_factor", rc.sf, 7, 12);
    r.number("bandwidth_hz", rc.bw,
             [](double v) { return v == 125e3 || v == 250e3 || v == 500e3; },
             "125000, 250000 or 500000");
    r.integer("coding_rate_denominator", rc.cr_denominator, 5, 8);
    r.integer("preamble_symbols", rc.preamble_len, 0, 65535);
    r.boolean("explicit_header", rc.explicit_header);
    r.boolean("crc", rc.crc_on);
    r.tristate("low_data_rate_optimize", rc.low_data_rate_optimize);
    r.number("tx_power_dbm", rc.tx_power);
    r.number("antenna_gain_dbi", rc.antenna_gain);
    r.finish();
    r.check([&] { rc.validate(); });
  }
  {
    Section &sec = require("gateway");
    Reader r(source, sec);
    LinkParams &lp = sc.gateway.link;
    r.position("position_m", sc.gateway.position);
    r.number("path_loss_exponent", lp.path_loss_exponent, [](double v) { return v >= 2.0; },
             ">= 2");
    r.number("ref_loss_at_1m_db", lp.ref_loss_at_1m);
    r.number("wall_loss_db", lp.wall_loss, non_negative, ">= 0");
    r.integer("walls", lp.n_walls, 0, 1000);
    r.number("noise_fade_margin_db", lp.noise_fade_margin);
    std::string raw;
    if (const Entry *e = r.text("sensitivity_table_path", raw); e && !raw.empty() && raw != "none") {
      sc.gateway.sensitivity_table_path = resolve(base_dir, raw).string();
      try {
        lp.sensitivity_table = load_sensitivity_table(sc.gateway.sensitivity_table_path);
      } catch (const std::exception &ex) {
        throw ConfigError(source, e->line, std::string("sensitivity_table_path: ") + ex.what());
      }
    }
    r.finish();
    r.check([&] {
      lp.validate();
      (void)lp.sensitivity(sc.radio);
    });
  }
  {
    Reader r(source, require("converter"));
    ConverterParams &cp = sc.converter;
    r.number("target_volts", cp.v_target, positive, "> 0");
    r.number("efficiency", cp.efficiency, [](double v) { return v > 0.0 && v <= 1.0; },
             "0 < efficiency <= 1");
    r.number("input_min_volts", cp.v_in_min, non_negative, ">= 0");
    r.number("quiescent_amperes", cp.i_quiescent, non_negative, ">= 0");
    r.number("floor_volts", cp.v_floor, positive, "> 0");
    r.finish();
    r.check([&] { cp.validate(); });
  }
  {
    Reader r(source, require("supercap"));
    SupercapState &cap = sc.supercap;
    r.number("capacitance_farads", cap.capacitance, positive, "> 0");
    r.number("initial_volts", cap.voltage, non_negative, ">= 0");
    r.number("leak_siemens", cap.leak_conductance, non_negative, ">= 0");
    r.finish();
    cap.v_max = sc.converter.v_target;
    r.check([&] { cap.validate(); });
  }
  {
    Reader r(source, require("harvester"));
    read_harvester(r, sc.harvester_defaults, base_dir, source);
    r.finish();
    r.check([&] { sc.harvester_defaults.model.params.validate(); });
  }
  {
    Reader r(source, require("firmware"));
    read_firmware(r, sc.firmware_defaults);
    r.finish();
    r.check([&] { sc.firmware_defaults.validate(); });
  }
  if (Section *sweep = find("sweep")) {
    Reader r(source, *sweep);
    const Entry *where = nullptr;
    sc.sweep_depths = r.list("depths_mm", 1, 1000, &where);
    for (double d : sc.sweep_depths)
      if (d < 0.0)
        r.fail(where->line, "[sweep] depths_mm: depths must be >= 0");
    r.finish();
  }

  for (auto &sec : sections) {
    if (sec.name != "node")
      continue;
    Reader r(source, sec);
    NodeSpec node;
    node.id = sec.id;
    node.firmware = sc.firmware_defaults;
    node.harvester = sc.harvester_defaults;
    r.position("position_m", node.position);
    const bool has_depth = r.has("water_depth_mm");
    const bool has_onset = r.has("water_onset_seconds");
    WaterEvent water;
    r.number("water_onset_seconds", water.onset, non_negative, ">= 0");
    r.number("water_depth_mm", water.depth, non_negative, ">= 0");
    if (has_depth)
      node.water = water;
    else if (has_onset)
      throw ConfigError(source, sec.line,
                        "[node " + sec.id + "]: water_onset_seconds requires water_depth_mm");
    r.number("onset_jitter_seconds", node.onset_jitter, non_negative, ">= 0");
    read_firmware(r, node.firmware);
    read_harvester(r, node.harvester, base_dir, source);
    r.finish();
    r.check([&] {
      node.firmware.validate();
      node.harvester.model.params.validate();
    });
    sc.nodes.push_back(std::move(node));
  }

  try {
    sc.validate();
  } catch (const std::invalid_argument &e) {
    throw ConfigError(source, 0, e.what());
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ConfigError(path.string(), 0, "cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path.string(), path.parent_path().empty() ? "." : path.parent_path());
}

namespace {

enum class Mode { Config, Canonical };

std::string num(double v) { return format_double(v); }

std::string series_text(const PiecewiseLinear &s) {
  std::string out;
  for (const auto &[t, v] : s.points())
    out += (out.empty() ? "" : ";") + num(t) + ":" + num(v);
  return out;
}

void write_firmware(std::ostream &os, const NodeConfig &f, const NodeConfig *base) {
  auto put = [&](const char *key, double v, double b) {
    if (!base || v != b)
      os << key << " = " << num(v) << "\n";
  };
  const NodeConfig defaults;
  const NodeConfig &ref = base ? *base : defaults;
  put("on_volts", f.v_on, ref.v_on);
  put("off_volts", f.v_off, ref.v_off);
  put("tx_interval_seconds", f.tx_interval, ref.tx_interval);
  put("tx_amperes", f.i_tx, ref.i_tx);
  put("idle_amperes", f.i_idle, ref.i_idle);
  put("boot_amperes", f.boot_surge_current, ref.boot_surge_current);
  put("boot_seconds", f.boot_duration, ref.boot_duration);
  if (!base || f.payload_len != ref.payload_len)
    os << "payload_bytes = " << f.payload_len << "\n";
}

void write_harvester(std::ostream &os, const HarvesterSetup &h, const HarvesterSetup *base,
                     Mode mode) {
  const HarvesterParams &p = h.model.params;
  const HarvesterParams defaults;
  const HarvesterParams &ref = base ? base->model.params : defaults;
  auto put = [&](const char *key, double v, double b) {
    if (!base || v != b)
      os << key << " = " << num(v) << "\n";
  };
  put("peak_volts", p.v_peak, ref.v_peak);
  put("steady_volts", p.v_steady, ref.v_steady);
  put("peak_amperes", p.i_peak, ref.i_peak);
  put("steady_amperes", p.i_steady, ref.i_steady);
  put("rise_seconds", p.t_rise, ref.t_rise);
  put("decay_seconds", p.tau_decay, ref.tau_decay);
  put("min_depth_mm", p.min_depth, ref.min_depth);
  auto trace = [&](const char *key, const char *canon_key, const std::string &path,
                   const std::optional<PiecewiseLinear> &series,
                   const std::optional<PiecewiseLinear> *base_series, const std::string *base_path) {
    if (base && ((mode == Mode::Config && path == *base_path) ||
                 (mode == Mode::Canonical && series == *base_series)))
      return;
    if (mode == Mode::Config)
      os << key << " = " << (path.empty() ? "none" : path) << "\n";
    else
      os << canon_key << " = " << (series ? series_text(*series) : "none") << "\n";
  };
  trace("ocv_trace_path", "ocv_trace", h.ocv_trace_path, h.model.ocv_trace,
        base ? &base->model.ocv_trace : nullptr, base ? &base->ocv_trace_path : nullptr);
  trace("scc_trace_path", "scc_trace", h.scc_trace_path, h.model.scc_trace,
        base ? &base->model.scc_trace : nullptr, base ? &base->scc_trace_path : nullptr);
}

std::string write(const Scenario &sc, Mode mode) {
  std::ostringstream os;
  os << "schema_version = " << kSchemaVersion << "\n\n";

  os << "[simulation]\n"
     << "horizon_seconds = " << num(sc.horizon) << "\n"
     << "dt_seconds = " << num(sc.dt) << "\n"
     << "seed = " << sc.seed << "\n"
     << "capture_threshold_db = " << num(sc.capture_threshold_db) << "\n\n";

  const RadioConfig &rc = sc.radio;
  os << "[radio]\n"
     << "frequency_hz = " << num(rc.freq) << "\n"
     << "spreading_factor = " << rc.sf << "\n"
     << "bandwidth_hz = " << num(rc.bw) << "\n"
     << "coding_rate_denominator = " << rc.cr_denominator << "\n"
     << "preamble_symbols = " << rc.preamble_len << "\n"
     << "explicit_header = " << (rc.explicit_header ? "true" : "false") << "\n"
     << "crc = " << (rc.crc_on ? "true" : "false") << "\n"
     << "low_data_rate_optimize = "
     << (rc.low_data_rate_optimize ? (*rc.low_data_rate_optimize ? "true" : "false") : "auto")
     << "\n"
     << "tx_power_dbm = " << num(rc.tx_power) << "\n"
     << "antenna_gain_dbi = " << num(rc.antenna_gain) << "\n\n";

  const LinkParams &lp = sc.gateway.link;
  os << "[gateway]\n"
     << "position_m = " << num(sc.gateway.position[0]) << ", " << num(sc.gateway.position[1])
     << "\n"
     << "path_loss_exponent = " << num(lp.path_loss_exponent) << "\n"
     << "ref_loss_at_1m_db = " << num(lp.ref_loss_at_1m) << "\n"
     << "wall_loss_db = " << num(lp.wall_loss) << "\n"
     << "walls = " << lp.n_walls << "\n"
     << "noise_fade_margin_db = " << num(lp.noise_fade_margin) << "\n";
  if (mode == Mode::Config) {
    os << "sensitivity_table_path = "
       << (sc.gateway.sensitivity_table_path.empty() ? "none" : sc.gateway.sensitivity_table_path)
       << "\n";
  } else {
    os << "sensitivity_table = ";
    bool first = true;
    for (const auto &[key, dbm] : lp.sensitivity_table) {
      os << (first ? "" : ";") << key.first << "," << key.second << ":" << num(dbm);
      first = false;
    }
    os << "\n";
  }
  os << "\n";

  const ConverterParams &cp = sc.converter;
  os << "[converter]\n"
     << "target_volts = " << num(cp.v_target) << "\n"
     << "efficiency = " << num(cp.efficiency) << "\n"
     << "input_min_volts = " << num(cp.v_in_min) << "\n"
     << "quiescent_amperes = " << num(cp.i_quiescent) << "\n"
     << "floor_volts = " << num(cp.v_floor) << "\n\n";

  os << "[supercap]\n"
     << "capacitance_farads = " << num(sc.supercap.capacitance) << "\n"
     << "initial_volts = " << num(sc.supercap.voltage) << "\n"
     << "leak_siemens = " << num(sc.supercap.leak_conductance) << "\n\n";

  os << "[harvester]\n";
  write_harvester(os, sc.harvester_defaults, nullptr, mode);
  os << "\n[firmware]\n";
  write_firmware(os, sc.firmware_defaults, nullptr);

  if (!sc.sweep_depths.empty()) {
    os << "\n[sweep]\ndepths_mm = ";
    for (std::size_t i = 0; i < sc.sweep_depths.size(); ++i)
      os << (i ? ", " : "") << num(sc.sweep_depths[i]);
    os << "\n";
  }

  for (const auto &node : sc.nodes) {
    os << "\n[node " << node.id << "]\n"
       << "position_m = " << num(node.position[0]) << ", " << num(node.position[1]) << "\n";
    if (node.water)
      os << "water_onset_seconds = " << num(node.water->onset) << "\n"
         << "water_depth_mm = " << num(node.water->depth) << "\n";
    if (node.onset_jitter != 0.0)
      os << "onset_jitter_seconds = " << num(node.onset_jitter) << "\n";
    write_firmware(os, node.firmware, &sc.firmware_defaults);
    write_harvester(os, node.harvester, &sc.harvester_defaults, mode);
  }
  return os.str();
}

} // namespace

std::string to_config_text(const Scenario &scenario) { return write(scenario, Mode::Config); }

std::string canonical_text(const Scenario &scenario) { return write(scenario, Mode::Canonical); }

std::string scenario_digest(const Scenario &scenario) {
  return "fnv1a64:" + hex64(fnv1a64(canonical_text(scenario)));
}

} // namespace leaksim
