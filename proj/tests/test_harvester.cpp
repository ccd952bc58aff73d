#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "leaksim/harvester.hpp"

using namespace leaksim;

TEST_CASE("open-circuit voltage follows the ramp-then-decay transient") {
  const HarvesterParams p;
  CHECK(open_circuit_voltage(p, -1.0) == 0.0);
  CHECK(open_circuit_voltage(p, 0.0) == 0.0);
  CHECK(open_circuit_voltage(p, p.t_rise) == doctest::Approx(1.65).epsilon(1e-12));
  CHECK(open_circuit_voltage(p, p.t_rise / 2) == doctest::Approx(0.825));
  CHECK(std::fabs(open_circuit_voltage(p, p.t_rise + 20 * p.tau_decay) - 1.3) < 1e-6);
}

TEST_CASE("short-circuit current follows the same shape") {
  const HarvesterParams p;
  CHECK(short_circuit_current(p, -0.5) == 0.0);
  CHECK(short_circuit_current(p, p.t_rise) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(short_circuit_current(p, 1e4) == doctest::Approx(0.22).epsilon(1e-9));
}

TEST_CASE("sample builds a Thevenin source") {
  const HarvesterParams p;
  SUBCASE("below minimum depth the cell is dead") {
    for (double t : {0.0, 5.0, 50.0, 1e3}) {
      const auto out = sample(p, WaterEvent{0.0, 0.2}, t);
      CHECK(out.v_oc == 0.0);
      CHECK(out.i_sc == 0.0);
      CHECK(out.r_int == 0.0);
      CHECK(out.p_mpp == 0.0);
    }
  }
  SUBCASE("before onset the cell is dry") {
    const auto out = sample(p, WaterEvent{10.0, 1.0}, 9.999);
    CHECK_FALSE(out.active());
    CHECK(out.p_mpp == 0.0);
  }
  SUBCASE("steady state") {
    const auto out = sample(p, WaterEvent{3.0, 1.0}, 3.0 + 1e4);
    CHECK(out.r_int == doctest::Approx(5.909).epsilon(1e-3));
    CHECK(out.p_mpp == doctest::Approx(0.0715).epsilon(1e-9));
    CHECK(out.r_int == doctest::Approx(out.v_oc / out.i_sc));
  }
}

TEST_CASE("depth above threshold never changes the output") {
  const HarvesterParams p;
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> depth(p.min_depth, 20.0), time(-5.0, 300.0);
  for (int k = 0; k < 2000; ++k) {
    const double t = time(gen);
    const auto a = sample(p, WaterEvent{0.0, depth(gen)}, t);
    const auto b = sample(p, WaterEvent{0.0, depth(gen)}, t);
    REQUIRE(a.v_oc == b.v_oc);
    REQUIRE(a.i_sc == b.i_sc);
    REQUIRE(a.r_int == b.r_int);
    REQUIRE(a.p_mpp == b.p_mpp);
  }
  // Threshold itself counts as wet.
  CHECK(sample(p, WaterEvent{0.0, p.min_depth}, 20.0).active());
}

TEST_CASE("traces are continuous and decay monotonically") {
  const HarvesterParams p;
  for (double t : {0.0, p.t_rise, 0.5 * p.t_rise, 40.0}) {
    const double eps = 1e-9;
    CHECK(std::fabs(open_circuit_voltage(p, t + eps) - open_circuit_voltage(p, t - eps)) < 1e-8);
    CHECK(std::fabs(short_circuit_current(p, t + eps) - short_circuit_current(p, t - eps)) < 1e-8);
  }
  double prev_v = open_circuit_voltage(p, p.t_rise), prev_i = short_circuit_current(p, p.t_rise);
  for (double t = p.t_rise; t < 400.0; t += 0.37) {
    const double v = open_circuit_voltage(p, t), i = short_circuit_current(p, t);
    REQUIRE(v <= prev_v);
    REQUIRE(i <= prev_i);
    prev_v = v;
    prev_i = i;
  }
  for (double t = 0.01; t < 400.0; t += 0.37) {
    const auto out = sample(p, WaterEvent{0.0, 1.0}, t);
    REQUIRE(out.active());
    REQUIRE(std::isfinite(out.r_int));
    REQUIRE(out.r_int > 0.0);
  }
}

TEST_CASE("parameter validation") {
  HarvesterParams p;
  CHECK_NOTHROW(p.validate());
  p.v_peak = 1.0; // below steady
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = {};
  p.tau_decay = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = {};
  p.min_depth = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("trace override replaces the parametric curve") {
  const auto path = std::filesystem::temp_directory_path() / "leaksim_ocv_trace.txt";
  {
    std::ofstream f(path);
    f << "# t_wet, volts\n0, 0\n2, 1.0\n4, 1.5  # peak\n\n10, 1.2\n";
  }
  HarvesterModel model;
  model.ocv_trace = load_series(path.string());
  const WaterEvent w{1.0, 1.0};
  CHECK(sample(model, w, 2.0).v_oc == doctest::Approx(0.5));
  CHECK(sample(model, w, 4.0).v_oc == doctest::Approx(1.25));
  CHECK(sample(model, w, 100.0).v_oc == doctest::Approx(1.2));
  // Current still from the parametric model.
  CHECK(sample(model, w, 2.0).i_sc == doctest::Approx(short_circuit_current(model.params, 1.0)));
  // Dry and shallow rules still apply.
  CHECK_FALSE(sample(model, w, 0.5).active());
  CHECK_FALSE(sample(model, WaterEvent{1.0, 0.1}, 5.0).active());
  std::filesystem::remove(path);
}

TEST_CASE("series loading rejects malformed input") {
  const auto path = std::filesystem::temp_directory_path() / "leaksim_bad_trace.txt";
  auto write = [&](const char *text) {
    std::ofstream f(path);
    f << text;
  };
  write("0 1\n1\n");
  CHECK_THROWS_AS(load_series(path.string()), std::runtime_error);
  write("0 1\n0 2\n");
  CHECK_THROWS_AS(load_series(path.string()), std::runtime_error);
  write("# nothing\n");
  CHECK_THROWS_AS(load_series(path.string()), std::runtime_error);
  write("0 abc\n");
  CHECK_THROWS_AS(load_series(path.string()), std::runtime_error);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_series("/nonexistent/trace.txt"), std::runtime_error);
}
