#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "leaksim/lora_phy.hpp"
#include "oracles.hpp"

using namespace leaksim;

namespace {

RadioConfig radio(int sf, double bw, int cr = 5) {
  RadioConfig r;
  r.sf = sf;
  r.bw = bw;
  r.cr_denominator = cr;
  return r;
}

} // namespace

TEST_CASE("time on air for the deployed configuration") {
  const RadioConfig r;
  CHECK(time_on_air_exact(r, 12).ticks() == 20'608'000);
  CHECK(payload_symbols(r, 12) == 28);
  CHECK(symbol_time(r) == doctest::Approx(0.512e-3));
  CHECK_FALSE(uses_low_data_rate_optimize(r));
  CHECK(time_on_air_exact(radio(7, 125e3), 12).ticks() == 2 * time_on_air_exact(r, 12).ticks());
  CHECK(time_on_air(r, 0) == doctest::Approx(12.928e-3).epsilon(1e-12));
  CHECK_THROWS_AS(time_on_air(r, 256), std::invalid_argument);
  CHECK_THROWS_AS(time_on_air(r, -1), std::invalid_argument);
}

TEST_CASE("time on air matches the frozen exact-arithmetic table") {
  for (const auto &c : oracle::toa_cases()) {
    CAPTURE(c.sf);
    CAPTURE(c.bw);
    CAPTURE(c.cr);
    CAPTURE(c.payload);
    const double us = time_on_air(radio(c.sf, static_cast<double>(c.bw), c.cr), c.payload) * 1e6;
    CHECK(std::fabs(us - c.micros) < 1.0);
  }
}

TEST_CASE("header, CRC and low data rate flags") {
  RadioConfig r = radio(12, 125e3);
  CHECK(uses_low_data_rate_optimize(r));
  CHECK(uses_low_data_rate_optimize(radio(11, 125e3))); // 16.384 ms
  CHECK_FALSE(uses_low_data_rate_optimize(radio(11, 250e3)));
  r.explicit_header = false;
  r.crc_on = false;
  CHECK(time_on_air(r, 0) * 1e6 == doctest::Approx(663552.0));
  RadioConfig d;
  d.explicit_header = false;
  d.crc_on = false;
  CHECK(time_on_air(d, 12) * 1e6 == doctest::Approx(18048.0));
  d.low_data_rate_optimize = true;
  CHECK(uses_low_data_rate_optimize(d));
}

TEST_CASE("airtime monotonicity and bandwidth scaling") {
  for (int cr = 5; cr <= 8; ++cr)
    for (double bw : {125e3, 250e3, 500e3}) {
      for (int sf = 7; sf <= 12; ++sf) {
        RadioConfig r = radio(sf, bw, cr);
        for (int pl = 1; pl <= 255; ++pl)
          REQUIRE(time_on_air(r, pl) >= time_on_air(r, pl - 1));
        if (sf < 12)
          for (int pl = 0; pl <= 255; pl += 17)
            REQUIRE(time_on_air(radio(sf + 1, bw, cr), pl) > time_on_air(r, pl));
      }
    }
  for (int sf = 7; sf <= 12; ++sf)
    for (bool de : {false, true}) {
      auto at = [&](double bw, int pl) {
        RadioConfig r = radio(sf, bw);
        r.low_data_rate_optimize = de;
        return time_on_air_exact(r, pl).ticks();
      };
      for (int pl = 0; pl <= 255; pl += 5) {
        REQUIRE(at(125e3, pl) == 2 * at(250e3, pl));
        REQUIRE(at(250e3, pl) == 2 * at(500e3, pl));
      }
    }
}

TEST_CASE("radio configuration bounds") {
  CHECK_THROWS_AS(radio(6, 250e3).validate(), std::invalid_argument);
  CHECK_THROWS_AS(radio(13, 250e3).validate(), std::invalid_argument);
  CHECK_THROWS_AS(radio(7, 200e3).validate(), std::invalid_argument);
  CHECK_THROWS_AS(radio(7, 250e3, 4).validate(), std::invalid_argument);
  CHECK_THROWS_AS(radio(7, 250e3, 9).validate(), std::invalid_argument);
}

TEST_CASE("transmit energy") {
  const RadioConfig r;
  const double e = tx_energy(r, 12, 3.7, 0.080);
  CHECK(e == doctest::Approx(6.1e-3).epsilon(0.01));
  CHECK(tx_energy(r, 12, 3.7, 0.0) == 0.0);
  // Voltage sag on 100 mF from one frame.
  CHECK(e / (0.1 * 3.7) == doctest::Approx(0.0165).epsilon(0.01));
}

TEST_CASE("link budget") {
  const RadioConfig r;
  LinkParams link;
  CHECK(received_power(link, r, 1.0) == doctest::Approx(-11.7));
  link.n_walls = 3;
  CHECK(received_power(link, r, 100.0) == doctest::Approx(-86.7));
  CHECK(link_margin(link, r, 100.0) == doctest::Approx(24.3));
  CHECK(is_deliverable(link, r, 100.0));
  link.n_walls = 0;
  CHECK(is_deliverable(link, r, 1.0));
  CHECK_THROWS_AS(received_power(link, r, 0.5), std::invalid_argument);
  CHECK(link.sensitivity(r) == -121.0);
}

TEST_CASE("received power decreases with distance and walls") {
  const RadioConfig r;
  LinkParams link;
  double prev = received_power(link, r, 1.0);
  for (double d = 1.5; d < 5000.0; d *= 1.3) {
    const double p = received_power(link, r, d);
    REQUIRE(p < prev);
    prev = p;
  }
  for (int w = 0; w < 10; ++w) {
    LinkParams a = link, b = link;
    a.n_walls = w;
    b.n_walls = w + 1;
    REQUIRE(received_power(b, r, 50.0) < received_power(a, r, 50.0));
  }
}

TEST_CASE("range boundary agrees with a bisection over received power") {
  const RadioConfig r;
  for (int walls = 0; walls <= 8; ++walls) {
    LinkParams link;
    link.n_walls = walls;
    const auto boundary = range_boundary(link, r);
    REQUIRE(boundary.has_value());
    const double sens = -121.0;
    const double bisected = oracle::bisect_decreasing(
        [&](double d) { return received_power(link, r, d) - sens - link.noise_fade_margin; }, 1.0,
        1e6);
    CHECK(*boundary == doctest::Approx(bisected).epsilon(1e-9));
    if (walls == 3)
      CHECK(*boundary > 100.0);
  }
  LinkParams hopeless;
  hopeless.n_walls = 40;
  CHECK_FALSE(range_boundary(hopeless, r).has_value());
}

TEST_CASE("sensitivity table file") {
  const auto path = std::filesystem::temp_directory_path() / "leaksim_sens.txt";
  {
    std::ofstream f(path);
    f << "# sf,bw  dBm\n7,250000 -118.5\n7,125000  -121\n";
  }
  auto t = load_sensitivity_table(path.string());
  CHECK(t.size() == 2);
  LinkParams link;
  link.sensitivity_table = t;
  CHECK(link.sensitivity(RadioConfig{}) == -118.5);
  CHECK_THROWS_AS(link.sensitivity(radio(9, 250e3)), std::invalid_argument);
  {
    std::ofstream f(path);
    f << "7,250000 12\n";
  }
  CHECK_THROWS_AS(load_sensitivity_table(path.string()), std::runtime_error);
  {
    std::ofstream f(path);
    f << "7 -120\n";
  }
  CHECK_THROWS_AS(load_sensitivity_table(path.string()), std::runtime_error);
  std::filesystem::remove(path);
}
