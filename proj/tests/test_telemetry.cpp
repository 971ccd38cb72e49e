#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <sstream>

#include "endure/registry.hpp"
#include "endure/telemetry.hpp"

using namespace endure;

namespace {

FuelSpec butane() { return builtin_components().fuel("butane"); }

std::vector<PowerSample> constant_power(double watts, double seconds,
                                        double step_s) {
  std::vector<PowerSample> out;
  for (double t = 0.0; t <= seconds + 1e-9; t += step_s) {
    PowerSample s;
    s.t_s = t;
    s.power_w = watts;
    s.voltage_v = 2.0;
    s.current_a = watts / 2.0;
    out.push_back(s);
  }
  return out;
}

std::vector<TemperatureSample> steady_temps(double seconds) {
  std::vector<TemperatureSample> out;
  for (double t = 0.0; t <= seconds + 1e-9; t += 10.0) {
    out.push_back({t, 340.0, 74.0, 25.0});
  }
  return out;
}

}  // namespace

TEST_CASE("temperature log parsing") {
  std::istringstream in(
      "timestamp,T_hot_C,T_cold_C,T_amb_C\n"
      "0,100,30,25\n"
      "1,101,30.5,25\n"
      "2,102,31,25\n");
  const auto log = parse_temperature_log(in, TemperatureColumns{});
  REQUIRE(log.samples.size() == 3);
  CHECK(log.skipped_rows == 0);
  CHECK(log.samples[0].t_s == 0.0);
  CHECK(log.samples[1].t_s == 1.0);
  CHECK(log.samples[2].t_s == 2.0);
  CHECK(log.samples[2].hot_c == 102.0);
}

TEST_CASE("corrupt rows are skipped and counted") {
  std::istringstream in(
      "timestamp,T_hot_C,T_cold_C,T_amb_C\n"
      "0,100,30,25\n"
      "1,oops,30.5,25\n"
      "2,102,31,25\n");
  const auto log = parse_temperature_log(in, TemperatureColumns{});
  CHECK(log.samples.size() == 2);
  CHECK(log.skipped_rows == 1);
}

TEST_CASE("ISO-8601 timestamps reduce to the same elapsed series") {
  std::istringstream iso(
      "timestamp,T_hot_C,T_cold_C,T_amb_C\n"
      "2023-11-15T15:29:00,100,30,25\n"
      "2023-11-15T15:29:01,101,30,25\n"
      "2023-11-15T15:29:02,102,30,25\n");
  std::istringstream numeric(
      "timestamp,T_hot_C,T_cold_C,T_amb_C\n"
      "0,100,30,25\n"
      "1,101,30,25\n"
      "2,102,30,25\n");
  const auto a = parse_temperature_log(iso, TemperatureColumns{});
  const auto b = parse_temperature_log(numeric, TemperatureColumns{});
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(a.samples[i].t_s == b.samples[i].t_s);
  }
}

TEST_CASE("ISO timestamps survive a midnight rollover") {
  std::istringstream in(
      "timestamp,T_hot_C,T_cold_C,T_amb_C\n"
      "2023-11-15 23:59:59,100,30,25\n"
      "2023-11-16 00:00:01,101,30,25\n");
  const auto log = parse_temperature_log(in, TemperatureColumns{});
  REQUIRE(log.samples.size() == 2);
  CHECK(log.samples[1].t_s == 2.0);
}

TEST_CASE("CRLF and LF logs parse identically") {
  const std::string body =
      "timestamp,T_hot_C,T_cold_C,T_amb_C\n0,100,30,25\n1,101,31,25\n";
  std::string crlf = body;
  std::string::size_type pos = 0;
  while ((pos = crlf.find('\n', pos)) != std::string::npos) {
    crlf.replace(pos, 1, "\r\n");
    pos += 2;
  }
  std::istringstream in_lf(body), in_crlf(crlf);
  const auto a = parse_temperature_log(in_lf, TemperatureColumns{});
  const auto b = parse_temperature_log(in_crlf, TemperatureColumns{});
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(a.samples[i].hot_c == b.samples[i].hot_c);
    CHECK(a.samples[i].t_s == b.samples[i].t_s);
  }
}

TEST_CASE("missing mapped columns and empty files are rejected") {
  std::istringstream missing("time,hot,cold\n0,1,2\n");
  CHECK_THROWS_AS(parse_temperature_log(missing, TemperatureColumns{}),
                  parse_error);
  std::istringstream empty("");
  CHECK_THROWS_AS(parse_temperature_log(empty, TemperatureColumns{}),
                  parse_error);
}

TEST_CASE("timestamps running backwards beyond tolerance are rejected") {
  std::istringstream in(
      "timestamp,T_hot_C,T_cold_C,T_amb_C\n"
      "100,100,30,25\n"
      "90,101,30,25\n");
  CHECK_THROWS_AS(parse_temperature_log(in, TemperatureColumns{}), parse_error);
  // A 1-second dip is clamped, not fatal.
  std::istringstream small_dip(
      "timestamp,T_hot_C,T_cold_C,T_amb_C\n"
      "100,100,30,25\n"
      "99.5,101,30,25\n"
      "101,102,30,25\n");
  const auto log = parse_temperature_log(small_dip, TemperatureColumns{});
  REQUIRE(log.samples.size() == 3);
  CHECK(log.samples[1].t_s == log.samples[0].t_s);
}

TEST_CASE("power log parsing derives watts from volts and amps") {
  std::istringstream in(
      "time_s,voltage_V,current_A\n"
      "0,2.0,2.3\n"
      "2,2.0,0\n");
  const auto log = parse_power_log(in, PowerColumns{});
  REQUIRE(log.samples.size() == 2);
  CHECK(log.samples[0].power_w == Catch::Approx(4.6));
  CHECK(log.samples[1].power_w == 0.0);
}

TEST_CASE("explicit power column disagreeing with V*I is counted") {
  PowerColumns cols;
  cols.power = "power_W";
  std::istringstream in(
      "time_s,voltage_V,current_A,power_W\n"
      "0,2.0,2.3,4.6\n"
      "2,2.0,2.3,5.2\n"
      "4,2.0,2.3,4.59\n");
  const auto log = parse_power_log(in, cols);
  REQUIRE(log.samples.size() == 3);
  CHECK(log.vi_mismatch_count == 1);
  CHECK(log.samples[1].power_w == 5.2);  // the explicit column wins
}

TEST_CASE("alternative delimiters work") {
  std::istringstream in(
      "time_s;voltage_V;current_A\n"
      "0;2.0;2.3\n"
      "2;2.0;2.3\n");
  const auto log = parse_power_log(in, PowerColumns{}, ';');
  CHECK(log.samples.size() == 2);
}

TEST_CASE("sliding mean basics") {
  const std::vector<double> constant(40, 5.0);
  for (double v : sliding_mean(constant, 7)) CHECK(v == 5.0);

  const std::vector<double> ramp{1.0, 2.0, 3.0, 4.0};
  CHECK(sliding_mean(ramp, 1) == ramp);

  // Window 2 takes the extra point from the trailing side; brute force:
  // out[0] = mean{0}, out[1] = mean{0,10}.
  const std::vector<double> two{0.0, 10.0};
  const auto smoothed = sliding_mean(two, 2);
  CHECK(smoothed[0] == 0.0);
  CHECK(smoothed[1] == 5.0);

  CHECK_THROWS_AS(sliding_mean({}, 3), domain_error);
}

TEST_CASE("sliding mean matches a brute-force oracle") {
  std::mt19937_64 rng(131);
  std::uniform_real_distribution<double> val(-5.0, 5.0);
  std::vector<double> series(63);
  for (auto& v : series) v = val(rng);
  for (int window : {1, 2, 3, 8, 15}) {
    const auto fast = sliding_mean(series, window);
    const int before = window / 2;
    const int after = (window - 1) / 2;
    for (int i = 0; i < int(series.size()); ++i) {
      double sum = 0.0;
      int count = 0;
      for (int k = i - before; k <= i + after; ++k) {
        if (k < 0 || k >= int(series.size())) continue;
        sum += series[k];
        ++count;
      }
      CHECK(fast[i] == Catch::Approx(sum / count).epsilon(1e-12));
    }
  }
}

TEST_CASE("sliding mean preserves the mean of stationary series") {
  std::mt19937_64 rng(141);
  std::normal_distribution<double> noise(10.0, 1.0);
  std::vector<double> series(600);
  for (auto& v : series) v = noise(rng);
  const double mean =
      std::accumulate(series.begin(), series.end(), 0.0) / series.size();
  for (int window : {5, 20, 60}) {  // up to 10% of the length
    const auto smoothed = sliding_mean(series, window);
    const double smean =
        std::accumulate(smoothed.begin(), smoothed.end(), 0.0) /
        smoothed.size();
    CHECK(std::fabs(smean - mean) / mean < 0.005);
  }
}

TEST_CASE("energy integration") {
  // 4.6 W held for 9360 s is 11.96 Wh.
  CHECK(integrate_energy_wh(constant_power(4.6, 9360.0, 2.0)) ==
        Catch::Approx(11.96).margin(1e-9));

  // A linear ramp 0 -> 10 W over an hour integrates to the triangle area.
  std::vector<PowerSample> ramp;
  for (double t = 0.0; t <= 3600.0; t += 100.0) {
    ramp.push_back({t, 0.0, 0.0, 10.0 * t / 3600.0});
  }
  CHECK(integrate_energy_wh(ramp) == Catch::Approx(5.0).epsilon(1e-12));

  CHECK_THROWS_AS(integrate_energy_wh({PowerSample{}}), domain_error);
}

TEST_CASE("irregular sampling agrees with a dense resample") {
  // Same smooth signal sampled unevenly and at 1 Hz.
  auto signal = [](double t) { return 5.0 + 2.0 * std::sin(t / 700.0); };
  std::vector<PowerSample> uneven, regular;
  std::mt19937_64 rng(151);
  std::uniform_real_distribution<double> jitter(0.3, 3.7);
  for (double t = 0.0; t <= 7200.0;) {
    uneven.push_back({t, 0, 0, signal(t)});
    t += jitter(rng);
  }
  for (double t = 0.0; t <= 7200.0; t += 1.0) {
    regular.push_back({t, 0, 0, signal(t)});
  }
  const double a = integrate_energy_wh(uneven);
  const double b = integrate_energy_wh(regular);
  CHECK(std::fabs(a - b) / b < 0.001);
}

TEST_CASE("reduction reproduces the bench campaign figures") {
  // 121.7 g burned at 46.3 g/h spans 9462.6 s; the logger saw 4.6 W.
  const double duration_s = 0.1217 / 0.0463 * 3600.0;
  const auto powers = constant_power(4.6, duration_s, 2.0);
  const auto temps = steady_temps(duration_s);
  const auto s = reduce_test(temps, powers, 0.1217, 0.413, 0.227, butane(),
                             make_fraction(0.40), 100);

  CHECK(s.duration_h == Catch::Approx(2.6285).margin(2e-3));
  CHECK(s.avg_power_w == Catch::Approx(4.6).margin(1e-9));
  CHECK(s.energy_wh == Catch::Approx(12.09).margin(0.02));
  CHECK(s.chemical_energy_wh == Catch::Approx(1655.12).margin(0.01));
  CHECK(s.burn_rate_kg_h == Catch::Approx(0.0463).margin(5e-5));
  CHECK(s.thermal_power_w == Catch::Approx(629.7).margin(1.0));
  CHECK(s.delivered_power_w == Catch::Approx(251.9).margin(0.5));
  CHECK(s.exhaust_loss_w == Catch::Approx(377.8).margin(0.7));
  CHECK(s.system_efficiency == Catch::Approx(0.0073).margin(2e-4));
  CHECK(s.device_efficiency == Catch::Approx(0.0183).margin(5e-4));
  CHECK(s.extrapolated_energy_wh == Catch::Approx(22.55).margin(0.1));
  CHECK(s.total_mass_kg == Catch::Approx(0.7465).margin(5e-4));
  CHECK(s.specific_energy_wh_kg == Catch::Approx(30.2).margin(0.3));
  CHECK(s.specific_power_w_kg == Catch::Approx(6.16).margin(0.05));
  CHECK(s.delta_t_mean_c == Catch::Approx(266.0).margin(1e-9));
  CHECK(s.cold_side_resistance_c_w == Catch::Approx(0.1945).margin(5e-4));
}

TEST_CASE("reduction invariants hold exactly") {
  const auto powers = constant_power(4.6, 9000.0, 2.0);
  const auto temps = steady_temps(9000.0);
  const auto s = reduce_test(temps, powers, 0.120, 0.413, 0.227, butane(),
                             make_fraction(0.40));
  CHECK(s.device_efficiency * 0.40 ==
        Catch::Approx(s.system_efficiency).epsilon(1e-15));
  CHECK(s.delivered_power_w + s.exhaust_loss_w == s.thermal_power_w);
  CHECK(s.burn_rate_kg_h * 13600.0 ==
        Catch::Approx(s.thermal_power_w).epsilon(1e-9));
  // Trapezoid against product-of-averages consistency.
  CHECK(s.energy_wh ==
        Catch::Approx(s.avg_power_w * s.duration_h).epsilon(0.005));
}

TEST_CASE("reduction error paths") {
  const auto powers = constant_power(4.6, 9000.0, 2.0);
  const auto temps = steady_temps(9000.0);
  CHECK_THROWS_AS(reduce_test(temps, powers, 0.0, 0.413, 0.227, butane(),
                              make_fraction(0.40)),
                  domain_error);
  CHECK_THROWS_AS(reduce_test(temps, {}, 0.12, 0.413, 0.227, butane(),
                              make_fraction(0.40)),
                  domain_error);
  // Misaligned series: temperatures cover a sliver of the power log.
  const auto sliver = steady_temps(100.0);
  CHECK_THROWS_AS(reduce_test(sliver, powers, 0.12, 0.413, 0.227, butane(),
                              make_fraction(0.40)),
                  domain_error);
}
