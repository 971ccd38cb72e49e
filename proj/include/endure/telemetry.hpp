#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "endure/errors.hpp"
#include "endure/powerplant.hpp"

namespace endure {

struct TemperatureSample {
  double t_s = 0.0;  // elapsed seconds from the first sample
  double hot_c = 0.0;
  double cold_c = 0.0;
  double ambient_c = 0.0;
};

struct PowerSample {
  double t_s = 0.0;
  double voltage_v = 0.0;
  double current_a = 0.0;
  double power_w = 0.0;
};

struct TemperatureLog {
  std::vector<TemperatureSample> samples;
  std::size_t skipped_rows = 0;
};

struct PowerLog {
  std::vector<PowerSample> samples;
  std::size_t skipped_rows = 0;
  std::size_t vi_mismatch_count = 0;  // explicit power column vs V*I by >1%
};

// Which CSV headers hold which signal.
struct TemperatureColumns {
  std::string time = "timestamp";
  std::string hot = "T_hot_C";
  std::string cold = "T_cold_C";
  std::string ambient = "T_amb_C";
};

struct PowerColumns {
  std::string time = "time_s";
  std::string voltage = "voltage_V";
  std::string current = "current_A";
  std::string power;  // optional; derived as V*I when empty
};

namespace detail {

inline std::vector<std::string_view> split_row(std::string_view line,
                                               char delimiter) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(delimiter, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

inline bool parse_number(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last && std::isfinite(out);
}

inline bool parse_int(std::string_view s, int& out) {
  s = trim(s);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

// Days since the epoch for a civil date (Howard Hinnant's algorithm).
inline long long days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const long long era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2u) / 5u + d - 1u;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097LL + static_cast<long long>(doe) - 719468LL;
}

// Timestamps may be plain seconds or ISO-8601 date-times
// (YYYY-MM-DD[T ]HH:MM:SS[.fff][Z]). Either way the caller only uses
// differences, so the absolute origin does not matter.
inline bool parse_timestamp(std::string_view s, double& out_s) {
  s = trim(s);
  if (parse_number(s, out_s)) return true;
  if (s.size() < 19) return false;
  int y, mo, d, h, mi;
  if (!parse_int(s.substr(0, 4), y) || s[4] != '-' ||
      !parse_int(s.substr(5, 2), mo) || s[7] != '-' ||
      !parse_int(s.substr(8, 2), d)) {
    return false;
  }
  if (s[10] != 'T' && s[10] != ' ' && s[10] != '_') return false;
  if (!parse_int(s.substr(11, 2), h) || s[13] != ':' ||
      !parse_int(s.substr(14, 2), mi) || s[16] != ':') {
    return false;
  }
  std::string_view secpart = s.substr(17);
  if (!secpart.empty() && (secpart.back() == 'Z' || secpart.back() == 'z')) {
    secpart.remove_suffix(1);
  }
  double sec;
  if (!parse_number(secpart, sec)) return false;
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || sec >= 61) {
    return false;
  }
  out_s = double(days_from_civil(y, mo, d)) * 86400.0 + h * 3600.0 +
          mi * 60.0 + sec;
  return true;
}

struct HeaderIndex {
  std::vector<std::string> names;

  std::size_t require(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == name) return i;
    }
    throw parse_error("missing column '" + name + "' in header");
  }

  std::size_t optional(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == name) return i;
    }
    return std::size_t(-1);
  }
};

inline HeaderIndex read_header(std::istream& in, char delimiter) {
  std::string line;
  while (std::getline(in, line)) {
    if (!trim(line).empty()) break;
  }
  if (trim(line).empty()) throw parse_error("empty file: no header row");
  HeaderIndex h;
  for (auto field : split_row(line, delimiter)) {
    h.names.emplace_back(trim(field));
  }
  return h;
}

// Normalizes raw timestamps to elapsed seconds. Dips up to 2 s are clamped
// to keep the series non-decreasing; anything larger is rejected.
template <typename Sample>
inline void normalize_elapsed(std::vector<Sample>& samples) {
  if (samples.empty()) return;
  const double t0 = samples.front().t_s;
  double prev = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double t = samples[i].t_s - t0;
    if (t < prev - 2.0) {
      throw parse_error("timestamps go backwards by more than 2 s at row " +
                        std::to_string(i + 1));
    }
    if (t < prev) t = prev;
    samples[i].t_s = t;
    prev = t;
  }
}

}  // namespace detail

inline TemperatureLog parse_temperature_log(std::istream& in,
                                            const TemperatureColumns& columns,
                                            char delimiter = ',') {
  const auto header = detail::read_header(in, delimiter);
  const std::size_t it = header.require(columns.time);
  const std::size_t ih = header.require(columns.hot);
  const std::size_t ic = header.require(columns.cold);
  const std::size_t ia = header.require(columns.ambient);
  const std::size_t need =
      std::max(std::max(it, ih), std::max(ic, ia)) + 1;

  TemperatureLog log;
  std::string line;
  while (std::getline(in, line)) {
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split_row(line, delimiter);
    TemperatureSample s;
    if (fields.size() < need || !detail::parse_timestamp(fields[it], s.t_s) ||
        !detail::parse_number(fields[ih], s.hot_c) ||
        !detail::parse_number(fields[ic], s.cold_c) ||
        !detail::parse_number(fields[ia], s.ambient_c)) {
      ++log.skipped_rows;
      continue;
    }
    log.samples.push_back(s);
  }
  if (log.samples.empty()) {
    throw parse_error("temperature log has no parseable data rows");
  }
  detail::normalize_elapsed(log.samples);
  return log;
}

inline PowerLog parse_power_log(std::istream& in, const PowerColumns& columns,
                                char delimiter = ',') {
  const auto header = detail::read_header(in, delimiter);
  const std::size_t it = header.require(columns.time);
  const std::size_t iv = header.require(columns.voltage);
  const std::size_t ii = header.require(columns.current);
  const std::size_t ip =
      columns.power.empty() ? std::size_t(-1) : header.require(columns.power);
  std::size_t need = std::max(std::max(it, iv), ii) + 1;
  if (ip != std::size_t(-1)) need = std::max(need, ip + 1);

  PowerLog log;
  std::string line;
  while (std::getline(in, line)) {
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split_row(line, delimiter);
    PowerSample s;
    if (fields.size() < need || !detail::parse_timestamp(fields[it], s.t_s) ||
        !detail::parse_number(fields[iv], s.voltage_v) ||
        !detail::parse_number(fields[ii], s.current_a)) {
      ++log.skipped_rows;
      continue;
    }
    const double vi = s.voltage_v * s.current_a;
    if (ip != std::size_t(-1)) {
      if (!detail::parse_number(fields[ip], s.power_w)) {
        ++log.skipped_rows;
        continue;
      }
      const double scale = std::max({std::fabs(s.power_w), std::fabs(vi), 1e-9});
      if (std::fabs(s.power_w - vi) > 0.01 * scale) ++log.vi_mismatch_count;
    } else {
      s.power_w = vi;
    }
    log.samples.push_back(s);
  }
  if (log.samples.empty()) {
    throw parse_error("power log has no parseable data rows");
  }
  detail::normalize_elapsed(log.samples);
  return log;
}

// Centered moving average with shrinking windows at the edges. Even window
// widths take the extra point from the trailing side. Output length equals
// input length; window 1 is the identity.
inline std::vector<double> sliding_mean(const std::vector<double>& values,
                                        int window) {
  if (values.empty()) throw domain_error("sliding_mean: empty series");
  if (window < 1) throw domain_error("sliding_mean: window must be >= 1");
  const int n = int(values.size());
  const int before = window / 2;
  const int after = (window - 1) / 2;
  std::vector<double> out(values.size());
  for (int i = 0; i < n; ++i) {
    const int lo = std::max(0, i - before);
    const int hi = std::min(n - 1, i + after);
    double sum = 0.0;
    for (int k = lo; k <= hi; ++k) sum += values[k];
    out[i] = sum / double(hi - lo + 1);
  }
  return out;
}

inline std::vector<double> sliding_mean_power(
    const std::vector<PowerSample>& samples, int window) {
  std::vector<double> values(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    values[i] = samples[i].power_w;
  }
  return sliding_mean(values, window);
}

// Trapezoidal integral of a power series, in Wh.
inline double integrate_energy_wh(const std::vector<PowerSample>& samples) {
  if (samples.size() < 2) {
    throw domain_error("integrate_energy: need at least 2 samples");
  }
  double ws = 0.0;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const double dt = samples[i].t_s - samples[i - 1].t_s;
    if (dt < 0.0) {
      throw domain_error("integrate_energy: timestamps not monotone");
    }
    ws += 0.5 * (samples[i].power_w + samples[i - 1].power_w) * dt;
  }
  return ws / 3600.0;
}

// Everything a burner test boils down to.
struct TestSummary {
  double duration_h = 0.0;
  double avg_power_w = 0.0;
  double energy_wh = 0.0;
  double fuel_burned_kg = 0.0;
  double burn_rate_kg_h = 0.0;
  double chemical_energy_wh = 0.0;
  double thermal_power_w = 0.0;
  double delivered_power_w = 0.0;
  double exhaust_loss_w = 0.0;
  double system_efficiency = 0.0;
  double device_efficiency = 0.0;
  double extrapolated_energy_wh = 0.0;  // full canister at this burn rate
  double specific_energy_wh_kg = 0.0;
  double specific_power_w_kg = 0.0;
  double delta_t_mean_c = 0.0;
  double cold_side_resistance_c_w =
      std::numeric_limits<double>::quiet_NaN();
  // Context for judging the reduction.
  double total_mass_kg = 0.0;
  double exhaust_efficiency = 0.0;
  double first_sample_power_w = 0.0;
  double last_sample_power_w = 0.0;
  double power_stddev_w = 0.0;
  std::size_t temperature_samples = 0;
  std::size_t power_samples = 0;
};

// Reduces a test campaign to its performance figures. Fuel burned is the
// operator's weighed figure; the canister capacity extrapolates the observed
// production rate to a full canister; specific figures divide by the dry
// device plus a full canister (fuel and tare).
inline TestSummary reduce_test(const std::vector<TemperatureSample>& temps,
                               const std::vector<PowerSample>& powers,
                               double fuel_burned_kg,
                               double device_dry_mass_kg,
                               double canister_fuel_capacity_kg,
                               const FuelSpec& fuel, Fraction eta_exh,
                               int smoothing_window = 1) {
  fuel.validate();
  if (temps.empty()) throw domain_error("reduce_test: empty temperature series");
  if (powers.size() < 2) {
    throw domain_error("reduce_test: need at least 2 power samples");
  }
  if (fuel_burned_kg <= 0.0) {
    throw domain_error("reduce_test: zero fuel burned");
  }
  require_positive(device_dry_mass_kg, "device dry mass [kg]");
  require_positive(canister_fuel_capacity_kg, "canister fuel capacity [kg]");
  if (eta_exh.value() <= 0.0) {
    throw domain_error("reduce_test: exhaust efficiency must be > 0");
  }

  const double power_span_s = powers.back().t_s - powers.front().t_s;
  const double temp_span_s = temps.back().t_s - temps.front().t_s;
  if (power_span_s <= 0.0) {
    throw domain_error("reduce_test: power series spans no time");
  }
  const double overlap_lo = std::max(powers.front().t_s, temps.front().t_s);
  const double overlap_hi = std::min(powers.back().t_s, temps.back().t_s);
  const double overlap = std::max(0.0, overlap_hi - overlap_lo);
  if (temp_span_s > 0.0 &&
      (overlap < 0.5 * power_span_s || overlap < 0.5 * temp_span_s)) {
    throw domain_error(
        "reduce_test: temperature and power series overlap by less than half "
        "of either duration");
  }

  TestSummary s;
  s.duration_h = power_span_s / 3600.0;
  s.energy_wh = integrate_energy_wh(powers);
  double sum = 0.0;
  for (const auto& p : powers) sum += p.power_w;
  s.avg_power_w = sum / double(powers.size());
  s.first_sample_power_w = powers.front().power_w;
  s.last_sample_power_w = powers.back().power_w;

  const std::vector<double> smooth = sliding_mean_power(powers, smoothing_window);
  const double smooth_mean =
      std::accumulate(smooth.begin(), smooth.end(), 0.0) / double(smooth.size());
  double var = 0.0;
  for (double v : smooth) var += (v - smooth_mean) * (v - smooth_mean);
  s.power_stddev_w = std::sqrt(var / double(smooth.size()));

  s.fuel_burned_kg = fuel_burned_kg;
  s.burn_rate_kg_h = fuel_burned_kg / s.duration_h;
  s.chemical_energy_wh = fuel_burned_kg * fuel.specific_energy_wh_kg;
  s.thermal_power_w = burner_thermal_power(s.burn_rate_kg_h, fuel);
  const ExhaustSplit split = exhaust_split(s.thermal_power_w, eta_exh);
  s.delivered_power_w = split.delivered_w;
  s.exhaust_loss_w = split.lost_w;
  s.system_efficiency = s.energy_wh / s.chemical_energy_wh;
  s.device_efficiency = s.system_efficiency / eta_exh.value();
  s.exhaust_efficiency = eta_exh.value();
  s.extrapolated_energy_wh =
      s.avg_power_w * (canister_fuel_capacity_kg / s.burn_rate_kg_h);
  s.total_mass_kg = device_dry_mass_kg +
                    canister_fuel_capacity_kg * (1.0 + fuel.tank_tare_ratio);
  s.specific_energy_wh_kg = s.extrapolated_energy_wh / s.total_mass_kg;
  s.specific_power_w_kg = s.avg_power_w / s.total_mass_kg;

  double dt_sum = 0.0, cold_sum = 0.0, amb_sum = 0.0;
  std::size_t dt_n = 0;
  for (const auto& t : temps) {
    if (temp_span_s > 0.0 && (t.t_s < overlap_lo || t.t_s > overlap_hi)) {
      continue;
    }
    dt_sum += t.hot_c - t.cold_c;
    cold_sum += t.cold_c;
    amb_sum += t.ambient_c;
    ++dt_n;
  }
  if (dt_n == 0) {
    for (const auto& t : temps) {
      dt_sum += t.hot_c - t.cold_c;
      cold_sum += t.cold_c;
      amb_sum += t.ambient_c;
      ++dt_n;
    }
  }
  s.delta_t_mean_c = dt_sum / double(dt_n);
  const double cold_mean = cold_sum / double(dt_n);
  const double amb_mean = amb_sum / double(dt_n);
  if (cold_mean > amb_mean && s.delivered_power_w > 0.0) {
    s.cold_side_resistance_c_w =
        cold_side_resistance_c_w(cold_mean, amb_mean, s.delivered_power_w);
  }
  s.temperature_samples = temps.size();
  s.power_samples = powers.size();
  return s;
}

}  // namespace endure
