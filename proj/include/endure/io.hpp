#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "endure/endurance.hpp"
#include "endure/parity.hpp"
#include "endure/registry.hpp"
#include "endure/telemetry.hpp"

namespace endure {

inline constexpr int kJsonSchemaVersion = 1;

// Writes through a sibling temp file and renames, so an interrupted run
// never leaves a truncated artifact behind.
inline void write_file_atomic(const std::filesystem::path& path,
                              const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw error("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw error("short write to '" + tmp.string() + "'");
  }
  fs::rename(tmp, path);
}

// 6 significant digits, plain decimal or exponent as %g chooses.
inline std::string format_sig6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

inline const char* bool_name(bool b) { return b ? "true" : "false"; }

inline std::string sweep_csv(const SweepGrid& grid) {
  std::string out =
      "battery_Wh,fuel_mL,endurance_h,avg_power_W,total_mass_kg,"
      "m_airframe_kg,m_battery_kg,m_hardware_kg,m_tank_kg,m_fuel_kg,"
      "feasible,binding_constraint,fuel_usable\n";
  for (std::size_t bi = 0; bi < grid.rows(); ++bi) {
    for (std::size_t fi = 0; fi < grid.cols(); ++fi) {
      const EnduranceResult& c = grid.at(bi, fi);
      out += format_sig6(grid.battery_wh[bi]);
      out += ',';
      out += format_sig6(grid.fuel_l[fi] * 1000.0);
      out += ',';
      out += format_sig6(c.endurance_h);
      out += ',';
      out += format_sig6(c.avg_power_w);
      out += ',';
      out += format_sig6(c.breakdown.total_kg);
      out += ',';
      out += format_sig6(c.breakdown.airframe_kg);
      out += ',';
      out += format_sig6(c.breakdown.battery_kg);
      out += ',';
      out += format_sig6(c.breakdown.generator_hardware_kg);
      out += ',';
      out += format_sig6(c.breakdown.tank_kg);
      out += ',';
      out += format_sig6(c.breakdown.fuel_kg);
      out += ',';
      out += bool_name(c.feasible);
      out += ',';
      out += binding_constraint_name(c.binding);
      out += ',';
      out += bool_name(c.fuel_usable);
      out += '\n';
    }
  }
  return out;
}

inline nlohmann::json design_json(const GeneratorDesign& d) {
  return {
      {"te_module", d.te_module.name},
      {"te_rated_power_w", d.te_module.rated_power_w},
      {"te_rated_efficiency", d.te_module.rated_efficiency.value()},
      {"device_efficiency", d.device_efficiency.value()},
      {"exhaust_efficiency", d.exhaust_efficiency.value()},
      {"fuel", d.fuel.name},
      {"fuel_specific_energy_wh_per_kg", d.fuel.specific_energy_wh_kg},
      {"fuel_liquid_density_kg_per_l", d.fuel.liquid_density_kg_l},
      {"tank_tare_ratio", d.fuel.tank_tare_ratio},
      {"fixed_overhead_mass_kg", d.fixed_overhead_mass_kg},
      {"hardware_mass_per_module_kg", d.hardware_mass_per_module_kg},
      {"cc_volume_per_watt_ml", d.cc_volume_per_watt_ml},
  };
}

inline std::string sweep_meta_json(const PlatformSpec& platform,
                                   const GeneratorDesign& design,
                                   const ConstraintSet& constraints,
                                   const SweepGrid& grid, long long seed) {
  nlohmann::json j{
      {"schema_version", kJsonSchemaVersion},
      {"platform",
       {{"name", platform.name},
        {"class", platform_class_name(platform.platform_class)},
        {"specific_power_w_per_kg", platform.specific_power_w_kg},
        {"battery_energy_wh", platform.battery_energy_wh},
        {"battery_mass_kg", platform.battery_mass_kg},
        {"battery_volume_l", platform.battery_volume_l},
        {"stated_endurance_h", platform.stated_endurance_h}}},
      {"design", design_json(design)},
      {"constraints",
       {{"mass_cap_kg", constraints.mass_cap_kg},
        {"volume_cap_l", constraints.volume_cap_l},
        {"volume_slack", constraints.volume_slack},
        {"cc_volume_per_watt_ml", constraints.cc_volume_per_watt_ml}}},
      {"grid",
       {{"battery_steps", grid.rows()},
        {"fuel_steps", grid.cols()},
        {"battery_wh_max", grid.battery_wh.empty() ? 0.0 : grid.battery_wh.back()},
        {"fuel_ml_max", grid.fuel_l.empty() ? 0.0 : grid.fuel_l.back() * 1000.0}}},
      {"seed", seed},
  };
  return j.dump(2) + "\n";
}

inline nlohmann::json parity_result_json(const ParityResult& r) {
  return {
      {"target_endurance_h", r.target_endurance_h},
      {"required_efficiency", r.required_efficiency},
      {"achieved_endurance_h", r.achieved_endurance_h},
      {"fuel_volume_l", r.fuel_volume_at_solution_l},
      {"fuel_mass_fraction", r.fuel_mass_fraction},
      {"te_array_side_cm", r.te_array_side_cm},
      {"iterations", r.iterations},
  };
}

inline std::string parity_csv(const std::vector<PlatformParityRow>& rows,
                              const std::vector<PlatformSpec>& platforms,
                              const GeneratorDesign& design,
                              const ConstraintSet& constraints) {
  std::string out =
      "platform,specific_power_W_kg,max_fuel_mL,eta_parity,eta_double,"
      "fuel_mass_fraction,volume_fraction,te_side_cm,status\n";
  for (const auto& row : rows) {
    const PlatformSpec& p = find_platform(platforms, row.platform_name);
    out += row.platform_name;
    out += ',';
    out += format_sig6(row.specific_power_w_kg);
    out += ',';
    std::string max_fuel = "", fmf = "", volfrac = "", side = "";
    if (row.parity) {
      max_fuel = format_sig6(row.parity->fuel_volume_at_solution_l * 1000.0);
      fmf = format_sig6(row.parity->fuel_mass_fraction);
      side = format_sig6(row.parity->te_array_side_cm);
      GeneratorDesign d = design;
      d.device_efficiency = Fraction::checked(row.parity->required_efficiency,
                                              "device efficiency");
      const EnduranceResult r = evaluate(
          p, d, HybridConfig{0.0, row.parity->fuel_volume_at_solution_l});
      volfrac = format_sig6(
          (r.build.fuel_volume_l +
           constraints.cc_volume_per_watt_ml * r.avg_power_w / 1000.0) /
          p.battery_volume_l);
    }
    out += max_fuel;
    out += ',';
    out += row.parity ? format_sig6(row.parity->required_efficiency) : "";
    out += ',';
    out += row.twice ? format_sig6(row.twice->required_efficiency) : "";
    out += ',';
    out += fmf;
    out += ',';
    out += volfrac;
    out += ',';
    out += side;
    out += ',';
    if (row.parity && row.twice) {
      out += "ok";
    } else {
      out += "error: ";
      out += !row.parity ? row.parity_issue : row.twice_issue;
    }
    out += '\n';
  }
  return out;
}

inline std::string test_summary_json(const TestSummary& s) {
  auto num = [](double v) {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
  };
  nlohmann::json j{
      {"schema_version", kJsonSchemaVersion},
      {"duration_h", num(s.duration_h)},
      {"avg_power_w", num(s.avg_power_w)},
      {"energy_wh", num(s.energy_wh)},
      {"fuel_burned_kg", num(s.fuel_burned_kg)},
      {"burn_rate_kg_per_h", num(s.burn_rate_kg_h)},
      {"chemical_energy_wh", num(s.chemical_energy_wh)},
      {"thermal_power_w", num(s.thermal_power_w)},
      {"delivered_power_w", num(s.delivered_power_w)},
      {"exhaust_loss_w", num(s.exhaust_loss_w)},
      {"system_efficiency", num(s.system_efficiency)},
      {"device_efficiency", num(s.device_efficiency)},
      {"exhaust_efficiency", num(s.exhaust_efficiency)},
      {"extrapolated_energy_wh", num(s.extrapolated_energy_wh)},
      {"specific_energy_wh_per_kg", num(s.specific_energy_wh_kg)},
      {"specific_power_w_per_kg", num(s.specific_power_w_kg)},
      {"delta_t_mean_c", num(s.delta_t_mean_c)},
      {"cold_side_resistance_c_per_w", num(s.cold_side_resistance_c_w)},
      {"total_mass_kg", num(s.total_mass_kg)},
      {"first_sample_power_w", num(s.first_sample_power_w)},
      {"last_sample_power_w", num(s.last_sample_power_w)},
      {"power_stddev_w", num(s.power_stddev_w)},
      {"temperature_samples", s.temperature_samples},
      {"power_samples", s.power_samples},
  };
  return j.dump(2) + "\n";
}

inline std::string smoothed_power_csv(const std::vector<PowerSample>& samples,
                                      const std::vector<double>& smoothed) {
  std::string out = "time_s,power_W,power_smoothed_W\n";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out += format_sig6(samples[i].t_s);
    out += ',';
    out += format_sig6(samples[i].power_w);
    out += ',';
    out += format_sig6(smoothed[i]);
    out += '\n';
  }
  return out;
}

}  // namespace endure
