// endure: hybrid powertrain endurance models for small unmanned systems.
//
// Subcommands: sweep, parity, maxfuel, reduce, scale-dt, platforms.
// Exit codes: 0 success, 2 usage/config error, 3 model/domain error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "endure/io.hpp"
#include "endure/parity.hpp"
#include "endure/registry.hpp"
#include "endure/telemetry.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitModel = 3;

struct Overrides {
  std::optional<std::string> platform;
  std::optional<std::string> te_module;
  std::optional<std::string> fuel;
  std::optional<double> eta_dev;
  std::optional<double> eta_exh;
  std::optional<double> overhead_g;
  std::optional<double> per_module_g;
  std::optional<double> tank_tare_ratio;
  std::optional<double> cc_ml_per_w;
  std::optional<double> volume_slack;
  std::optional<int> battery_steps;
  std::optional<int> fuel_steps;
  std::optional<std::string> out_dir;
  std::optional<int> jobs;
  std::optional<long long> seed;

  // Later layers win field by field.
  void layer(const Overrides& over) {
    auto pick = [](auto& base, const auto& top) {
      if (top) base = top;
    };
    pick(platform, over.platform);
    pick(te_module, over.te_module);
    pick(fuel, over.fuel);
    pick(eta_dev, over.eta_dev);
    pick(eta_exh, over.eta_exh);
    pick(overhead_g, over.overhead_g);
    pick(per_module_g, over.per_module_g);
    pick(tank_tare_ratio, over.tank_tare_ratio);
    pick(cc_ml_per_w, over.cc_ml_per_w);
    pick(volume_slack, over.volume_slack);
    pick(battery_steps, over.battery_steps);
    pick(fuel_steps, over.fuel_steps);
    pick(out_dir, over.out_dir);
    pick(jobs, over.jobs);
    pick(seed, over.seed);
  }
};

Overrides load_config_file(const std::string& path) {
  const auto j = nlohmann::json::parse(endure::read_text_file(path));
  Overrides o;
  auto get = [&](const char* key, auto& slot) {
    if (j.contains(key)) {
      slot = j.at(key).get<typename std::decay_t<decltype(slot)>::value_type>();
    }
  };
  get("platform", o.platform);
  get("te_module", o.te_module);
  get("fuel", o.fuel);
  get("eta_dev", o.eta_dev);
  get("eta_exh", o.eta_exh);
  get("overhead_g", o.overhead_g);
  get("per_module_g", o.per_module_g);
  get("tank_tare_ratio", o.tank_tare_ratio);
  get("cc_ml_per_w", o.cc_ml_per_w);
  get("volume_slack", o.volume_slack);
  get("battery_steps", o.battery_steps);
  get("fuel_steps", o.fuel_steps);
  get("out_dir", o.out_dir);
  get("jobs", o.jobs);
  get("seed", o.seed);
  return o;
}

struct ResolvedRun {
  std::vector<endure::PlatformSpec> platforms;
  endure::GeneratorDesign design;
  double volume_slack = endure::kDefaultVolumeSlack;
  double cc_ml_per_w = endure::kDefaultCcVolumePerWattMl;
  std::string out_dir = ".";
  int battery_steps = 50;
  int fuel_steps = 50;
  int jobs = 1;
  long long seed = 0;
};

ResolvedRun resolve(const Overrides& o, const std::string& registry_path) {
  ResolvedRun r;
  const auto components = endure::builtin_components();
  r.platforms = endure::resolve_platforms(registry_path);
  r.design = endure::default_generator_design(
      components, o.te_module.value_or("monTEG"), o.fuel.value_or("butane"));
  if (o.eta_dev) {
    r.design.device_efficiency =
        endure::Fraction::checked(*o.eta_dev, "--eta-dev");
  }
  if (o.eta_exh) {
    r.design.exhaust_efficiency =
        endure::Fraction::checked(*o.eta_exh, "--eta-exh");
  }
  if (o.overhead_g) r.design.fixed_overhead_mass_kg = *o.overhead_g / 1000.0;
  if (o.per_module_g) {
    r.design.hardware_mass_per_module_kg = *o.per_module_g / 1000.0;
  }
  if (o.tank_tare_ratio) r.design.fuel.tank_tare_ratio = *o.tank_tare_ratio;
  if (o.cc_ml_per_w) {
    r.design.cc_volume_per_watt_ml = *o.cc_ml_per_w;
    r.cc_ml_per_w = *o.cc_ml_per_w;
  }
  if (o.volume_slack) r.volume_slack = *o.volume_slack;
  if (o.battery_steps) r.battery_steps = *o.battery_steps;
  if (o.fuel_steps) r.fuel_steps = *o.fuel_steps;
  if (o.out_dir) r.out_dir = *o.out_dir;
  if (o.jobs) r.jobs = *o.jobs;
  if (o.seed) r.seed = *o.seed;
  r.design.validate();
  return r;
}

endure::ConstraintSet constraints_for(const ResolvedRun& run,
                                      const endure::PlatformSpec& p) {
  endure::ConstraintSet c = endure::ConstraintSet::for_platform(p);
  c.volume_slack = run.volume_slack;
  c.cc_volume_per_watt_ml = run.cc_ml_per_w;
  c.validate();
  return c;
}

int cmd_sweep(const Overrides& o, const std::string& registry_path) {
  ResolvedRun run;
  const endure::PlatformSpec* platform = nullptr;
  try {
    run = resolve(o, registry_path);
    if (!o.platform) {
      std::cerr << "sweep: --platform is required\n";
      return kExitConfig;
    }
    platform = &endure::find_platform(run.platforms, *o.platform);
  } catch (const endure::error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    const auto constraints = constraints_for(run, *platform);
    const auto grid = endure::sweep(*platform, run.design, run.battery_steps,
                                    run.fuel_steps, constraints, run.jobs);
    namespace fs = std::filesystem;
    const fs::path dir(run.out_dir);
    endure::write_file_atomic(dir / "sweep.csv", endure::sweep_csv(grid));
    endure::write_file_atomic(
        dir / "sweep.meta.json",
        endure::sweep_meta_json(*platform, run.design, constraints, grid,
                                run.seed));

    const auto& battery_only = grid.at(grid.rows() - 1, 0);
    const auto& fuel_only = grid.at(0, grid.cols() - 1);
    const auto& both = grid.at(grid.rows() - 1, grid.cols() - 1);
    std::printf("sweep: %s, %zux%zu cells -> %s\n", platform->name.c_str(),
                grid.rows(), grid.cols(), (dir / "sweep.csv").c_str());
    std::printf("  stock battery, no fuel : %s h\n",
                endure::format_sig6(battery_only.endurance_h).c_str());
    std::printf("  max fuel, no battery   : %s h (%s mL)\n",
                endure::format_sig6(fuel_only.endurance_h).c_str(),
                endure::format_sig6(grid.fuel_l.back() * 1000.0).c_str());
    std::printf("  stock battery, max fuel: %s h (%s)\n",
                endure::format_sig6(both.endurance_h).c_str(),
                both.feasible ? "feasible" : "infeasible");
    return kExitOk;
  } catch (const endure::error& e) {
    std::cerr << "model error: " << e.what() << "\n";
    return kExitModel;
  }
}

int cmd_maxfuel(const Overrides& o, const std::string& registry_path) {
  ResolvedRun run;
  const endure::PlatformSpec* platform = nullptr;
  try {
    run = resolve(o, registry_path);
    if (!o.platform) {
      std::cerr << "maxfuel: --platform is required\n";
      return kExitConfig;
    }
    platform = &endure::find_platform(run.platforms, *o.platform);
  } catch (const endure::error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    const auto constraints = constraints_for(run, *platform);
    const auto mf = endure::max_fuel_volume(*platform, run.design, constraints);
    const auto r = endure::evaluate(*platform, run.design,
                                    endure::HybridConfig{0.0, mf.volume_l});
    std::printf("%s: max fuel %s mL (%s-bound)\n", platform->name.c_str(),
                endure::format_sig6(mf.volume_l * 1000.0).c_str(),
                endure::binding_constraint_name(mf.binding));
    std::printf("  generator mass %s kg of %s kg cap, fuel mass fraction %s\n",
                endure::format_sig6(r.build.total_mass_kg()).c_str(),
                endure::format_sig6(constraints.mass_cap_kg).c_str(),
                endure::format_sig6(r.build.fuel_mass_fraction()).c_str());
    std::printf("  pure-fuel endurance %s h at eta_dev %s\n",
                endure::format_sig6(r.endurance_h).c_str(),
                endure::format_sig6(
                    run.design.device_efficiency.value()).c_str());
    return kExitOk;
  } catch (const endure::error& e) {
    std::cerr << "model error: " << e.what() << "\n";
    return kExitModel;
  }
}

int cmd_parity(const Overrides& o, const std::string& registry_path,
               bool all_platforms, std::optional<double> multiple) {
  ResolvedRun run;
  std::vector<endure::PlatformSpec> selected;
  try {
    run = resolve(o, registry_path);
    if (all_platforms) {
      selected = run.platforms;
    } else if (o.platform) {
      selected = {endure::find_platform(run.platforms, *o.platform)};
    } else {
      std::cerr << "parity: give --platform NAME or --all\n";
      return kExitConfig;
    }
  } catch (const endure::error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  endure::ConstraintSet base;
  base.mass_cap_kg = 1.0;
  base.volume_cap_l = 1.0;
  base.volume_slack = run.volume_slack;
  base.cc_volume_per_watt_ml = run.cc_ml_per_w;

  int successes = 0;
  if (multiple) {
    // Single-multiple query for one or more platforms.
    for (const auto& p : selected) {
      try {
        const auto r = endure::required_efficiency(p, run.design, *multiple,
                                                   constraints_for(run, p));
        std::printf(
            "%-12s x%-4g eta_dev %7.4f  (fuel %s mL, fmf %s, TE side %s cm, "
            "%d iterations)\n",
            p.name.c_str(), *multiple, r.required_efficiency,
            endure::format_sig6(r.fuel_volume_at_solution_l * 1000.0).c_str(),
            endure::format_sig6(r.fuel_mass_fraction).c_str(),
            endure::format_sig6(r.te_array_side_cm).c_str(), r.iterations);
        ++successes;
      } catch (const endure::error& e) {
        std::printf("%-12s x%-4g error: %s\n", p.name.c_str(), *multiple,
                    e.what());
      }
    }
    return successes > 0 ? kExitOk : kExitModel;
  }

  try {
    const auto rows = endure::parity_table(selected, run.design, base);
    std::printf(
        "%-12s %14s %12s %10s %10s %8s %8s %8s\n", "platform", "power W/kg",
        "max fuel mL", "eta x1", "eta x2", "fmf", "vol frac", "side cm");
    for (const auto& row : rows) {
      const auto& p = endure::find_platform(run.platforms, row.platform_name);
      std::string eta1 = "-", eta2 = "-", fuel = "-", fmf = "-", side = "-",
                  volfrac = "-";
      if (row.parity) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.4f", row.parity->required_efficiency);
        eta1 = buf;
        fuel = endure::format_sig6(row.parity->fuel_volume_at_solution_l * 1000.0);
        fmf = endure::format_sig6(row.parity->fuel_mass_fraction);
        side = endure::format_sig6(row.parity->te_array_side_cm);
        endure::GeneratorDesign d = run.design;
        d.device_efficiency = endure::Fraction::checked(
            row.parity->required_efficiency, "eta_dev");
        const auto ev = endure::evaluate(
            p, d,
            endure::HybridConfig{0.0, row.parity->fuel_volume_at_solution_l});
        volfrac = endure::format_sig6(
            (ev.build.fuel_volume_l +
             run.cc_ml_per_w * ev.avg_power_w / 1000.0) /
            p.battery_volume_l);
      }
      if (row.twice) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.4f", row.twice->required_efficiency);
        eta2 = buf;
      }
      std::printf("%-12s %14s %12s %10s %10s %8s %8s %8s\n",
                  row.platform_name.c_str(),
                  endure::format_sig6(row.specific_power_w_kg).c_str(),
                  fuel.c_str(), eta1.c_str(), eta2.c_str(), fmf.c_str(),
                  volfrac.c_str(), side.c_str());
      if (!row.parity) {
        std::printf("  x1 issue: %s\n", row.parity_issue.c_str());
      }
      if (!row.twice) {
        std::printf("  x2 issue: %s\n", row.twice_issue.c_str());
      }
      if (row.parity || row.twice) ++successes;
    }
    namespace fs = std::filesystem;
    endure::write_file_atomic(
        fs::path(run.out_dir) / "parity.csv",
        endure::parity_csv(rows, run.platforms, run.design, base));
    return successes > 0 ? kExitOk : kExitModel;
  } catch (const endure::error& e) {
    std::cerr << "model error: " << e.what() << "\n";
    return kExitModel;
  }
}

struct ReduceArgs {
  std::string temp_log;
  std::string power_log;
  double fuel_burned_g = 0.0;
  double dry_mass_g = 0.0;
  double canister_g = 0.0;
  double eta_exh = 0.40;
  int window = 100;
  std::string temp_columns = "timestamp,T_hot_C,T_cold_C,T_amb_C";
  std::string power_columns = "time_s,voltage_V,current_A";
  std::string delimiter = ",";
};

int cmd_reduce(const ReduceArgs& a, const Overrides& o,
               const std::string& registry_path) {
  endure::FuelSpec fuel;
  endure::TemperatureColumns tcols;
  endure::PowerColumns pcols;
  char delim = ',';
  try {
    const auto components = endure::builtin_components();
    fuel = components.fuel(o.fuel.value_or("butane"));
    if (o.tank_tare_ratio) fuel.tank_tare_ratio = *o.tank_tare_ratio;
    auto names = [](const std::string& csv) {
      std::vector<std::string> out;
      std::string cur;
      for (char c : csv) {
        if (c == ',') {
          out.push_back(cur);
          cur.clear();
        } else {
          cur.push_back(c);
        }
      }
      out.push_back(cur);
      return out;
    };
    const auto tn = names(a.temp_columns);
    if (tn.size() != 4) {
      std::cerr << "config error: --temp-columns needs 4 names "
                   "(time,hot,cold,ambient), got '"
                << a.temp_columns << "'\n";
      return kExitConfig;
    }
    tcols.time = tn[0];
    tcols.hot = tn[1];
    tcols.cold = tn[2];
    tcols.ambient = tn[3];
    const auto pn = names(a.power_columns);
    if (pn.size() != 3 && pn.size() != 4) {
      std::cerr << "config error: --power-columns needs 3 or 4 names "
                   "(time,voltage,current[,power]), got '"
                << a.power_columns << "'\n";
      return kExitConfig;
    }
    pcols.time = pn[0];
    pcols.voltage = pn[1];
    pcols.current = pn[2];
    if (pn.size() == 4) pcols.power = pn[3];
    if (a.delimiter.size() != 1) {
      std::cerr << "config error: --delimiter must be one character\n";
      return kExitConfig;
    }
    delim = a.delimiter[0];
    if (a.window < 1) {
      std::cerr << "config error: --window must be >= 1\n";
      return kExitConfig;
    }
    (void)registry_path;
  } catch (const endure::error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  endure::TemperatureLog temps;
  endure::PowerLog powers;
  try {
    std::ifstream tin(a.temp_log, std::ios::binary);
    if (!tin) {
      std::cerr << "config error: cannot open '" << a.temp_log << "'\n";
      return kExitConfig;
    }
    temps = endure::parse_temperature_log(tin, tcols, delim);
    std::ifstream pin(a.power_log, std::ios::binary);
    if (!pin) {
      std::cerr << "config error: cannot open '" << a.power_log << "'\n";
      return kExitConfig;
    }
    powers = endure::parse_power_log(pin, pcols, delim);
  } catch (const endure::parse_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    const auto summary = endure::reduce_test(
        temps.samples, powers.samples, a.fuel_burned_g / 1000.0,
        a.dry_mass_g / 1000.0, a.canister_g / 1000.0, fuel,
        endure::Fraction::checked(a.eta_exh, "--eta-exh"), a.window);
    namespace fs = std::filesystem;
    const fs::path dir(o.out_dir.value_or("."));
    endure::write_file_atomic(dir / "summary.json",
                              endure::test_summary_json(summary));
    const auto smoothed =
        endure::sliding_mean_power(powers.samples, a.window);
    endure::write_file_atomic(
        dir / "power_smoothed.csv",
        endure::smoothed_power_csv(powers.samples, smoothed));

    auto line = [](const char* k, const std::string& v) {
      std::printf("%-28s %s\n", k, v.c_str());
    };
    using endure::format_sig6;
    line("duration [h]", format_sig6(summary.duration_h));
    line("average power [W]", format_sig6(summary.avg_power_w));
    line("energy [Wh]", format_sig6(summary.energy_wh));
    line("chemical energy [Wh]", format_sig6(summary.chemical_energy_wh));
    line("burn rate [g/h]", format_sig6(summary.burn_rate_kg_h * 1000.0));
    line("thermal power [W]", format_sig6(summary.thermal_power_w));
    line("delivered / lost [W]",
         format_sig6(summary.delivered_power_w) + " / " +
             format_sig6(summary.exhaust_loss_w));
    line("system efficiency", format_sig6(summary.system_efficiency));
    line("device efficiency", format_sig6(summary.device_efficiency));
    line("extrapolated energy [Wh]",
         format_sig6(summary.extrapolated_energy_wh));
    line("specific energy [Wh/kg]", format_sig6(summary.specific_energy_wh_kg));
    line("specific power [W/kg]", format_sig6(summary.specific_power_w_kg));
    line("mean delta-T [degC]", format_sig6(summary.delta_t_mean_c));
    if (std::isfinite(summary.cold_side_resistance_c_w)) {
      line("cold side R [degC/W]",
           format_sig6(summary.cold_side_resistance_c_w));
    }
    if (temps.skipped_rows + powers.skipped_rows > 0) {
      std::printf("(skipped rows: %zu temperature, %zu power)\n",
                  temps.skipped_rows, powers.skipped_rows);
    }
    if (powers.vi_mismatch_count > 0) {
      std::printf("(power column disagrees with V*I on %zu rows)\n",
                  powers.vi_mismatch_count);
    }
    return kExitOk;
  } catch (const endure::error& e) {
    std::cerr << "model error: " << e.what() << "\n";
    return kExitModel;
  }
}

int cmd_scale_dt(double power_w, double eta, double dt_ref, double dt_to,
                 int steps) {
  try {
    endure::require_positive(power_w, "--power");
    const auto base_eta = endure::Fraction::checked(eta, "--eta");
    endure::require_positive(dt_ref, "--dt-ref");
    endure::require_positive(dt_to, "--dt-to");
    if (steps < 1) throw endure::domain_error("--steps must be >= 1");
    // The whole range must stay physical before anything is printed.
    endure::scale_with_delta_t(power_w, base_eta, dt_ref,
                               std::max(dt_ref, dt_to));
  } catch (const endure::error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  std::printf("%10s %12s %12s\n", "dT [degC]", "power [W]", "efficiency");
  for (int i = 0; i <= steps; ++i) {
    const double dt = dt_ref + (dt_to - dt_ref) * double(i) / double(steps);
    const auto p = endure::scale_with_delta_t(
        power_w, endure::Fraction::checked(eta, "eta"), dt_ref, dt);
    std::printf("%10s %12s %12s\n", endure::format_sig6(dt).c_str(),
                endure::format_sig6(p.power_w).c_str(),
                endure::format_sig6(p.efficiency.value()).c_str());
  }
  return kExitOk;
}

int cmd_platforms_list(const std::string& registry_path) {
  try {
    const auto platforms = endure::resolve_platforms(registry_path);
    std::printf("%-12s %-16s %10s %12s %10s %10s %12s\n", "name", "class",
                "p [W/kg]", "E [Wh]", "m [kg]", "V [L]", "t [h]");
    for (const auto& p : platforms) {
      std::printf("%-12s %-16s %10s %12s %10s %10s %12s\n", p.name.c_str(),
                  endure::platform_class_name(p.platform_class),
                  endure::format_sig6(p.specific_power_w_kg).c_str(),
                  endure::format_sig6(p.battery_energy_wh).c_str(),
                  endure::format_sig6(p.battery_mass_kg).c_str(),
                  endure::format_sig6(p.battery_volume_l).c_str(),
                  endure::format_sig6(p.stated_endurance_h).c_str());
      if (!p.notes.empty()) std::printf("    %s\n", p.notes.c_str());
    }
    return kExitOk;
  } catch (const endure::error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"endurance models for battery, butane-TEG, and hybrid power"};
  app.require_subcommand(1);

  std::string config_path;
  std::string registry_path;
  app.add_option("--config", config_path, "JSON config file (defaults < config < flags)");
  app.add_option("--platforms", registry_path,
                 "platform registry JSON (also: ENDURE_PLATFORMS)");

  Overrides flags;
  auto add_design_flags = [&](CLI::App* cmd) {
    cmd->add_option("--platform", flags.platform, "platform name");
    cmd->add_option("--te-module", flags.te_module, "TE module name");
    cmd->add_option("--fuel", flags.fuel, "fuel name");
    cmd->add_option("--eta-dev", flags.eta_dev, "device efficiency (0,1)");
    cmd->add_option("--eta-exh", flags.eta_exh, "exhaust efficiency (0,1]");
    cmd->add_option("--overhead-g", flags.overhead_g, "fixed overhead mass [g]");
    cmd->add_option("--per-module-g", flags.per_module_g,
                    "hardware mass per TE module [g]");
    cmd->add_option("--tare", flags.tank_tare_ratio, "tank grams per fuel gram");
    cmd->add_option("--cc-ml-per-w", flags.cc_ml_per_w,
                    "combustion chamber volume per watt [mL/W]");
    cmd->add_option("--volume-slack", flags.volume_slack,
                    "volume cap slack [1,1.25]");
    cmd->add_option("--out", flags.out_dir, "output directory");
    cmd->add_option("--jobs", flags.jobs, "worker threads (1 = serial)");
    cmd->add_option("--seed", flags.seed, "seed echoed into JSON metadata");
  };

  auto* sweep_cmd = app.add_subcommand("sweep", "battery x fuel endurance grid");
  add_design_flags(sweep_cmd);
  std::optional<int> steps;
  sweep_cmd->add_option("--steps", steps, "points per axis (sets both)");
  sweep_cmd->add_option("--battery-steps", flags.battery_steps,
                        "points on the battery axis");
  sweep_cmd->add_option("--fuel-steps", flags.fuel_steps,
                        "points on the fuel axis");

  auto* parity_cmd =
      app.add_subcommand("parity", "device efficiency for endurance targets");
  add_design_flags(parity_cmd);
  bool parity_all = false;
  std::optional<double> parity_multiple;
  parity_cmd->add_flag("--all", parity_all, "all platforms in the registry");
  parity_cmd->add_option("--multiple", parity_multiple,
                         "endurance multiple (default: both 1 and 2)");

  auto* maxfuel_cmd =
      app.add_subcommand("maxfuel", "largest fuel volume the rules admit");
  add_design_flags(maxfuel_cmd);

  auto* reduce_cmd =
      app.add_subcommand("reduce", "reduce burner-test telemetry logs");
  ReduceArgs reduce_args;
  reduce_cmd->add_option("--temp-log", reduce_args.temp_log, "temperature CSV")
      ->required();
  reduce_cmd->add_option("--power-log", reduce_args.power_log, "power CSV")
      ->required();
  reduce_cmd
      ->add_option("--fuel-burned-g", reduce_args.fuel_burned_g,
                   "fuel consumed during the test [g]")
      ->required();
  reduce_cmd
      ->add_option("--dry-mass-g", reduce_args.dry_mass_g,
                   "device mass without the canister [g]")
      ->required();
  reduce_cmd
      ->add_option("--canister-g", reduce_args.canister_g,
                   "fuel capacity of a full canister [g]")
      ->required();
  reduce_cmd->add_option("--eta-exh", reduce_args.eta_exh,
                         "exhaust efficiency (default 0.40)");
  reduce_cmd->add_option("--window", reduce_args.window,
                         "sliding mean window in samples (default 100)");
  reduce_cmd->add_option("--temp-columns", reduce_args.temp_columns,
                         "time,hot,cold,ambient header names");
  reduce_cmd->add_option("--power-columns", reduce_args.power_columns,
                         "time,voltage,current[,power] header names");
  reduce_cmd->add_option("--delimiter", reduce_args.delimiter,
                         "CSV delimiter (default ,)");
  reduce_cmd->add_option("--fuel", flags.fuel, "fuel name");
  reduce_cmd->add_option("--tare", flags.tank_tare_ratio,
                         "tank grams per fuel gram");
  reduce_cmd->add_option("--out", flags.out_dir, "output directory");

  auto* scale_cmd =
      app.add_subcommand("scale-dt", "scale a TE operating point with delta-T");
  double sc_power = 0.0, sc_eta = 0.0, sc_ref = 0.0, sc_to = 0.0;
  int sc_steps = 10;
  scale_cmd->add_option("--power", sc_power, "base power [W]")->required();
  scale_cmd->add_option("--eta", sc_eta, "base efficiency")->required();
  scale_cmd->add_option("--dt-ref", sc_ref, "base delta-T [degC]")->required();
  scale_cmd->add_option("--dt-to", sc_to, "end of the range [degC]")->required();
  scale_cmd->add_option("--steps", sc_steps, "table rows (default 10)");

  auto* platforms_cmd = app.add_subcommand("platforms", "registry inspection");
  auto* list_cmd = platforms_cmd->add_subcommand("list", "list platforms");
  (void)list_cmd;
  platforms_cmd->require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  Overrides merged;
  if (!config_path.empty()) {
    try {
      merged.layer(load_config_file(config_path));
    } catch (const std::exception& e) {
      std::cerr << "config error: " << config_path << ": " << e.what() << "\n";
      return kExitConfig;
    }
  }
  merged.layer(flags);
  if (steps) {
    merged.battery_steps = *steps;
    merged.fuel_steps = *steps;
  }

  if (sweep_cmd->parsed()) return cmd_sweep(merged, registry_path);
  if (parity_cmd->parsed()) {
    return cmd_parity(merged, registry_path, parity_all, parity_multiple);
  }
  if (maxfuel_cmd->parsed()) return cmd_maxfuel(merged, registry_path);
  if (reduce_cmd->parsed()) return cmd_reduce(reduce_args, merged, registry_path);
  if (scale_cmd->parsed()) {
    return cmd_scale_dt(sc_power, sc_eta, sc_ref, sc_to, sc_steps);
  }
  if (platforms_cmd->parsed()) return cmd_platforms_list(registry_path);
  return kExitConfig;
}
