#pragma once

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

#include "endure/errors.hpp"
#include "endure/platform.hpp"
#include "endure/powerplant.hpp"

namespace endure {

// One point of the hybrid design space: how much battery energy is carried
// and how much liquid fuel.
struct HybridConfig {
  double battery_energy_wh = 0.0;
  double fuel_volume_l = 0.0;

  void validate() const {
    require_nonnegative(battery_energy_wh, "battery energy [Wh]");
    require_nonnegative(fuel_volume_l, "fuel volume [L]");
    if (battery_energy_wh == 0.0 && fuel_volume_l == 0.0) {
      throw domain_error("hybrid config carries neither battery nor fuel");
    }
  }
};

// Generator sizing rules: the generator (hardware + tank + fuel) may not
// outweigh the battery it replaces, and fuel plus combustion chamber may not
// appreciably exceed the battery's volume.
struct ConstraintSet {
  double mass_cap_kg = 0.0;    // stock battery mass
  double volume_cap_l = 0.0;   // stock battery volume
  double volume_slack = 1.05;  // "not appreciably exceed"
  double cc_volume_per_watt_ml = 1.4;

  static ConstraintSet for_platform(const PlatformSpec& p) {
    ConstraintSet c;
    c.mass_cap_kg = p.battery_mass_kg;
    c.volume_cap_l = p.battery_volume_l;
    return c;
  }

  void validate() const {
    require_positive(mass_cap_kg, "mass cap [kg]");
    require_positive(volume_cap_l, "volume cap [L]");
    require_positive(cc_volume_per_watt_ml, "CC volume per watt [mL/W]");
    if (!(volume_slack >= 1.0 && volume_slack <= 1.25)) {
      throw domain_error("volume slack must lie in [1, 1.25]");
    }
  }
};

struct MassBreakdown {
  double airframe_kg = 0.0;
  double battery_kg = 0.0;
  double generator_hardware_kg = 0.0;
  double tank_kg = 0.0;
  double fuel_kg = 0.0;
  double total_kg = 0.0;  // always the exact sum of the parts
};

enum class BindingConstraint { none, mass_cap, volume_cap, te_power };

inline const char* binding_constraint_name(BindingConstraint b) {
  switch (b) {
    case BindingConstraint::none: return "none";
    case BindingConstraint::mass_cap: return "mass_cap";
    case BindingConstraint::volume_cap: return "volume_cap";
    case BindingConstraint::te_power: return "te_power";
  }
  return "?";
}

struct EnduranceResult {
  double endurance_h = 0.0;
  double avg_power_w = 0.0;
  double total_energy_wh = 0.0;  // battery + fuel-derived electrical
  MassBreakdown breakdown;
  bool feasible = true;
  BindingConstraint binding = BindingConstraint::none;
  bool fuel_usable = true;
  // Extra detail for reports and feasibility checks.
  GeneratorBuild build;
  double fuel_electrical_wh = 0.0;
  int sizing_iterations = 0;
};

namespace detail {

constexpr int kMaxSizingIterations = 32;

// Module count fixed point: the array must cover the platform's average
// power, which grows with the array's own hardware mass. The map
// n -> ceil(P(n) / per_module) is monotone, so iteration either settles on
// the least fixed point or grows without bound. Unbounded growth means no
// array can carry the load: the fuel is dead weight (te_power infeasible)
// and a minimal one-module array is kept as its hardware.
struct SizedGenerator {
  int n_modules = 1;
  double avg_power_w = 0.0;
  bool converged = false;
  int iterations = 0;
};

inline SizedGenerator size_for_configuration(double base_mass_kg,
                                             double fuel_and_tank_kg,
                                             double specific_power_w_kg,
                                             const GeneratorDesign& design) {
  const double per_module = design.per_module_power_w();
  SizedGenerator s;
  int n = 1;
  for (int i = 0; i < kMaxSizingIterations; ++i) {
    s.iterations = i + 1;
    const double hardware = design.fixed_overhead_mass_kg +
                            n * design.hardware_mass_per_module_kg;
    const double total = base_mass_kg + hardware + fuel_and_tank_kg;
    const double power = specific_power_w_kg * total;
    const int need = std::max(1, int(std::ceil(power / per_module)));
    if (need == n) {
      s.n_modules = n;
      s.avg_power_w = power;
      s.converged = true;
      return s;
    }
    n = need;
  }
  s.n_modules = 1;
  s.converged = false;
  return s;
}

}  // namespace detail

// Evaluates the endurance of one hybrid configuration on a platform.
// Total mass feeds back into required power; the TE array is sized to that
// power by fixed-point iteration. Carrying no fuel means carrying no
// generator at all.
inline EnduranceResult evaluate(const PlatformSpec& platform,
                                const GeneratorDesign& design,
                                const HybridConfig& config) {
  config.validate();
  design.validate();
  const MassClosure closure = mass_closure(platform);

  EnduranceResult r;
  r.breakdown.airframe_kg = closure.empty_mass_kg;
  r.breakdown.battery_kg =
      platform.battery_mass_kg *
      (config.battery_energy_wh / platform.battery_energy_wh);

  if (config.fuel_volume_l <= 0.0) {
    r.breakdown.total_kg = r.breakdown.airframe_kg + r.breakdown.battery_kg;
    r.avg_power_w = platform.specific_power_w_kg * r.breakdown.total_kg;
    r.total_energy_wh = config.battery_energy_wh;
    r.endurance_h = r.total_energy_wh / r.avg_power_w;
    return r;
  }

  const double fuel_mass =
      config.fuel_volume_l * design.fuel.liquid_density_kg_l;
  const double tank_mass = fuel_mass * design.fuel.tank_tare_ratio;
  const double base = r.breakdown.airframe_kg + r.breakdown.battery_kg;

  const detail::SizedGenerator sized = detail::size_for_configuration(
      base, fuel_mass + tank_mass, platform.specific_power_w_kg, design);
  r.sizing_iterations = sized.iterations;

  r.build = build_generator(std::max(sized.avg_power_w, 1e-9),
                            config.fuel_volume_l, design);
  if (!sized.converged) {
    // Runaway sizing: rebuild at one module and mark the fuel unusable.
    GeneratorBuild dead;
    dead.n_modules = 1;
    dead.te_array_side_cm = design.te_module.side_length_cm;
    dead.max_electrical_power_w = design.per_module_power_w();
    dead.dry_hardware_mass_kg =
        design.fixed_overhead_mass_kg + design.hardware_mass_per_module_kg;
    dead.fuel_volume_l = config.fuel_volume_l;
    dead.fuel_mass_kg = fuel_mass;
    dead.tank_mass_kg = tank_mass;
    dead.electrical_energy_wh =
        electrical_energy_from_fuel(config.fuel_volume_l, design);
    r.build = dead;
    r.fuel_usable = false;
    r.binding = BindingConstraint::te_power;
  }

  r.breakdown.generator_hardware_kg = r.build.dry_hardware_mass_kg;
  r.breakdown.tank_kg = tank_mass;
  r.breakdown.fuel_kg = fuel_mass;
  r.breakdown.total_kg = r.breakdown.airframe_kg + r.breakdown.battery_kg +
                         r.breakdown.generator_hardware_kg +
                         r.breakdown.tank_kg + r.breakdown.fuel_kg;
  r.avg_power_w = platform.specific_power_w_kg * r.breakdown.total_kg;
  // Chamber volume follows the power actually drawn in this configuration.
  r.build.cc_volume_l =
      design.cc_volume_per_watt_ml * r.avg_power_w / 1000.0;

  if (r.fuel_usable) {
    r.fuel_usable = r.build.max_electrical_power_w >= r.avg_power_w * (1.0 - 1e-12);
    if (!r.fuel_usable) r.binding = BindingConstraint::te_power;
  }
  r.fuel_electrical_wh = r.build.electrical_energy_wh;
  r.total_energy_wh = config.battery_energy_wh + r.fuel_electrical_wh;
  const double usable_energy =
      r.fuel_usable ? r.total_energy_wh : config.battery_energy_wh;
  r.endurance_h = usable_energy / r.avg_power_w;
  return r;
}

// Itemized masses of a configuration, consistent with evaluate().
inline MassBreakdown mass_breakdown(const PlatformSpec& platform,
                                    const GeneratorDesign& design,
                                    const HybridConfig& config) {
  return evaluate(platform, design, config).breakdown;
}

struct MaxFuelResult {
  double volume_l = 0.0;
  BindingConstraint binding = BindingConstraint::none;
};

namespace detail {

struct FuelFeasibility {
  bool mass_ok = true;
  bool volume_ok = true;
  bool ok() const { return mass_ok && volume_ok; }
};

inline FuelFeasibility check_fuel_volume(const PlatformSpec& platform,
                                         const GeneratorDesign& design,
                                         const ConstraintSet& constraints,
                                         double volume_l) {
  const EnduranceResult r =
      evaluate(platform, design, HybridConfig{0.0, volume_l});
  FuelFeasibility f;
  const double gen_mass = r.build.total_mass_kg();
  f.mass_ok = gen_mass <= constraints.mass_cap_kg * (1.0 + 1e-12);
  const double cc_l =
      constraints.cc_volume_per_watt_ml * r.avg_power_w / 1000.0;
  f.volume_ok = volume_l + cc_l <=
                constraints.volume_cap_l * constraints.volume_slack *
                    (1.0 + 1e-12);
  return f;
}

// Machine-precision feasibility boundary of the pure-fuel volume. Returns 0
// when not even 1 mL fits. Both constraint functions grow monotonically with
// volume (module count included), so the boundary is a single point.
inline double fuel_volume_boundary(const PlatformSpec& platform,
                                   const GeneratorDesign& design,
                                   const ConstraintSet& constraints) {
  const double upper = constraints.volume_cap_l * constraints.volume_slack;
  if (!check_fuel_volume(platform, design, constraints, 1e-3).ok()) {
    return 0.0;
  }
  double lo = 1e-3;   // feasible
  double hi = upper;  // infeasible: the chamber leaves no slack at full fuel
  if (check_fuel_volume(platform, design, constraints, hi).ok()) return hi;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (check_fuel_volume(platform, design, constraints, mid).ok()) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace detail

// Largest pure-fuel volume the constraint rules admit, reported to 1 mL.
// Also reports which rule stopped further growth.
inline MaxFuelResult max_fuel_volume(const PlatformSpec& platform,
                                     const GeneratorDesign& design,
                                     const ConstraintSet& constraints) {
  design.validate();
  constraints.validate();
  const double resolution_l = 1e-3;
  const double boundary =
      detail::fuel_volume_boundary(platform, design, constraints);
  if (boundary <= 0.0) {
    const auto at_floor =
        detail::check_fuel_volume(platform, design, constraints, resolution_l);
    throw infeasible_error(
        "no feasible fuel volume for '" + platform.name +
            "': the generator " +
            (!at_floor.mass_ok ? "hardware alone exceeds the mass cap"
                               : "chamber alone exceeds the volume cap"),
        0.0);
  }

  MaxFuelResult out;
  out.volume_l = std::floor(boundary / resolution_l) * resolution_l;
  const auto next = detail::check_fuel_volume(platform, design, constraints,
                                              out.volume_l + resolution_l);
  out.binding = !next.mass_ok ? BindingConstraint::mass_cap
                              : BindingConstraint::volume_cap;
  return out;
}

// Rectangular sweep over battery energy in [0, stock] and fuel volume in
// [0, max feasible]. Cells are pure and independent; evaluation order (and
// worker count) never changes the result.
struct SweepGrid {
  std::vector<double> battery_wh;  // outer axis
  std::vector<double> fuel_l;      // inner axis
  std::vector<EnduranceResult> cells;  // row-major, battery outer

  const EnduranceResult& at(std::size_t bi, std::size_t fi) const {
    return cells[bi * fuel_l.size() + fi];
  }
  std::size_t rows() const { return battery_wh.size(); }
  std::size_t cols() const { return fuel_l.size(); }
};

inline SweepGrid sweep(const PlatformSpec& platform,
                       const GeneratorDesign& design, int battery_steps,
                       int fuel_steps, const ConstraintSet& constraints,
                       int jobs = 1) {
  if (battery_steps < 2 || fuel_steps < 2) {
    throw domain_error("sweep needs at least 2 steps per axis");
  }
  if (jobs < 1) throw domain_error("jobs must be >= 1");
  const MaxFuelResult max_fuel = max_fuel_volume(platform, design, constraints);

  SweepGrid g;
  g.battery_wh.resize(battery_steps);
  g.fuel_l.resize(fuel_steps);
  for (int i = 0; i < battery_steps; ++i) {
    g.battery_wh[i] =
        platform.battery_energy_wh * double(i) / double(battery_steps - 1);
  }
  for (int j = 0; j < fuel_steps; ++j) {
    g.fuel_l[j] = max_fuel.volume_l * double(j) / double(fuel_steps - 1);
  }
  g.cells.resize(std::size_t(battery_steps) * fuel_steps);

  auto eval_cell = [&](std::size_t idx) {
    const std::size_t bi = idx / g.fuel_l.size();
    const std::size_t fi = idx % g.fuel_l.size();
    const double b = g.battery_wh[bi];
    const double v = g.fuel_l[fi];
    if (b == 0.0 && v == 0.0) {
      EnduranceResult empty;
      empty.feasible = false;
      g.cells[idx] = empty;
      return;
    }
    EnduranceResult r = evaluate(platform, design, HybridConfig{b, v});
    if (v > 0.0) {
      const double gen_mass = r.build.total_mass_kg();
      const double cc_l =
          constraints.cc_volume_per_watt_ml * r.avg_power_w / 1000.0;
      if (gen_mass > constraints.mass_cap_kg * (1.0 + 1e-12)) {
        r.feasible = false;
        r.binding = BindingConstraint::mass_cap;
      } else if (v + cc_l > constraints.volume_cap_l *
                                constraints.volume_slack * (1.0 + 1e-12)) {
        r.feasible = false;
        r.binding = BindingConstraint::volume_cap;
      }
    }
    g.cells[idx] = r;
  };

  const std::size_t n = g.cells.size();
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) eval_cell(i);
  } else {
    std::vector<std::thread> workers;
    const int w = std::min<int>(jobs, int(n));
    workers.reserve(w);
    for (int t = 0; t < w; ++t) {
      workers.emplace_back([&, t] {
        for (std::size_t i = t; i < n; i += w) eval_cell(i);
      });
    }
    for (auto& th : workers) th.join();
  }
  return g;
}

}  // namespace endure
