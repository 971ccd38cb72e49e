#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "endure/endurance.hpp"

namespace endure {

// Device efficiency solved for a target endurance on one platform.
struct ParityResult {
  std::string platform_name;
  double target_endurance_h = 0.0;
  double required_efficiency = 0.0;
  double achieved_endurance_h = 0.0;
  double fuel_volume_at_solution_l = 0.0;
  double fuel_mass_fraction = 0.0;
  double te_array_side_cm = 0.0;
  int iterations = 0;
};

// Thrown when neither bracket endpoint straddles the target.
struct bracket_error : solver_error {
  bracket_error(const std::string& msg, double lo_endurance,
                double hi_endurance)
      : solver_error(msg),
        endurance_at_lo(lo_endurance),
        endurance_at_hi(hi_endurance) {}
  double endurance_at_lo;
  double endurance_at_hi;
};

// Thrown when the target falls inside a step of the objective: module-count
// granularity makes endurance jump over it, so no efficiency achieves the
// target to tolerance. Carries both sides of the step.
struct cliff_error : solver_error {
  cliff_error(const std::string& msg, double eta, double below, double above)
      : solver_error(msg),
        efficiency_at_cliff(eta),
        endurance_below(below),
        endurance_above(above) {}
  double efficiency_at_cliff;
  double endurance_below;
  double endurance_above;
};

struct BestFuelPoint {
  double endurance_h = 0.0;
  double fuel_volume_l = 0.0;
};

// Endurance of the pure-fuel configuration (no battery) at the largest fuel
// volume the constraints admit. This is the objective the parity solver
// drives to its target. The fuel boundary is evaluated at machine precision
// here: snapping it to the 1 mL reporting grid would put steps into the
// objective and leave targets stranded between them.
inline BestFuelPoint best_fuel_endurance(const PlatformSpec& platform,
                                         const GeneratorDesign& design,
                                         const ConstraintSet& constraints) {
  design.validate();
  constraints.validate();
  const double boundary =
      detail::fuel_volume_boundary(platform, design, constraints);
  if (boundary <= 0.0) {
    throw infeasible_error("no feasible fuel volume for '" + platform.name +
                               "': the generator hardware alone exceeds the "
                               "constraint caps",
                           0.0);
  }
  BestFuelPoint p;
  p.fuel_volume_l = boundary;
  p.endurance_h =
      evaluate(platform, design, HybridConfig{0.0, boundary}).endurance_h;
  return p;
}

namespace detail {

inline BestFuelPoint probe_efficiency(const PlatformSpec& platform,
                                      GeneratorDesign design,
                                      const ConstraintSet& constraints,
                                      double eta) {
  design.device_efficiency = Fraction::checked(eta, "device efficiency");
  try {
    return best_fuel_endurance(platform, design, constraints);
  } catch (const infeasible_error&) {
    return BestFuelPoint{};  // no room for any fuel: zero endurance
  }
}

}  // namespace detail

// Bisects device efficiency until the pure-fuel endurance matches
// multiple * stated_endurance to 1e-6 relative. The objective is monotone
// non-decreasing in efficiency but steps where the module count changes;
// a target inside a step is reported as a cliff rather than forced.
inline ParityResult required_efficiency(const PlatformSpec& platform,
                                        const GeneratorDesign& design_template,
                                        double multiple,
                                        const ConstraintSet& constraints) {
  platform.validate();
  constraints.validate();
  if (!(multiple >= 0.5)) {
    throw domain_error("endurance multiple must be >= 0.5");
  }
  const double target = multiple * platform.stated_endurance_h;
  const double rel_tol = 1e-6;
  constexpr int kMaxIterations = 200;
  double lo = 1e-3, hi = 0.95;

  auto probe = [&](double eta) {
    return detail::probe_efficiency(platform, design_template, constraints,
                                    eta);
  };

  BestFuelPoint at_lo = probe(lo);
  BestFuelPoint at_hi = probe(hi);
  if (at_hi.endurance_h < target) {
    throw bracket_error("'" + platform.name + "': even " +
                            std::to_string(hi * 100.0) +
                            "% device efficiency reaches only " +
                            std::to_string(at_hi.endurance_h) +
                            " h of the " + std::to_string(target) +
                            " h target",
                        at_lo.endurance_h, at_hi.endurance_h);
  }
  if (at_lo.endurance_h > target) {
    throw bracket_error("'" + platform.name + "': " +
                            std::to_string(lo * 100.0) +
                            "% device efficiency already exceeds the " +
                            std::to_string(target) + " h target with " +
                            std::to_string(at_lo.endurance_h) + " h",
                        at_lo.endurance_h, at_hi.endurance_h);
  }

  ParityResult r;
  r.platform_name = platform.name;
  r.target_endurance_h = target;

  double eta = hi;
  BestFuelPoint at_eta = at_hi;
  for (int i = 0; i < kMaxIterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    const BestFuelPoint p = probe(mid);
    r.iterations = i + 1;
    if (std::fabs(p.endurance_h - target) <= rel_tol * target) {
      eta = mid;
      at_eta = p;
      GeneratorDesign d = design_template;
      d.device_efficiency = Fraction::checked(eta, "device efficiency");
      const EnduranceResult full =
          evaluate(platform, d, HybridConfig{0.0, p.fuel_volume_l});
      r.required_efficiency = eta;
      r.achieved_endurance_h = p.endurance_h;
      r.fuel_volume_at_solution_l = p.fuel_volume_l;
      r.fuel_mass_fraction = full.build.fuel_mass_fraction();
      r.te_array_side_cm = full.build.te_array_side_cm;
      return r;
    }
    if (p.endurance_h < target) {
      lo = mid;
      at_lo = p;
    } else {
      hi = mid;
      at_hi = p;
    }
    if (hi - lo < 1e-15) break;
  }
  throw cliff_error(
      "'" + platform.name + "': endurance steps from " +
          std::to_string(at_lo.endurance_h) + " h to " +
          std::to_string(at_hi.endurance_h) + " h across efficiency " +
          std::to_string(hi) +
          "; the target " + std::to_string(target) +
          " h lies inside the step (module-count granularity)",
      hi, at_lo.endurance_h, at_hi.endurance_h);
}

// One platform's row of the parity report: both multiples, with per-row
// failures captured rather than aborting the batch.
struct PlatformParityRow {
  std::string platform_name;
  double specific_power_w_kg = 0.0;
  std::optional<ParityResult> parity;       // multiple 1.0
  std::optional<ParityResult> twice;        // multiple 2.0
  std::string parity_issue;
  std::string twice_issue;
};

inline std::vector<PlatformParityRow> parity_table(
    const std::vector<PlatformSpec>& platforms,
    const GeneratorDesign& design_template, const ConstraintSet& constraints) {
  if (platforms.empty()) {
    throw domain_error("parity_table: empty platform list");
  }
  std::vector<PlatformParityRow> rows;
  rows.reserve(platforms.size());
  for (const auto& p : platforms) {
    PlatformParityRow row;
    row.platform_name = p.name;
    row.specific_power_w_kg = p.specific_power_w_kg;
    const ConstraintSet cs = [&] {
      ConstraintSet c = constraints;
      c.mass_cap_kg = p.battery_mass_kg;
      c.volume_cap_l = p.battery_volume_l;
      return c;
    }();
    try {
      row.parity = required_efficiency(p, design_template, 1.0, cs);
    } catch (const error& e) {
      row.parity_issue = e.what();
    }
    try {
      row.twice = required_efficiency(p, design_template, 2.0, cs);
    } catch (const error& e) {
      row.twice_issue = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace endure
