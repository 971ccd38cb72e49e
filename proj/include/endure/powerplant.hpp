#pragma once

#include <cmath>
#include <string>

#include "endure/errors.hpp"
#include "endure/quantities.hpp"

namespace endure {

// A combustible fuel described by its chemical energy content, liquid
// density, and the tank mass it drags along per unit of fuel mass.
struct FuelSpec {
  std::string name;
  double specific_energy_wh_kg = 0.0;
  double liquid_density_kg_l = 0.0;
  double tank_tare_ratio = 0.0;  // tank grams per fuel gram

  void validate() const {
    require_positive(specific_energy_wh_kg, "fuel specific energy [Wh/kg]");
    require_positive(liquid_density_kg_l, "fuel liquid density [kg/L]");
    require_nonnegative(tank_tare_ratio, "tank tare ratio");
  }
};

enum class BatteryChemistry { lithium_polymer, lithium_ion, custom };

inline const char* chemistry_name(BatteryChemistry c) {
  switch (c) {
    case BatteryChemistry::lithium_polymer: return "lithium_polymer";
    case BatteryChemistry::lithium_ion: return "lithium_ion";
    case BatteryChemistry::custom: return "custom";
  }
  return "?";
}

// Reference battery chemistry figures used for comparisons.
struct BatteryRef {
  BatteryChemistry chemistry = BatteryChemistry::custom;
  double specific_energy_wh_kg = 0.0;
  double specific_power_w_kg = 0.0;
  std::string notes;

  void validate() const {
    require_positive(specific_energy_wh_kg, "battery specific energy [Wh/kg]");
    require_positive(specific_power_w_kg, "battery specific power [W/kg]");
    if (chemistry == BatteryChemistry::lithium_polymer &&
        specific_energy_wh_kg != 150.0) {
      throw domain_error("lithium_polymer reference must be 150 Wh/kg");
    }
    if (chemistry == BatteryChemistry::lithium_ion &&
        specific_energy_wh_kg != 200.0) {
      throw domain_error("lithium_ion reference must be 200 Wh/kg");
    }
  }
};

// Ratings of one thermoelectric module.
struct TEModuleSpec {
  std::string name;
  double rated_power_w = 0.0;       // electrical, at rated_efficiency
  Fraction rated_efficiency;        // electrical out / heat in at rating
  double max_hot_side_c = 0.0;
  double side_length_cm = 0.0;
  double module_mass_kg = 0.0;
  Fraction exhaust_efficiency_default;

  double area_cm2() const { return side_length_cm * side_length_cm; }

  void validate() const {
    require_positive(rated_power_w, "TE module rated power [W]");
    if (rated_efficiency.value() <= 0.0 || rated_efficiency.value() >= 1.0) {
      throw domain_error("TE module rated efficiency must lie in (0,1)");
    }
    require_positive(side_length_cm, "TE module side length [cm]");
    require_nonnegative(module_mass_kg, "TE module mass [kg]");
    require_finite(max_hot_side_c, "TE module max hot side [degC]");
  }
};

// A complete generator design: the TE module used, the efficiencies the
// system runs at, the fuel, and the mass/volume bookkeeping coefficients.
struct GeneratorDesign {
  TEModuleSpec te_module;
  Fraction device_efficiency;         // eta_dev actually achieved in-system
  Fraction exhaust_efficiency;        // eta_exh, heat delivered / heat burned
  FuelSpec fuel;
  double fixed_overhead_mass_kg = 0.0;      // valves, ducts, circuit
  double hardware_mass_per_module_kg = 0.0; // heat sinks, module, insulation
  double cc_volume_per_watt_ml = 0.0;       // combustion chamber sizing

  void validate() const {
    te_module.validate();
    fuel.validate();
    if (device_efficiency.value() <= 0.0 || device_efficiency.value() >= 1.0) {
      throw domain_error("device efficiency must lie in (0,1)");
    }
    if (exhaust_efficiency.value() <= 0.0) {
      throw domain_error("exhaust efficiency must lie in (0,1]");
    }
    require_nonnegative(fixed_overhead_mass_kg, "fixed overhead mass [kg]");
    require_nonnegative(hardware_mass_per_module_kg,
                        "hardware mass per module [kg]");
    require_positive(cc_volume_per_watt_ml, "CC volume per watt [mL/W]");
  }

  // Electrical power one module delivers when run at device_efficiency.
  // Constant heat flux through the module: P = rated * (eta_dev / eta_rated).
  double per_module_power_w() const {
    return te_module.rated_power_w *
           (device_efficiency.value() / te_module.rated_efficiency.value());
  }
};

// One sized generator: TE array, hardware, fuel, tank, chamber.
struct GeneratorBuild {
  int n_modules = 0;
  double dry_hardware_mass_kg = 0.0;
  double fuel_mass_kg = 0.0;
  double tank_mass_kg = 0.0;
  double fuel_volume_l = 0.0;
  double cc_volume_l = 0.0;
  double te_array_side_cm = 0.0;
  double max_electrical_power_w = 0.0;
  double electrical_energy_wh = 0.0;

  double total_mass_kg() const {
    return dry_hardware_mass_kg + tank_mass_kg + fuel_mass_kg;
  }

  double fuel_mass_fraction() const {
    const double m = total_mass_kg();
    return m > 0.0 ? fuel_mass_kg / m : 0.0;
  }
};

// eta_s = e_target / e_fuel: the product of fuel mass fraction, device
// efficiency and exhaust efficiency sufficient for the generator system to
// match a storage technology of specific energy e_target.
inline Fraction parity_specific_efficiency(double e_target_wh_kg,
                                           double e_fuel_wh_kg) {
  require_positive(e_target_wh_kg, "target specific energy [Wh/kg]");
  require_positive(e_fuel_wh_kg, "fuel specific energy [Wh/kg]");
  if (e_target_wh_kg > e_fuel_wh_kg) {
    throw domain_error(
        "target specific energy exceeds the fuel's; parity is impossible");
  }
  return Fraction::checked(e_target_wh_kg / e_fuel_wh_kg,
                           "parity specific efficiency");
}

// e_sys = e_fuel * fmf * eta_dev * eta_exh.
inline double system_specific_energy(const FuelSpec& fuel,
                                     Fraction fuel_mass_fraction,
                                     Fraction eta_dev, Fraction eta_exh) {
  fuel.validate();
  if (fuel_mass_fraction.value() <= 0.0 || eta_dev.value() <= 0.0 ||
      eta_exh.value() <= 0.0) {
    throw domain_error(
        "system_specific_energy: fractions must lie in (0,1]");
  }
  return fuel.specific_energy_wh_kg * fuel_mass_fraction.value() *
         eta_dev.value() * eta_exh.value();
}

// Smallest fuel mass fraction achieving e_target, from inverting
// e_sys = e_fuel * fmf * eta_dev * eta_exh.
inline Fraction min_fuel_mass_fraction(double e_target_wh_kg,
                                       const FuelSpec& fuel, Fraction eta_dev,
                                       Fraction eta_exh) {
  fuel.validate();
  require_positive(e_target_wh_kg, "target specific energy [Wh/kg]");
  if (eta_dev.value() <= 0.0 || eta_exh.value() <= 0.0) {
    throw domain_error("min_fuel_mass_fraction: efficiencies must be > 0");
  }
  const double best =
      fuel.specific_energy_wh_kg * eta_dev.value() * eta_exh.value();
  if (e_target_wh_kg > best) {
    throw infeasible_error(
        "target " + std::to_string(e_target_wh_kg) +
            " Wh/kg is infeasible: even at fuel mass fraction 1 the system "
            "reaches only " +
            std::to_string(best) + " Wh/kg",
        best);
  }
  return Fraction::checked(e_target_wh_kg / best, "fuel mass fraction");
}

// fmf = m_fuel / (m_gen + m_fuel).
inline Fraction fuel_mass_fraction(double fuel_mass_kg, double dry_mass_kg) {
  require_nonnegative(fuel_mass_kg, "fuel mass [kg]");
  require_nonnegative(dry_mass_kg, "dry mass [kg]");
  const double total = fuel_mass_kg + dry_mass_kg;
  if (total <= 0.0) {
    throw domain_error("fuel_mass_fraction: total mass is zero");
  }
  return Fraction::checked(fuel_mass_kg / total, "fuel mass fraction");
}

// Electrical energy extractable from a volume of liquid fuel:
// V * rho * e_fuel * eta_dev * eta_exh.
inline double electrical_energy_from_fuel(double fuel_volume_l,
                                          const GeneratorDesign& design) {
  require_nonnegative(fuel_volume_l, "fuel volume [L]");
  return fuel_volume_l * design.fuel.liquid_density_kg_l *
         design.fuel.specific_energy_wh_kg * design.device_efficiency.value() *
         design.exhaust_efficiency.value();
}

// Thermal power of a burner consuming fuel at a steady rate. Wh/h is W.
inline double burner_thermal_power(double burn_rate_kg_h,
                                   const FuelSpec& fuel) {
  fuel.validate();
  require_nonnegative(burn_rate_kg_h, "burn rate [kg/h]");
  return burn_rate_kg_h * fuel.specific_energy_wh_kg;
}

struct ExhaustSplit {
  double delivered_w = 0.0;
  double lost_w = 0.0;
};

// Splits burner thermal power into heat delivered to the TE module and heat
// lost with the exhaust. The two parts are complemented against each other
// until their sum reproduces the input bit-exactly; delivered stays within
// 1 ulp of P * eta_exh.
inline ExhaustSplit exhaust_split(double thermal_power_w, Fraction eta_exh) {
  require_nonnegative(thermal_power_w, "thermal power [W]");
  ExhaustSplit s;
  s.delivered_w = thermal_power_w * eta_exh.value();
  s.lost_w = thermal_power_w - s.delivered_w;
  s.delivered_w = thermal_power_w - s.lost_w;
  if (s.delivered_w + s.lost_w != thermal_power_w) {
    s.lost_w = thermal_power_w - s.delivered_w;
  }
  return s;
}

struct TEArraySize {
  int n_modules = 0;
  double te_array_side_cm = 0.0;
  double max_electrical_power_w = 0.0;
};

// Smallest whole-module array covering the required electrical power.
inline TEArraySize size_te_array(double required_power_w,
                                 const GeneratorDesign& design) {
  design.validate();
  require_positive(required_power_w, "required power [W]");
  const double per_module = design.per_module_power_w();
  TEArraySize out;
  out.n_modules = static_cast<int>(std::ceil(required_power_w / per_module));
  if (out.n_modules < 1) out.n_modules = 1;
  out.te_array_side_cm =
      design.te_module.side_length_cm * std::sqrt(double(out.n_modules));
  out.max_electrical_power_w = out.n_modules * per_module;
  return out;
}

// Sizes the TE array for the required power and attaches fuel, tank, and
// combustion chamber accounting for the given fuel volume.
inline GeneratorBuild build_generator(double required_power_w,
                                      double fuel_volume_l,
                                      const GeneratorDesign& design) {
  require_nonnegative(fuel_volume_l, "fuel volume [L]");
  const TEArraySize array = size_te_array(required_power_w, design);
  GeneratorBuild b;
  b.n_modules = array.n_modules;
  b.te_array_side_cm = array.te_array_side_cm;
  b.max_electrical_power_w = array.max_electrical_power_w;
  b.dry_hardware_mass_kg = design.fixed_overhead_mass_kg +
                           b.n_modules * design.hardware_mass_per_module_kg;
  b.fuel_volume_l = fuel_volume_l;
  b.fuel_mass_kg = fuel_volume_l * design.fuel.liquid_density_kg_l;
  b.tank_mass_kg = b.fuel_mass_kg * design.fuel.tank_tare_ratio;
  b.cc_volume_l = design.cc_volume_per_watt_ml * required_power_w / 1000.0;
  b.electrical_energy_wh = electrical_energy_from_fuel(fuel_volume_l, design);
  return b;
}

struct ScaledOperatingPoint {
  double power_w = 0.0;
  Fraction efficiency;
};

// TE output power scales with the square of the hot/cold temperature
// difference; efficiency scales linearly with it.
inline ScaledOperatingPoint scale_with_delta_t(double power_w, Fraction eta,
                                               double delta_t_ref_c,
                                               double delta_t_new_c) {
  require_nonnegative(power_w, "power [W]");
  require_positive(delta_t_ref_c, "reference delta-T [degC]");
  require_nonnegative(delta_t_new_c, "new delta-T [degC]");
  const double r = delta_t_new_c / delta_t_ref_c;
  const double eta_new = eta.value() * r;
  if (eta_new > 1.0) {
    throw domain_error("scaled efficiency " + std::to_string(eta_new) +
                       " exceeds 1");
  }
  ScaledOperatingPoint p;
  p.power_w = power_w * (r * r);
  p.efficiency = Fraction::checked(eta_new, "scaled efficiency");
  return p;
}

// Volumetric flow through a rectangular duct, m^3/min.
inline double heat_sink_flow_m3_min(double duct_width_m, double duct_height_m,
                                    double air_velocity_m_s) {
  require_positive(duct_width_m, "duct width [m]");
  require_positive(duct_height_m, "duct height [m]");
  require_positive(air_velocity_m_s, "air velocity [m/s]");
  return duct_width_m * duct_height_m * air_velocity_m_s * 60.0;
}

// Cold-side stack thermal resistance from steady temperatures and the heat
// pushed through the sink.
inline double cold_side_resistance_c_w(double t_cold_c, double t_ambient_c,
                                       double heat_rejected_w) {
  require_finite(t_cold_c, "cold side temperature [degC]");
  require_finite(t_ambient_c, "ambient temperature [degC]");
  require_positive(heat_rejected_w, "heat rejected [W]");
  if (t_cold_c <= t_ambient_c) {
    throw domain_error("cold side must be warmer than ambient");
  }
  return (t_cold_c - t_ambient_c) / heat_rejected_w;
}

}  // namespace endure
