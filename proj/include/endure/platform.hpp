#pragma once

#include <optional>
#include <string>

#include "endure/errors.hpp"
#include "endure/quantities.hpp"

namespace endure {

enum class PlatformClass { ground, multicopter, fixed_wing, fixed_wing_vtol };

inline const char* platform_class_name(PlatformClass c) {
  switch (c) {
    case PlatformClass::ground: return "ground";
    case PlatformClass::multicopter: return "multicopter";
    case PlatformClass::fixed_wing: return "fixed_wing";
    case PlatformClass::fixed_wing_vtol: return "fixed_wing_vtol";
  }
  return "?";
}

// A sample unmanned system: its stock battery, the average specific power it
// needs to operate, and the endurance its maker states for that battery.
struct PlatformSpec {
  std::string name;
  PlatformClass platform_class = PlatformClass::fixed_wing;
  double specific_power_w_kg = 0.0;
  double battery_energy_wh = 0.0;
  double battery_mass_kg = 0.0;
  double battery_volume_l = 0.0;
  double stated_endurance_h = 0.0;
  std::optional<double> empty_mass_kg;  // derivable from the above
  std::string notes;

  void validate() const {
    require_positive(specific_power_w_kg, "specific power requirement [W/kg]");
    require_positive(battery_energy_wh, "battery energy [Wh]");
    require_positive(battery_mass_kg, "battery mass [kg]");
    require_positive(battery_volume_l, "battery volume [L]");
    require_positive(stated_endurance_h, "stated endurance [h]");
    if (empty_mass_kg && *empty_mass_kg <= 0.0) {
      throw domain_error("empty mass must be > 0 when provided");
    }
  }

  // Wh/kg of this platform's own pack; off-stock battery masses scale at
  // this figure rather than a generic chemistry constant.
  double pack_specific_energy_wh_kg() const {
    return battery_energy_wh / battery_mass_kg;
  }
};

struct MassClosure {
  double total_mass_kg = 0.0;
  double empty_mass_kg = 0.0;
  // Provided-minus-derived empty mass, present when the platform record
  // carried its own empty mass figure.
  std::optional<double> residual_kg;
};

// Closes the mass budget from stated endurance: depleting battery_energy in
// stated_endurance hours at specific_power_w_kg per kilogram fixes the total
// mass, and the airframe is what remains after the battery.
inline MassClosure mass_closure(const PlatformSpec& spec) {
  spec.validate();
  MassClosure out;
  out.total_mass_kg = spec.battery_energy_wh /
                      (spec.stated_endurance_h * spec.specific_power_w_kg);
  const double derived_empty = out.total_mass_kg - spec.battery_mass_kg;
  if (spec.empty_mass_kg) {
    out.empty_mass_kg = *spec.empty_mass_kg;
    out.residual_kg = *spec.empty_mass_kg - derived_empty;
    out.total_mass_kg = out.empty_mass_kg + spec.battery_mass_kg;
    return out;
  }
  if (derived_empty <= 0.0) {
    throw domain_error(
        "inconsistent platform spec '" + spec.name + "': battery energy " +
        std::to_string(spec.battery_energy_wh) + " Wh, stated endurance " +
        std::to_string(spec.stated_endurance_h) + " h and specific power " +
        std::to_string(spec.specific_power_w_kg) +
        " W/kg imply a total mass not exceeding the battery mass");
  }
  out.empty_mass_kg = derived_empty;
  return out;
}

// Average electrical power of the stock configuration.
inline double stock_power_w(const PlatformSpec& spec) {
  const MassClosure c = mass_closure(spec);
  return spec.specific_power_w_kg * (c.empty_mass_kg + spec.battery_mass_kg);
}

}  // namespace endure
