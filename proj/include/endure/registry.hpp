#pragma once

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "endure/endurance.hpp"
#include "endure/platform.hpp"
#include "endure/powerplant.hpp"

namespace endure {

// Compiled-in mirror of data/components.json.
inline constexpr const char* kBuiltinComponentsJson = R"json({
  "schema_version": 1,
  "fuels": [
    {
      "name": "butane",
      "specific_energy_wh_per_kg": 13600.0,
      "liquid_density_kg_per_l": 0.573,
      "tank_tare_ratio": 0.469,
      "notes": "density: liquid n-butane near room temperature; tare: 8 oz canister, 333.4 g gross for 227 g of fuel"
    }
  ],
  "batteries": [
    {
      "chemistry": "lithium_polymer",
      "specific_energy_wh_per_kg": 150.0,
      "specific_power_w_per_kg": 3500.0
    },
    {
      "chemistry": "lithium_ion",
      "specific_energy_wh_per_kg": 200.0,
      "specific_power_w_per_kg": 500.0,
      "notes": "specific power is a placeholder for a typical COTS cylindrical cell continuous rating"
    }
  ],
  "te_modules": [
    {
      "name": "monTEG",
      "rated_power_w": 20.0,
      "rated_efficiency": 0.05,
      "max_hot_side_c": 340.0,
      "side_length_cm": 4.0,
      "module_mass_kg": 0.0262,
      "exhaust_efficiency_default": 0.40
    },
    {
      "name": "high-performance",
      "rated_power_w": 48.0,
      "rated_efficiency": 0.12,
      "max_hot_side_c": 340.0,
      "side_length_cm": 4.0,
      "module_mass_kg": 0.0262,
      "exhaust_efficiency_default": 0.40,
      "notes": "12% class module; rated power keeps the monTEG heat-flux basis (400 W of heat per module), geometry and mass are placeholders"
    }
  ]
}
)json";

// Compiled-in mirror of data/platforms.json.
inline constexpr const char* kBuiltinPlatformsJson = R"json({
  "schema_version": 1,
  "platforms": [
    {
      "name": "Talon",
      "class": "ground",
      "specific_power_w_per_kg": 3.0,
      "battery_energy_wh": 1350.0,
      "battery_mass_kg": 9.5,
      "battery_volume_l": 5.0,
      "stated_endurance_h": 8.5,
      "notes": "endurance is a PLACEHOLDER from public Foster-Miller/QinetiQ TALON sheets (up to 8.5 h typical mission); implies ~53 kg total, consistent with the published platform weight"
    },
    {
      "name": "Aurelia X6",
      "class": "multicopter",
      "specific_power_w_per_kg": 90.0,
      "battery_energy_wh": 710.0,
      "battery_mass_kg": 5.0,
      "battery_volume_l": 2.6,
      "stated_endurance_h": 0.75,
      "notes": "endurance is a PLACEHOLDER from the vendor sheet (45 min with payload, up to 55 min without); 45 min implies ~10.5 kg total, matching max takeoff with payload"
    },
    {
      "name": "Raven",
      "class": "fixed_wing",
      "specific_power_w_per_kg": 17.0,
      "battery_energy_wh": 32.5,
      "battery_mass_kg": 0.23,
      "battery_volume_l": 0.12,
      "stated_endurance_h": 1.0,
      "notes": "endurance is a PLACEHOLDER from public RQ-11 sheets (60-90 min); 60 min implies 1.9 kg total, matching the published airframe weight"
    },
    {
      "name": "Puma",
      "class": "fixed_wing",
      "specific_power_w_per_kg": 21.0,
      "battery_energy_wh": 297.0,
      "battery_mass_kg": 2.1,
      "battery_volume_l": 1.5,
      "stated_endurance_h": 2.0,
      "notes": "endurance from the RQ-20 modeling source (2 h)"
    },
    {
      "name": "Trinity",
      "class": "fixed_wing_vtol",
      "specific_power_w_per_kg": 31.0,
      "battery_energy_wh": 259.0,
      "battery_mass_kg": 1.8,
      "battery_volume_l": 1.3,
      "stated_endurance_h": 1.5,
      "notes": "endurance is a PLACEHOLDER from the Quantum Systems F90+ sheet (up to 90 min)"
    }
  ]
}
)json";

// Default calibration of the generator mass and volume model, anchored to
// the prototype: 413 g dry assembly with one module splits into 83 g of
// fixed overhead and 330 g per module; the chamber costs 1.4 mL per watt.
inline constexpr double kDefaultFixedOverheadKg = 0.083;
inline constexpr double kDefaultHardwarePerModuleKg = 0.330;
inline constexpr double kDefaultCcVolumePerWattMl = 1.4;
inline constexpr double kDefaultVolumeSlack = 1.05;

namespace detail {

inline std::string normalize_name(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == ' ' || c == '-' || c == '_') continue;
    out.push_back(char(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

inline PlatformClass platform_class_from(const std::string& s) {
  if (s == "ground") return PlatformClass::ground;
  if (s == "multicopter") return PlatformClass::multicopter;
  if (s == "fixed_wing") return PlatformClass::fixed_wing;
  if (s == "fixed_wing_vtol") return PlatformClass::fixed_wing_vtol;
  throw parse_error("unknown platform class '" + s + "'");
}

inline BatteryChemistry chemistry_from(const std::string& s) {
  if (s == "lithium_polymer") return BatteryChemistry::lithium_polymer;
  if (s == "lithium_ion") return BatteryChemistry::lithium_ion;
  return BatteryChemistry::custom;
}

}  // namespace detail

struct ComponentRegistry {
  std::vector<FuelSpec> fuels;
  std::vector<BatteryRef> batteries;
  std::vector<TEModuleSpec> te_modules;

  const FuelSpec& fuel(std::string_view name) const {
    for (const auto& f : fuels) {
      if (detail::normalize_name(f.name) == detail::normalize_name(name)) {
        return f;
      }
    }
    throw domain_error("unknown fuel '" + std::string(name) + "'");
  }

  const TEModuleSpec& te_module(std::string_view name) const {
    for (const auto& m : te_modules) {
      if (detail::normalize_name(m.name) == detail::normalize_name(name)) {
        return m;
      }
    }
    throw domain_error("unknown TE module '" + std::string(name) + "'");
  }

  const BatteryRef& battery(std::string_view chemistry) const {
    for (const auto& b : batteries) {
      if (detail::normalize_name(chemistry_name(b.chemistry)) ==
          detail::normalize_name(chemistry)) {
        return b;
      }
    }
    throw domain_error("unknown battery chemistry '" + std::string(chemistry) +
                       "'");
  }
};

inline ComponentRegistry parse_components(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  ComponentRegistry reg;
  for (const auto& jf : j.at("fuels")) {
    FuelSpec f;
    f.name = jf.at("name").get<std::string>();
    f.specific_energy_wh_kg = jf.at("specific_energy_wh_per_kg").get<double>();
    f.liquid_density_kg_l = jf.at("liquid_density_kg_per_l").get<double>();
    f.tank_tare_ratio = jf.at("tank_tare_ratio").get<double>();
    f.validate();
    reg.fuels.push_back(std::move(f));
  }
  for (const auto& jb : j.at("batteries")) {
    BatteryRef b;
    b.chemistry =
        detail::chemistry_from(jb.at("chemistry").get<std::string>());
    b.specific_energy_wh_kg = jb.at("specific_energy_wh_per_kg").get<double>();
    b.specific_power_w_kg = jb.at("specific_power_w_per_kg").get<double>();
    if (jb.contains("notes")) b.notes = jb.at("notes").get<std::string>();
    b.validate();
    reg.batteries.push_back(std::move(b));
  }
  for (const auto& jm : j.at("te_modules")) {
    TEModuleSpec m;
    m.name = jm.at("name").get<std::string>();
    m.rated_power_w = jm.at("rated_power_w").get<double>();
    m.rated_efficiency = Fraction::checked(
        jm.at("rated_efficiency").get<double>(), "rated efficiency");
    m.max_hot_side_c = jm.at("max_hot_side_c").get<double>();
    m.side_length_cm = jm.at("side_length_cm").get<double>();
    m.module_mass_kg = jm.at("module_mass_kg").get<double>();
    m.exhaust_efficiency_default =
        Fraction::checked(jm.at("exhaust_efficiency_default").get<double>(),
                          "exhaust efficiency default");
    m.validate();
    reg.te_modules.push_back(std::move(m));
  }
  return reg;
}

inline std::vector<PlatformSpec> parse_platforms(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  std::vector<PlatformSpec> out;
  for (const auto& jp : j.at("platforms")) {
    PlatformSpec p;
    p.name = jp.at("name").get<std::string>();
    p.platform_class =
        detail::platform_class_from(jp.at("class").get<std::string>());
    p.specific_power_w_kg = jp.at("specific_power_w_per_kg").get<double>();
    p.battery_energy_wh = jp.at("battery_energy_wh").get<double>();
    p.battery_mass_kg = jp.at("battery_mass_kg").get<double>();
    p.battery_volume_l = jp.at("battery_volume_l").get<double>();
    p.stated_endurance_h = jp.at("stated_endurance_h").get<double>();
    if (jp.contains("empty_mass_kg")) {
      p.empty_mass_kg = jp.at("empty_mass_kg").get<double>();
    }
    if (jp.contains("notes")) p.notes = jp.at("notes").get<std::string>();
    p.validate();
    out.push_back(std::move(p));
  }
  if (out.empty()) throw parse_error("platform registry lists no platforms");
  return out;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline ComponentRegistry builtin_components() {
  return parse_components(kBuiltinComponentsJson);
}

inline std::vector<PlatformSpec> builtin_platforms() {
  return parse_platforms(kBuiltinPlatformsJson);
}

// Registry resolution order: explicit path, then ENDURE_PLATFORMS, then the
// compiled-in defaults.
inline std::vector<PlatformSpec> resolve_platforms(
    const std::string& explicit_path = "") {
  if (!explicit_path.empty()) {
    return parse_platforms(read_text_file(explicit_path));
  }
  if (const char* env = std::getenv("ENDURE_PLATFORMS")) {
    if (*env) return parse_platforms(read_text_file(env));
  }
  return builtin_platforms();
}

inline const PlatformSpec& find_platform(
    const std::vector<PlatformSpec>& platforms, std::string_view name) {
  for (const auto& p : platforms) {
    if (detail::normalize_name(p.name) == detail::normalize_name(name)) {
      return p;
    }
  }
  throw domain_error("unknown platform '" + std::string(name) + "'");
}

// Prototype-calibrated design around a named TE module. Device efficiency
// defaults to the module's rated figure.
inline GeneratorDesign default_generator_design(
    const ComponentRegistry& components, std::string_view te_module = "monTEG",
    std::string_view fuel = "butane") {
  GeneratorDesign d;
  d.te_module = components.te_module(te_module);
  d.fuel = components.fuel(fuel);
  d.device_efficiency = d.te_module.rated_efficiency;
  d.exhaust_efficiency = d.te_module.exhaust_efficiency_default;
  d.fixed_overhead_mass_kg = kDefaultFixedOverheadKg;
  d.hardware_mass_per_module_kg = kDefaultHardwarePerModuleKg;
  d.cc_volume_per_watt_ml = kDefaultCcVolumePerWattMl;
  return d;
}

}  // namespace endure
