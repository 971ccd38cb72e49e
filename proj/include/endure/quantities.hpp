#pragma once

#include <cmath>
#include <string>

#include "endure/errors.hpp"

namespace endure {

// Canonical internal units: kg, Wh, W, L, h, degC. Every other unit is a
// rational scale factor away from its kind's canonical unit.
enum class Unit {
  kilogram,
  gram,
  watt_hour,
  joule,
  kilowatt_hour,
  watt,
  kilowatt,
  liter,
  milliliter,
  cubic_meter,
  hour,
  minute,
  second,
  celsius,
  watt_hour_per_kilogram,
  watt_per_kilogram,
  kilogram_per_liter,
  watt_per_square_centimeter,
};

enum class UnitKind {
  mass,
  energy,
  power,
  volume,
  time,
  temperature,
  specific_energy,
  specific_power,
  density,
  areal_power,
};

inline const char* unit_name(Unit u) {
  switch (u) {
    case Unit::kilogram: return "kg";
    case Unit::gram: return "g";
    case Unit::watt_hour: return "Wh";
    case Unit::joule: return "J";
    case Unit::kilowatt_hour: return "kWh";
    case Unit::watt: return "W";
    case Unit::kilowatt: return "kW";
    case Unit::liter: return "L";
    case Unit::milliliter: return "mL";
    case Unit::cubic_meter: return "m3";
    case Unit::hour: return "h";
    case Unit::minute: return "min";
    case Unit::second: return "s";
    case Unit::celsius: return "degC";
    case Unit::watt_hour_per_kilogram: return "Wh/kg";
    case Unit::watt_per_kilogram: return "W/kg";
    case Unit::kilogram_per_liter: return "kg/L";
    case Unit::watt_per_square_centimeter: return "W/cm2";
  }
  return "?";
}

inline UnitKind kind_of(Unit u) {
  switch (u) {
    case Unit::kilogram:
    case Unit::gram: return UnitKind::mass;
    case Unit::watt_hour:
    case Unit::joule:
    case Unit::kilowatt_hour: return UnitKind::energy;
    case Unit::watt:
    case Unit::kilowatt: return UnitKind::power;
    case Unit::liter:
    case Unit::milliliter:
    case Unit::cubic_meter: return UnitKind::volume;
    case Unit::hour:
    case Unit::minute:
    case Unit::second: return UnitKind::time;
    case Unit::celsius: return UnitKind::temperature;
    case Unit::watt_hour_per_kilogram: return UnitKind::specific_energy;
    case Unit::watt_per_kilogram: return UnitKind::specific_power;
    case Unit::kilogram_per_liter: return UnitKind::density;
    case Unit::watt_per_square_centimeter: return UnitKind::areal_power;
  }
  return UnitKind::temperature;
}

namespace detail {

// Factor to the canonical unit as an exact integer ratio num/den. Both parts
// are exactly representable, so a conversion costs at most two roundings.
struct UnitFactor {
  double num;
  double den;
};

inline UnitFactor factor(Unit u) {
  switch (u) {
    case Unit::kilogram: return {1, 1};
    case Unit::gram: return {1, 1000};
    case Unit::watt_hour: return {1, 1};
    case Unit::joule: return {1, 3600};
    case Unit::kilowatt_hour: return {1000, 1};
    case Unit::watt: return {1, 1};
    case Unit::kilowatt: return {1000, 1};
    case Unit::liter: return {1, 1};
    case Unit::milliliter: return {1, 1000};
    case Unit::cubic_meter: return {1000, 1};
    case Unit::hour: return {1, 1};
    case Unit::minute: return {1, 60};
    case Unit::second: return {1, 3600};
    case Unit::celsius: return {1, 1};
    case Unit::watt_hour_per_kilogram: return {1, 1};
    case Unit::watt_per_kilogram: return {1, 1};
    case Unit::kilogram_per_liter: return {1, 1};
    case Unit::watt_per_square_centimeter: return {1, 1};
  }
  return {1, 1};
}

}  // namespace detail

// Exact scale-factor conversion between units of the same kind. The scale is
// applied as (value * A) / B with A and B exact integers, so the result is
// within 1 ulp of the true value and identity conversions are bit-exact.
inline double convert(double value, Unit from, Unit to) {
  if (kind_of(from) != kind_of(to)) {
    throw unit_error(std::string("cannot convert ") + unit_name(from) +
                     " to " + unit_name(to) + ": incompatible unit kinds");
  }
  if (!std::isfinite(value)) {
    throw domain_error("convert: value is not finite");
  }
  if (from == to) return value;
  const auto f = detail::factor(from);
  const auto t = detail::factor(to);
  const double a = f.num * t.den;  // exact: small integers
  const double b = f.den * t.num;
  if (a == b) return value;
  if (a == 1.0) return value / b;
  if (b == 1.0) return value * a;
  return (value * a) / b;
}

// Dimensionless value constrained to [0,1]. Efficiencies and mass fractions.
class Fraction {
 public:
  Fraction() : v_(0.0) {}

  static Fraction checked(double v, const char* what = "fraction") {
    if (!(v >= 0.0 && v <= 1.0)) {  // also rejects NaN
      throw domain_error(std::string(what) + " must lie in [0,1], got " +
                         std::to_string(v));
    }
    Fraction f;
    f.v_ = v;
    return f;
  }

  double value() const { return v_; }

 private:
  double v_;
};

inline Fraction make_fraction(double v) { return Fraction::checked(v); }

// Guards used by public operations when accepting raw magnitudes.
inline double require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw domain_error(std::string(what) + " must be finite, got " +
                       std::to_string(v));
  }
  return v;
}

inline double require_nonnegative(double v, const char* what) {
  require_finite(v, what);
  if (v < 0.0) {
    throw domain_error(std::string(what) + " must be >= 0, got " +
                       std::to_string(v));
  }
  return v;
}

inline double require_positive(double v, const char* what) {
  require_finite(v, what);
  if (v <= 0.0) {
    throw domain_error(std::string(what) + " must be > 0, got " +
                       std::to_string(v));
  }
  return v;
}

}  // namespace endure
