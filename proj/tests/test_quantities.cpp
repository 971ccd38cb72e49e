#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstring>
#include <random>

#include "endure/quantities.hpp"

using namespace endure;

namespace {

uint64_t bits_of(double d) {
  uint64_t u;
  std::memcpy(&u, &d, sizeof(u));
  return u;
}

// |a - b| measured in ulps of b.
double ulp_distance(double a, double b) {
  if (a == b) return 0.0;
  const double ulp = std::nextafter(std::fabs(b), INFINITY) - std::fabs(b);
  return std::fabs(a - b) / ulp;
}

}  // namespace

TEST_CASE("convert handles the documented unit pairs") {
  CHECK(convert(227.0, Unit::gram, Unit::kilogram) ==
        Catch::Approx(0.227).epsilon(1e-15));
  CHECK(convert(1.0, Unit::hour, Unit::second) == 3600.0);
  // 12 Wh is 12 * 3600 J
  CHECK(convert(12.0, Unit::watt_hour, Unit::joule) == 43200.0);
  CHECK(convert(1.5, Unit::kilowatt, Unit::watt) == 1500.0);
  CHECK(convert(250.0, Unit::milliliter, Unit::liter) ==
        Catch::Approx(0.25).epsilon(1e-15));
  CHECK(convert(2.0, Unit::cubic_meter, Unit::liter) == 2000.0);
  CHECK(convert(90.0, Unit::minute, Unit::hour) == 1.5);
}

TEST_CASE("convert rejects incompatible kinds and non-finite values") {
  CHECK_THROWS_AS(convert(1.0, Unit::gram, Unit::watt_hour), unit_error);
  CHECK_THROWS_AS(convert(1.0, Unit::hour, Unit::liter), unit_error);
  CHECK_THROWS_AS(convert(NAN, Unit::gram, Unit::kilogram), domain_error);
  CHECK_THROWS_AS(convert(INFINITY, Unit::hour, Unit::second), domain_error);
}

TEST_CASE("convert identity is bit-exact") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    const double x = std::ldexp(double(rng() >> 11), int(rng() % 64) - 32);
    CHECK(bits_of(convert(x, Unit::watt, Unit::watt)) == bits_of(x));
  }
}

TEST_CASE("convert round trips within 1 ulp on every pair") {
  const Unit units[] = {Unit::kilogram,      Unit::gram,   Unit::watt_hour,
                        Unit::joule,         Unit::kilowatt_hour,
                        Unit::watt,          Unit::kilowatt,
                        Unit::liter,         Unit::milliliter,
                        Unit::cubic_meter,   Unit::hour,
                        Unit::minute,        Unit::second};
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> mag(1e-6, 1e6);
  for (Unit a : units) {
    for (Unit b : units) {
      if (kind_of(a) != kind_of(b)) continue;
      for (int i = 0; i < 200; ++i) {
        const double x = mag(rng);
        const double back = convert(convert(x, a, b), b, a);
        INFO(unit_name(a) << " -> " << unit_name(b) << " -> " << unit_name(a)
                          << " on " << x);
        CHECK(ulp_distance(back, x) <= 1.0);
      }
    }
  }
}

TEST_CASE("fractions accept [0,1] and reject everything else") {
  CHECK(make_fraction(0.12).value() == 0.12);
  CHECK(make_fraction(0.0).value() == 0.0);
  CHECK(make_fraction(1.0).value() == 1.0);
  CHECK_THROWS_AS(make_fraction(1.2), domain_error);
  CHECK_THROWS_AS(make_fraction(-0.1), domain_error);
  CHECK_THROWS_AS(make_fraction(NAN), domain_error);
  // The offending value is reported.
  try {
    make_fraction(1.2);
    FAIL("expected a throw");
  } catch (const domain_error& e) {
    CHECK(std::string(e.what()).find("1.2") != std::string::npos);
  }
}

TEST_CASE("quantity guards reject NaN and negatives") {
  CHECK(require_nonnegative(0.0, "x") == 0.0);
  CHECK(require_positive(2.5, "x") == 2.5);
  CHECK_THROWS_AS(require_nonnegative(-1.0, "x"), domain_error);
  CHECK_THROWS_AS(require_nonnegative(NAN, "x"), domain_error);
  CHECK_THROWS_AS(require_positive(0.0, "x"), domain_error);
  // Temperatures admit negatives but not NaN.
  CHECK(require_finite(-40.0, "T") == -40.0);
  CHECK_THROWS_AS(require_finite(NAN, "T"), domain_error);
}
