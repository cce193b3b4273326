#include <doctest.h>

#include <vector>

#include "adnoise/units.hpp"
#include "support/checks.hpp"

using namespace adnoise;
using namespace adnoise::units;
using testsupport::close_rel;

TEST_CASE("hartree to eV matches CODATA") {
  Quantity q{1.0, Unit::Hartree};
  const Quantity ev = convert(q, Unit::ElectronVolt);
  CHECK(ev.value == doctest::Approx(27.211386245988).epsilon(1e-12));
}

TEST_CASE("zero converts to zero") {
  CHECK(convert_value(0.0, Unit::ElectronVolt, Unit::Hartree) == 0.0);
}

TEST_CASE("eV to kcal/mol, Redhead's unit") {
  // oracle: 0.17 * 23.0605478306 = 3.9202931312 (independent hand conversion)
  const double v = convert_value(0.17, Unit::ElectronVolt, Unit::KcalPerMol);
  CHECK(v == doctest::Approx(3.9202931312).epsilon(1e-9));
  CHECK(close_rel(v, 3.921, 1e-3));
}

TEST_CASE("round trips reproduce the value to 1e-12") {
  const std::vector<std::vector<Unit>> families{
      {Unit::Hartree, Unit::ElectronVolt, Unit::Joule, Unit::KcalPerMol},
      {Unit::Bohr, Unit::Angstrom, Unit::Meter, Unit::Nanometer, Unit::Micrometer},
      {Unit::Amu, Unit::Kilogram, Unit::ElectronMass},
      {Unit::Hertz, Unit::Terahertz},
      {Unit::RadPerSecond, Unit::AtomicAngularFrequency},
      {Unit::PerSecond, Unit::PerAtomicTime},
      {Unit::Debye, Unit::EBohr, Unit::CoulombMeter},
      {Unit::M2PerSecond, Unit::Cm2PerSecond},
  };
  const double x = 1.234567891234e-3;
  for (const auto& family : families) {
    for (Unit a : family) {
      for (Unit b : family) {
        const double back = convert_value(convert_value(x, a, b), b, a);
        CHECK(std::abs(back - x) <= 1e-12 * std::abs(x));
      }
    }
  }
}

TEST_CASE("incompatible dimensions are rejected with both unit names") {
  try {
    convert_value(1.0, Unit::ElectronVolt, Unit::Bohr);
    FAIL("expected DimensionError");
  } catch (const DimensionError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("eV") != std::string::npos);
    CHECK(msg.find("bohr") != std::string::npos);
  }
  CHECK_THROWS_AS(convert_value(1.0, Unit::Hertz, Unit::RadPerSecond), DimensionError);
  CHECK_THROWS_AS(convert_value(1.0, Unit::Kelvin, Unit::Hartree), DimensionError);
}

TEST_CASE("constants table spot checks, CODATA-2018 printed precision") {
  namespace c = constants;
  CHECK(c::planck_Js == 6.62607015e-34);             // exact
  CHECK(c::boltzmann_J_per_K == 1.380649e-23);       // exact
  CHECK(c::elementary_charge_C == 1.602176634e-19);  // exact
  CHECK(c::light_speed_m_per_s == 299792458.0);      // exact
  CHECK(c::hartree_J == doctest::Approx(4.3597447222071e-18).epsilon(1e-13));
  CHECK(c::bohr_m == doctest::Approx(5.29177210903e-11).epsilon(1e-12));
  CHECK(c::amu_kg == doctest::Approx(1.66053906660e-27).epsilon(1e-11));
  CHECK(c::electron_mass_kg == doctest::Approx(9.1093837015e-31).epsilon(1e-11));
  CHECK(c::vacuum_permittivity_F_per_m == doctest::Approx(8.8541878128e-12).epsilon(1e-11));
  // derived scales
  CHECK(c::hbar_Js == doctest::Approx(1.054571817e-34).epsilon(1e-10));
  CHECK(c::debye_Cm == doctest::Approx(3.33564095198e-30).epsilon(1e-11));
  CHECK(c::hartree_per_kB_K == doctest::Approx(315775.02480407).epsilon(1e-12));
  CHECK(c::atomic_time_s == doctest::Approx(2.4188843265857e-17).epsilon(1e-12));
  CHECK(c::amu_me == doctest::Approx(1822.888486209).epsilon(1e-11));
}

TEST_CASE("unit names parse back") {
  for (Unit u : {Unit::Hartree, Unit::ElectronVolt, Unit::KcalPerMol, Unit::Bohr,
                 Unit::Angstrom, Unit::Micrometer, Unit::Amu, Unit::Terahertz,
                 Unit::RadPerSecond, Unit::Kelvin, Unit::Debye, Unit::EBohr,
                 Unit::Cm2PerSecond, Unit::V2PerM2PerHz}) {
    auto parsed = unit_from_name(unit_name(u));
    REQUIRE(parsed.has_value());
    CHECK(*parsed == u);
  }
  CHECK(!unit_from_name("furlong").has_value());
  CHECK(unit_from_name("THz") == Unit::Terahertz);
  CHECK(unit_from_name("ev") == Unit::ElectronVolt);
}

TEST_CASE("dipole unit chain: debye / e*bohr / C*m") {
  const double one_debye_Cm = convert_value(1.0, Unit::Debye, Unit::CoulombMeter);
  CHECK(one_debye_Cm == doctest::Approx(3.33564095198e-30).epsilon(1e-11));
  const double ebohr_in_debye = convert_value(1.0, Unit::EBohr, Unit::Debye);
  CHECK(ebohr_in_debye == doctest::Approx(2.541746473194).epsilon(1e-11));
}
