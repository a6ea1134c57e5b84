#include <array>
#include <cmath>
#include <vector>

#include "deg/cycle.hpp"
#include "deg/errors.hpp"
#include "deg/membrane.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace deg;

namespace {

CycleSpec mechanical_cv_spec(double lam_p, double lam_act, double poling) {
  CycleSpec spec;
  spec.design = {lam_p, lam_act, 0.0};
  spec.mode = CycleMode::constant_voltage;
  spec.drive = StretchDrive::mechanical;
  spec.poling_voltage = poling;
  return spec;
}

}  // namespace

TEST_SUITE("cycle") {

TEST_CASE("measured-capacitance energy anchor") {
  const double e = produced_energy(80.2e-12, 66.2e-12, 2000.0, 2000.0);
  CHECK(std::abs(e - 28e-6) / 28e-6 < 1e-3);
  // Equal voltage levels reduce to the constant-voltage reading.
  CHECK(e == doctest::Approx(0.5 * (80.2e-12 - 66.2e-12) * 4e6).epsilon(1e-15));
  // The literal two-state form agrees up to the cancellation floor
  // eps * (c_max + c_min) / (c_max - c_min), not bitwise.
  CHECK(produced_energy_printed_form(80.2e-12, 66.2e-12, 2000.0, 2000.0) ==
        doctest::Approx(e).epsilon(1e-12));
}

TEST_CASE("constant-charge reading equals the capacitor energy difference") {
  const double c_max = 80e-12, c_min = 40e-12, v_min = 1000.0;
  const double q = c_max * v_min;
  const double v_max = q / c_min;
  const double produced = produced_energy(c_max, c_min, v_max, v_min);
  CHECK(produced ==
        doctest::Approx(0.5 * q * q * (1.0 / c_min - 1.0 / c_max)).epsilon(1e-12));
  CHECK(produced == doctest::Approx(0.5 * q * (v_max - v_min)).epsilon(1e-12));
  CHECK(produced > 0.0);
}

TEST_CASE("produced energy rejects non-physical inputs") {
  CHECK_THROWS_AS((void)produced_energy(1e-12, 0.0, 10.0, 10.0), DomainError);
  CHECK_THROWS_AS((void)produced_energy(1e-12, 2e-12, 10.0, 10.0), DomainError);
  CHECK_THROWS_AS((void)produced_energy(2e-12, 1e-12, 5.0, 10.0), DomainError);
  CHECK_THROWS_AS((void)produced_energy(2e-12, 1e-12, -1.0, -2.0), DomainError);
}

TEST_CASE("conduction loss over piecewise-constant spans") {
  const std::array<double, 2> v{2000.0, 1000.0};
  const std::array<double, 2> r{1e9, 5e8};
  const std::array<double, 2> d{2.0, 4.0};
  const double expected = 2000.0 * 2000.0 / 1e9 * 2.0 +
                          1000.0 * 1000.0 / 5e8 * 4.0;
  CHECK(conduction_loss(v, r, d) == doctest::Approx(expected).epsilon(1e-15));

  const std::array<double, 1> short_r{1e9};
  CHECK_THROWS_AS((void)conduction_loss(v, short_r, d), ConfigError);
  const std::array<double, 2> bad_r{1e9, 0.0};
  CHECK_THROWS_AS((void)conduction_loss(v, bad_r, d), DomainError);
}

TEST_CASE("energy density") {
  CHECK(energy_density(2.6e-5, 6e-6) == doctest::Approx(4.333333333).epsilon(1e-9));
  CHECK_THROWS_AS((void)energy_density(1.0, 0.0), DomainError);
}

TEST_CASE("mechanical constant-voltage cycle: ledger and state identities") {
  const MaterialParams mat = test::reference_material();
  const MembraneGeometry geom = test::reference_geometry();
  const CycleSpec spec = mechanical_cv_spec(4.0, 1.05, 2000.0);
  const CycleResult r = run_quasistatic_cycle(mat, geom, spec, BreakdownLaw{});

  // The ledger balances bit-exactly; net is defined as the difference.
  CHECK(r.produced - r.conduction_loss == r.net);
  CHECK(r.lam_max == doctest::Approx(4.2).epsilon(1e-15));
  CHECK(r.lam_min >= 4.0);
  CHECK(r.lam_min <= r.lam_max);
  CHECK(r.v_max == 2000.0);
  CHECK(r.v_min == 2000.0);

  // Capacitance follows the fourth power of the stretch.
  CHECK(r.c_max / r.c_min ==
        doctest::Approx(std::pow(r.lam_max / r.lam_min, 4)).epsilon(1e-12));
  CHECK(r.produced ==
        doctest::Approx(0.5 * (r.c_max - r.c_min) * 4e6).epsilon(1e-12));
  CHECK(r.energy_density == doctest::Approx(r.net / geom.mass).epsilon(1e-12));

  REQUIRE(r.phases.size() == 5);
  CHECK(r.phases[0].label == "prestrain");
  CHECK(r.phases[0].lam == 4.0);
  CHECK(r.phases[1].label == "stretch");
  CHECK(r.phases[1].lam == r.lam_max);
  CHECK(r.phases[3].label == "active");
  CHECK(r.phases[3].lam == r.lam_min);
  CHECK(r.phases[4].label == "discharge");
  CHECK(r.phases[4].lam == 4.0);
  for (const auto& p : r.phases) {
    CHECK(p.thickness == thickness_at(geom, p.lam));
    CHECK(p.capacitance == capacitance(geom, mat.rel_permittivity, p.lam));
  }
}

TEST_CASE("zero poling voltage produces nothing") {
  const MaterialParams mat = test::reference_material();
  const MembraneGeometry geom = test::reference_geometry();
  const CycleSpec spec = mechanical_cv_spec(4.0, 1.2, 0.0);
  const CycleResult r = run_quasistatic_cycle(mat, geom, spec, BreakdownLaw{});
  CHECK(r.produced == 0.0);
  CHECK(r.net <= 0.0);
}

TEST_CASE("no actuation means no capacitance swing") {
  const MaterialParams mat = test::reference_material();
  const MembraneGeometry geom = test::reference_geometry();
  const CycleSpec spec = mechanical_cv_spec(4.0, 1.0, 2000.0);
  const CycleResult r = run_quasistatic_cycle(mat, geom, spec, BreakdownLaw{});
  CHECK(r.lam_max == 4.0);
  CHECK(r.lam_min == 4.0);
  CHECK(r.produced == 0.0);
}

TEST_CASE("constant-charge cycle lifts the voltage") {
  const MaterialParams mat = test::reference_material();
  const MembraneGeometry geom = test::reference_geometry();
  CycleSpec spec = mechanical_cv_spec(4.0, 1.2, 2000.0);
  spec.mode = CycleMode::constant_charge;
  BreakdownLaw law;
  law.k_bd = 8e3;  // headroom for the constant-charge voltage rise
  const CycleResult r = run_quasistatic_cycle(mat, geom, spec, law);
  CHECK(r.v_min == 2000.0);
  CHECK(r.v_max > r.v_min);
  const double q = r.c_max * r.v_min;
  CHECK(r.v_max == doctest::Approx(q / r.c_min).epsilon(1e-12));
  CHECK(r.produced ==
        doctest::Approx(0.5 * q * (r.v_max - r.v_min)).epsilon(1e-12));
  CHECK(r.produced ==
        doctest::Approx(0.5 * q * q * (1.0 / r.c_min - 1.0 / r.c_max))
            .epsilon(1e-12));
  CHECK(r.produced - r.conduction_loss == r.net);
}

TEST_CASE("viscoelastic relaxation reduces the harvest under voltage") {
  const MaterialParams mat = test::reference_material();
  const MembraneGeometry geom = test::reference_geometry();
  CycleSpec inst = mechanical_cv_spec(4.0, 1.2, 2000.0);
  CycleSpec visc = inst;
  visc.include_viscoelasticity = true;
  visc.phase_durations = {1.0, 30.0, 1.0, 2.0, 1.0};
  const CycleResult ri = run_quasistatic_cycle(mat, geom, inst, BreakdownLaw{});
  const CycleResult rv = run_quasistatic_cycle(mat, geom, visc, BreakdownLaw{});
  CHECK(rv.lam_min >= ri.lam_min);  // softer spring relaxes less far inward
  CHECK(rv.produced <= ri.produced);
}

TEST_CASE("electrical drive solves the stretch from the voltage") {
  const MaterialParams mat = test::reference_material();
  const MembraneGeometry geom = test::reference_geometry();
  CycleSpec spec;
  spec.design = {4.0, 1.0, 0.0};
  spec.drive = StretchDrive::electrical;
  spec.stretch_voltage = 4000.0;
  spec.poling_voltage = 2000.0;
  BreakdownLaw law;
  law.k_bd = 8e3;
  const CycleResult r = run_quasistatic_cycle(mat, geom, spec, law);
  CHECK(r.lam_max > 4.0);
  CHECK(r.lam_max < 6.0);
  CHECK(r.produced > 0.0);
  CHECK(r.produced - r.conduction_loss == r.net);
}

TEST_CASE("failure criteria surface as infeasible designs") {
  const MaterialParams mat = test::reference_material();
  const MembraneGeometry geom = test::reference_geometry();

  try {
    (void)run_quasistatic_cycle(mat, geom, mechanical_cv_spec(4.0, 2.0, 100.0),
                                BreakdownLaw{});
    FAIL("expected yield");
  } catch (const InfeasibleDesign& e) {
    CHECK(e.criterion() == "yield");
  }

  try {
    // The reciprocal law caps the voltage at k_bd regardless of thickness.
    (void)run_quasistatic_cycle(mat, geom, mechanical_cv_spec(4.0, 1.2, 5000.0),
                                BreakdownLaw{});
    FAIL("expected breakdown");
  } catch (const InfeasibleDesign& e) {
    CHECK(e.criterion() == "breakdown");
  }

  try {
    CycleSpec spec;
    spec.design = {1.0, 1.0, 0.0};
    spec.drive = StretchDrive::electrical;
    spec.stretch_voltage = 60000.0;
    spec.poling_voltage = 1000.0;
    BreakdownLaw law;
    law.k_bd = 1e6;  // keep breakdown out of the way
    (void)run_quasistatic_cycle(mat, geom, spec, law);
    FAIL("expected pull-in");
  } catch (const InfeasibleDesign& e) {
    CHECK(e.criterion() == "pull_in");
  }
}

TEST_CASE("cycle spec problems are collected into one config error") {
  const MaterialParams mat = test::reference_material();
  const MembraneGeometry geom = test::reference_geometry();
  CycleSpec spec = mechanical_cv_spec(0.5, 1.2, -3.0);
  spec.phase_durations = {1.0, -1.0, 1.0, 1.0, 1.0};
  try {
    (void)run_quasistatic_cycle(mat, geom, spec, BreakdownLaw{});
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.module() == "cycle");
    CHECK(e.details().size() >= 3);
  }
}

}  // TEST_SUITE("cycle")
