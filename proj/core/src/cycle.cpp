#include "deg/cycle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "deg/errors.hpp"

namespace deg {
namespace {

constexpr int kEquilibriumGridPoints = 512;
constexpr double kRootRelTol = 1e-9;
/// Relative slack on the area-expansion limit so designs constructed exactly
/// on the boundary (lam_act = mechanical_limit) survive round-off in the
/// product lam_p * lam_act.
constexpr double kYieldGuard = 1.0 + 1e-12;

/// Smallest stretch >= lam_p where the electric drive balances the
/// incremental elastic stress (measured from the pre-strained state, whose
/// stress the frame carries), with the elastic side scaled by the relaxation
/// factor s. `load` is the Maxwell balance term as a function of lam. Returns
/// lam_p itself for a vanishing load. `found` is false when the drive
/// outgrows the restoring stress everywhere below the yield stretch.
template <typename Load>
double smallest_equilibrium(const MaterialParams& mat, double lam_p, double s,
                            const Load& load, bool& found) {
  const double lam_hi = std::sqrt(mat.max_area_expansion);
  const double el_p = equibiaxial_elastic_term(mat.yeoh0, lam_p);
  const auto residual = [&](double lam) {
    return load(lam) -
           6.0 * s * (equibiaxial_elastic_term(mat.yeoh0, lam) - el_p);
  };
  if (residual(lam_p) <= 0.0) {         // no net outward drive at the frame
    found = true;
    return lam_p;
  }
  if (lam_hi - lam_p < 1e-12) {         // no admissible room to expand
    found = false;
    return lam_p;
  }
  const double log_step =
      std::log(lam_hi / lam_p) / (kEquilibriumGridPoints - 1);
  double a = lam_p;
  double fa = residual(lam_p);
  for (int i = 1; i < kEquilibriumGridPoints; ++i) {
    const double b = lam_p * std::exp(log_step * i);
    const double fb = residual(b);
    if (fa > 0.0 && fb <= 0.0) {
      double lo = a, hi = b;
      while (hi - lo > kRootRelTol * hi) {
        const double mid = 0.5 * (lo + hi);
        if (residual(mid) > 0.0)
          lo = mid;
        else
          hi = mid;
      }
      found = true;
      return 0.5 * (lo + hi);
    }
    a = b;
    fa = fb;
  }
  found = false;
  return lam_hi;
}

}  // namespace

double produced_energy(double c_max, double c_min, double v_max,
                       double v_min) {
  if (!(c_max > 0.0) || !(c_min > 0.0))
    throw DomainError("cycle", "capacitances must be positive");
  if (c_max < c_min)
    throw DomainError("cycle", "c_max must be >= c_min");
  if (v_max < 0.0 || v_min < 0.0)
    throw DomainError("cycle", "voltages must be non-negative");
  if (v_max < v_min)
    throw DomainError("cycle", "v_max must be >= v_min");
  if (v_max == v_min)  // constant-voltage reading
    return 0.5 * (c_max - c_min) * v_max * v_max;
  // Constant-charge reading: the charge placed at (c_max, v_min) is conserved
  // while the voltage is boosted to v_max.
  const double q = c_max * v_min;
  return 0.5 * q * (v_max - v_min);
}

double produced_energy_printed_form(double c_max, double c_min, double v_max,
                                    double v_min) {
  return 0.5 * (c_max * v_min * v_min - c_min * v_max * v_max);
}

double conduction_loss(std::span<const double> voltages,
                       std::span<const double> leakage_resistances,
                       std::span<const double> durations) {
  if (voltages.size() != leakage_resistances.size() ||
      voltages.size() != durations.size())
    throw ConfigError("cycle", "conduction-loss schedules differ in length",
                      {"voltages, resistances and durations must align"});
  double total = 0.0;
  for (std::size_t i = 0; i < voltages.size(); ++i) {
    if (!(leakage_resistances[i] > 0.0))
      throw DomainError("cycle", "leakage resistance must be positive");
    if (durations[i] < 0.0)
      throw DomainError("cycle", "durations must be non-negative");
    total += voltages[i] * voltages[i] / leakage_resistances[i] * durations[i];
  }
  return total;
}

double energy_density(double net, double mass) {
  if (!(mass > 0.0)) throw DomainError("cycle", "mass must be positive");
  return net / mass;
}

CycleResult run_quasistatic_cycle(const MaterialParams& mat,
                                  const MembraneGeometry& geom,
                                  const CycleSpec& spec,
                                  const BreakdownLaw& law) {
  validate(mat);
  validate(geom);
  {
    std::vector<std::string> problems;
    if (spec.poling_voltage < 0.0)
      problems.emplace_back("poling_voltage must be >= 0");
    if (spec.stretch_voltage < 0.0)
      problems.emplace_back("stretch_voltage must be >= 0");
    for (double d : spec.phase_durations)
      if (d < 0.0) {
        problems.emplace_back("phase durations must be >= 0");
        break;
      }
    if (!(spec.design.lam_p >= 1.0))
      problems.emplace_back("lam_p must be >= 1");
    if (spec.drive == StretchDrive::mechanical && !(spec.design.lam_act >= 1.0))
      problems.emplace_back("lam_act must be >= 1 for the mechanical drive");
    if (!problems.empty())
      throw ConfigError("cycle", "invalid cycle specification", problems);
  }

  const double lam_p = spec.design.lam_p;
  const double lam_yield = std::sqrt(mat.max_area_expansion);
  if (lam_p * lam_p > mat.max_area_expansion * kYieldGuard)
    throw InfeasibleDesign("cycle", "pre-strain alone exceeds the yield limit",
                           "yield");
  const double eps = kVacuumPermittivity * mat.rel_permittivity;
  const auto factor = [&](int phase) {
    return spec.include_viscoelasticity
               ? relaxation_factor(mat, spec.phase_durations[phase])
               : 1.0;
  };

  // Phase 1->2: reach the maximal stretch.
  double lam_max = lam_p;
  double v_stretch = 0.0;
  if (spec.drive == StretchDrive::mechanical) {
    lam_max = lam_p * spec.design.lam_act;
    if (lam_max * lam_max > mat.max_area_expansion * kYieldGuard)
      throw InfeasibleDesign(
          "cycle", "mechanical stretch exceeds the area-expansion limit",
          "yield");
    lam_max = std::min(lam_max, lam_yield);
  } else {
    v_stretch = spec.stretch_voltage > 0.0 ? spec.stretch_voltage
                                           : spec.poling_voltage;
    const double v2 = v_stretch * v_stretch;
    const auto load = [&](double lam) {
      return eps * v2 * lam * lam * lam / (geom.x30 * geom.x30);
    };
    bool found = false;
    lam_max = smallest_equilibrium(mat, lam_p, factor(1), load, found);
    if (!found)
      throw InfeasibleDesign(
          "cycle",
          "the stretch voltage admits no stable stretch below the yield limit",
          "pull_in");
  }

  const auto check_breakdown = [&](double voltage, double lam) {
    if (voltage <= 0.0) return;
    const double th = thickness_at(geom, lam);
    if (field_from_voltage(voltage, th) > law.field_at(th))
      throw InfeasibleDesign("cycle",
                             "the applied voltage exceeds the dielectric "
                             "strength at the thinnest state",
                             "breakdown");
  };
  check_breakdown(v_stretch, lam_max);
  check_breakdown(spec.poling_voltage, lam_max);

  // Phase 3->4: release against the electric load until equilibrium. The
  // frame floors the stretch at lam_p; the release only moves inward.
  const double c_max = capacitance(geom, mat.rel_permittivity, lam_max);
  double lam_min = lam_p;
  double v_max = spec.poling_voltage;
  double v_min = spec.poling_voltage;
  if (spec.poling_voltage > 0.0) {
    bool found = false;
    double root = lam_p;
    if (spec.mode == CycleMode::constant_voltage) {
      const double v2 = spec.poling_voltage * spec.poling_voltage;
      const auto load = [&](double lam) {
        return eps * v2 * lam * lam * lam / (geom.x30 * geom.x30);
      };
      root = smallest_equilibrium(mat, lam_p, factor(3), load, found);
    } else {
      const double q = c_max * spec.poling_voltage;
      const double denom =
          eps * geom.x10 * geom.x10 * geom.x20 * geom.x20;
      const auto load = [&](double lam) {
        const double lam2 = lam * lam;
        return q * q / (denom * lam2 * lam2 * lam);
      };
      root = smallest_equilibrium(mat, lam_p, factor(3), load, found);
    }
    // The frame floors the release at lam_p. When the unclamped equilibrium
    // sits above lam_max -- including the no-root case, where the load
    // outgrows the restoring stress everywhere below the yield stretch -- the
    // stretch stop carries the excess and the release phase ends where it
    // began: a zero swing, not a failure (the stop is one-sided, so the
    // membrane cannot run away outward during release).
    lam_min = std::clamp(root, lam_p, lam_max);
  }
  const double c_min = capacitance(geom, mat.rel_permittivity, lam_min);
  if (spec.mode == CycleMode::constant_charge && spec.poling_voltage > 0.0)
    v_max = c_max * spec.poling_voltage / c_min;
  check_breakdown(v_max, lam_min);

  CycleResult result;
  result.lam_max = lam_max;
  result.lam_min = lam_min;
  result.c_max = c_max;
  result.c_min = c_min;
  result.v_max = v_max;
  result.v_min = v_min;
  result.produced = produced_energy(c_max, c_min, v_max, v_min);

  // Bulk conduction drains every energized phase; each phase is billed at its
  // end-state voltage and leakage resistance.
  if (spec.include_conduction_loss) {
    std::vector<double> vs, rs, ds;
    const auto bill = [&](double voltage, double lam, double duration) {
      if (voltage <= 0.0 || duration <= 0.0) return;
      vs.push_back(voltage);
      rs.push_back(leakage_resistance(geom, mat.bulk_resistivity, lam));
      ds.push_back(duration);
    };
    bill(v_stretch, lam_max, spec.phase_durations[1]);
    bill(spec.poling_voltage, lam_max, spec.phase_durations[2]);
    bill(v_max, lam_min, spec.phase_durations[3]);
    result.conduction_loss = conduction_loss(vs, rs, ds);
  }
  result.net = result.produced - result.conduction_loss;
  result.energy_density =
      geom.mass > 0.0 ? energy_density(result.net, geom.mass)
                      : std::numeric_limits<double>::quiet_NaN();

  const auto phase = [&](const char* label, double lam, double voltage) {
    PhaseState st;
    st.label = label;
    st.lam = lam;
    st.thickness = thickness_at(geom, lam);
    st.capacitance = capacitance(geom, mat.rel_permittivity, lam);
    st.voltage = voltage;
    st.e_field = voltage > 0.0 ? field_from_voltage(voltage, st.thickness) : 0.0;
    return st;
  };
  result.phases.push_back(phase("prestrain", lam_p, 0.0));
  result.phases.push_back(phase("stretch", lam_max, v_stretch));
  result.phases.push_back(phase("poling", lam_max, spec.poling_voltage));
  result.phases.push_back(phase("active", lam_min, v_max));
  result.phases.push_back(phase("discharge", lam_p, 0.0));
  return result;
}

}  // namespace deg
