#include "deg/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "deg/errors.hpp"
#include "deg/parallel.hpp"

namespace deg {
namespace {

/// Inclusive grid node; written so that node-preserving refinement
/// (n -> 2n-1) reproduces the coarse nodes bit-exactly.
double grid_node(double lo, double hi, int i, int n) {
  return n == 1 ? lo : lo + (static_cast<double>(i) * (hi - lo)) / (n - 1);
}

/// Shaves one part in 1e12 off the limit voltage so that the round trip
/// voltage -> field at the same thickness cannot land above the limit field
/// by a rounding ulp.
double limit_voltage(double e_field, double thickness) {
  return e_field * thickness * (1.0 - 1e-12);
}

Verdict verdict_from_criterion(const std::string& criterion) {
  if (criterion == "yield") return Verdict::yield;
  if (criterion == "breakdown") return Verdict::breakdown;
  return Verdict::pull_in;
}

CycleSpec limit_cycle_spec(const DesignPoint& design, double poling_voltage,
                           const std::array<double, 5>& durations,
                           bool viscoelasticity, bool conduction) {
  CycleSpec spec;
  spec.design = design;
  spec.mode = CycleMode::constant_voltage;
  spec.drive = StretchDrive::mechanical;
  spec.poling_voltage = poling_voltage;
  spec.phase_durations = durations;
  spec.include_viscoelasticity = viscoelasticity;
  spec.include_conduction_loss = conduction;
  return spec;
}

}  // namespace

SweepResult sweep_prestrain(const MaterialParams& mat,
                            const MembraneGeometry& geom,
                            const SweepOptions& opt, const BreakdownLaw& law) {
  validate(mat);
  validate(geom);
  const double lam_yield = std::sqrt(mat.max_area_expansion);
  {
    std::vector<std::string> problems;
    if (opt.resolution < 1) problems.emplace_back("resolution must be >= 1");
    if (!(opt.lam_p_min >= 1.0) || !(opt.lam_p_max >= opt.lam_p_min))
      problems.emplace_back("lam_p range must satisfy 1 <= min <= max");
    if (opt.lam_p_max > lam_yield * (1.0 + 1e-12))
      problems.emplace_back(
          "lam_p range must stay within the area-expansion limit");
    for (double d : opt.phase_durations)
      if (d < 0.0) {
        problems.emplace_back("phase durations must be >= 0");
        break;
      }
    if (!problems.empty())
      throw ConfigError("optimizer", "invalid sweep request", problems);
  }

  SweepResult result;
  result.rows.resize(static_cast<std::size_t>(opt.resolution));
  parallel_for(
      result.rows.size(), opt.threads, [&](std::size_t i) {
        const double lam_p =
            std::min(grid_node(opt.lam_p_min, opt.lam_p_max,
                               static_cast<int>(i), opt.resolution),
                     lam_yield);
        SweepRow row;
        const double lam_act = mechanical_limit(mat, lam_p);
        const double lam_max = std::min(lam_p * lam_act, lam_yield);
        const double th = thickness_at(geom, lam_max);
        const double e_bd = law.field_at(th);
        double e = e_bd;
        // Operating at the breakdown field presumes a stable equilibrium
        // exists there; otherwise pull-in caps the field below breakdown and
        // the row operates at (hence on) the instability boundary.
        if (has_stable_equilibrium(mat, lam_p, e_bd)) {
          row.limiting = Verdict::breakdown;
          row.feasible = true;
        } else {
          e = pullin_field(mat, geom, lam_p, e_bd);
          row.limiting = Verdict::pull_in;
          row.feasible = false;
        }
        row.design = {lam_p, lam_act, e};
        try {
          const CycleResult ledger = run_quasistatic_cycle(
              mat, geom,
              limit_cycle_spec(row.design, limit_voltage(e, th),
                               opt.phase_durations,
                               opt.include_viscoelasticity,
                               opt.include_conduction_loss),
              law);
          row.net = ledger.net;
          row.produced = ledger.produced;
          row.loss = ledger.conduction_loss;
        } catch (const InfeasibleDesign& err) {
          row.feasible = false;
          row.limiting = verdict_from_criterion(err.criterion());
        }
        result.rows[i] = row;
      });

  bool any = false;
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    if (!result.rows[i].feasible) continue;
    if (!any || result.rows[i].net > result.rows[result.best].net) {
      result.best = i;
      any = true;
    }
  }
  if (!any)
    throw InfeasibleDesign("optimizer", "no sweep row is feasible",
                           "empty_feasible_set");
  return result;
}

OptimizeResult maximize_energy(const MaterialParams& mat,
                               const MembraneGeometry& geom,
                               const OptimizeOptions& opt,
                               const BreakdownLaw& law) {
  validate(mat);
  validate(geom);
  {
    std::vector<std::string> problems;
    const auto& b = opt.bounds;
    if (!(b.lam_p_min >= 1.0) || !(b.lam_p_max >= b.lam_p_min))
      problems.emplace_back("lam_p bounds must satisfy 1 <= min <= max");
    if (!(b.lam_act_min >= 1.0) || !(b.lam_act_max >= b.lam_act_min))
      problems.emplace_back("lam_act bounds must satisfy 1 <= min <= max");
    if (!(b.e_min >= 0.0) || !(b.e_max >= b.e_min))
      problems.emplace_back("field bounds must satisfy 0 <= min <= max");
    for (int r : opt.resolution)
      if (r < 1) {
        problems.emplace_back("resolutions must be >= 1");
        break;
      }
    for (double d : opt.phase_durations)
      if (d < 0.0) {
        problems.emplace_back("phase durations must be >= 0");
        break;
      }
    if (!problems.empty())
      throw ConfigError("optimizer", "invalid optimization request", problems);
  }

  const int np = opt.resolution[0];
  const int na = opt.resolution[1];
  const int ne = opt.resolution[2];
  const std::size_t total = static_cast<std::size_t>(np) * na * ne;

  struct PointOutcome {
    DesignPoint design;
    Verdict verdict = Verdict::feasible;
    bool has_ledger = false;
    double net = 0.0;
  };
  std::vector<PointOutcome> outcomes(total);

  parallel_for(total, opt.threads, [&](std::size_t i) {
    const int ip = static_cast<int>(i / (static_cast<std::size_t>(na) * ne));
    const int ia = static_cast<int>((i / ne) % static_cast<std::size_t>(na));
    const int ie = static_cast<int>(i % static_cast<std::size_t>(ne));
    PointOutcome out;
    out.design = {grid_node(opt.bounds.lam_p_min, opt.bounds.lam_p_max, ip, np),
                  grid_node(opt.bounds.lam_act_min, opt.bounds.lam_act_max, ia,
                            na),
                  grid_node(opt.bounds.e_min, opt.bounds.e_max, ie, ne)};
    out.verdict = classify(mat, geom, out.design, law);
    if (out.verdict == Verdict::feasible) {
      const double lam_max = out.design.lam_p * out.design.lam_act;
      const double th = thickness_at(geom, lam_max);
      try {
        const CycleResult ledger = run_quasistatic_cycle(
            mat, geom,
            limit_cycle_spec(out.design,
                             limit_voltage(out.design.e_field, th),
                             opt.phase_durations, opt.include_viscoelasticity,
                             opt.include_conduction_loss),
            law);
        out.net = ledger.net;
        out.has_ledger = true;
      } catch (const InfeasibleDesign& err) {
        out.verdict = verdict_from_criterion(err.criterion());
      }
    }
    outcomes[i] = out;
  });

  OptimizeResult result;
  result.evaluated = total;
  bool any = false;
  std::size_t best_i = 0;
  const auto better = [](const PointOutcome& a, const PointOutcome& b) {
    if (a.net != b.net) return a.net > b.net;
    if (a.design.lam_p != b.design.lam_p) return a.design.lam_p < b.design.lam_p;
    if (a.design.e_field != b.design.e_field)
      return a.design.e_field < b.design.e_field;
    return a.design.lam_act < b.design.lam_act;
  };
  for (std::size_t i = 0; i < total; ++i) {
    const PointOutcome& out = outcomes[i];
    switch (out.verdict) {
      case Verdict::yield:
        ++result.rejected_yield;
        break;
      case Verdict::breakdown:
        ++result.rejected_breakdown;
        break;
      case Verdict::pull_in:
        ++result.rejected_pull_in;
        break;
      case Verdict::feasible:
        if (out.has_ledger) {
          ++result.feasible_count;
          if (!any || better(out, outcomes[best_i])) {
            best_i = i;
            any = true;
          }
        }
        break;
    }
  }
  if (!any)
    throw InfeasibleDesign(
        "optimizer",
        "no feasible point in the search box (rejected: yield " +
            std::to_string(result.rejected_yield) + ", breakdown " +
            std::to_string(result.rejected_breakdown) + ", pull-in " +
            std::to_string(result.rejected_pull_in) + ")",
        "empty_feasible_set");

  result.best = outcomes[best_i].design;
  const double th =
      thickness_at(geom, result.best.lam_p * result.best.lam_act);
  result.ledger = run_quasistatic_cycle(
      mat, geom,
      limit_cycle_spec(result.best, limit_voltage(result.best.e_field, th),
                       opt.phase_durations, opt.include_viscoelasticity,
                       opt.include_conduction_loss),
      law);
  return result;
}

}  // namespace deg
