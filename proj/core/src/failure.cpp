#include "deg/failure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "deg/errors.hpp"

namespace deg {
namespace {

constexpr int kEquilibriumGridPoints = 512;
constexpr double kPullinFieldRelTol = 5e-7;

double yield_stretch(const MaterialParams& mat) {
  return std::sqrt(mat.max_area_expansion);
}

void require_prestrain_in_range(const MaterialParams& mat, double lam_p) {
  if (!(lam_p >= 1.0) || !(lam_p <= yield_stretch(mat)))
    throw DomainError("failure",
                      "pre-strain must lie in [1, sqrt(max_area_expansion)]");
}

/// Bisection refinement of an outward->inward force bracket.
double refine_root(const MaterialParams& mat, double e_field, double a,
                   double b, double rel_tol) {
  // invariant: residual(a) > 0 >= residual(b)
  while (b - a > rel_tol * b) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;  // interval no longer splits
    if (static_balance_residual(mat, mid, e_field) > 0.0)
      a = mid;
    else
      b = mid;
  }
  return 0.5 * (a + b);
}

}  // namespace

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::feasible:
      return "feasible";
    case Verdict::yield:
      return "yield";
    case Verdict::breakdown:
      return "breakdown";
    case Verdict::pull_in:
      return "pull_in";
  }
  return "unknown";
}

double BreakdownLaw::field_at(double thickness) const {
  if (!(thickness > 0.0))
    throw DomainError("failure", "thickness must be positive");
  if (table.empty()) return breakdown_field(thickness, k_bd);
  if (thickness <= table.front().first) return table.front().second;
  if (thickness >= table.back().first) return table.back().second;
  for (std::size_t i = 1; i < table.size(); ++i) {
    if (thickness <= table[i].first) {
      const auto& [t0, f0] = table[i - 1];
      const auto& [t1, f1] = table[i];
      const double w = (thickness - t0) / (t1 - t0);
      return f0 + w * (f1 - f0);
    }
  }
  return table.back().second;
}

double mechanical_limit(const MaterialParams& mat, double lam_p) {
  if (!(lam_p >= 1.0))
    throw DomainError("failure", "pre-strain must be >= 1");
  return std::max(1.0, yield_stretch(mat) / lam_p);
}

double breakdown_field(double thickness, double k_bd) {
  if (!(thickness > 0.0))
    throw DomainError("failure", "thickness must be positive");
  if (!(k_bd > 0.0))
    throw DomainError("failure", "breakdown calibration must be positive");
  return k_bd / thickness;
}

double static_balance_residual(const MaterialParams& mat, double lam,
                               double e_field) {
  if (!(lam > 0.0))
    throw DomainError("failure", "stretch must be positive");
  if (e_field < 0.0)
    throw DomainError("failure", "field magnitude must be non-negative");
  const double elastic = equibiaxial_elastic_term(mat.yeoh0, lam);
  const double maxwell =
      kVacuumPermittivity * mat.rel_permittivity * e_field * e_field / lam;
  return -6.0 * elastic + maxwell;
}

std::vector<double> stable_equilibria(const MaterialParams& mat, double lam_p,
                                      double e_field, double rel_tol) {
  require_prestrain_in_range(mat, lam_p);
  const double lam_hi = yield_stretch(mat);
  std::vector<double> roots;
  // The frame is rigid: wherever the net force at lam_p points inward the
  // membrane rests against it, which is a stable (constrained) equilibrium.
  if (static_balance_residual(mat, lam_p, e_field) <= 0.0)
    roots.push_back(lam_p);
  if (lam_hi - lam_p < 1e-12) return roots;

  const double log_step = std::log(lam_hi / lam_p) / (kEquilibriumGridPoints - 1);
  double prev_lam = lam_p;
  double prev_f = static_balance_residual(mat, lam_p, e_field);
  for (int i = 1; i < kEquilibriumGridPoints; ++i) {
    const double lam = lam_p * std::exp(log_step * i);
    const double f = static_balance_residual(mat, lam, e_field);
    // An outward->inward sign change brackets a restoring equilibrium.
    if (prev_f > 0.0 && f <= 0.0)
      roots.push_back(refine_root(mat, e_field, prev_lam, lam, rel_tol));
    prev_lam = lam;
    prev_f = f;
  }
  return roots;
}

bool has_stable_equilibrium(const MaterialParams& mat, double lam_p,
                            double e_field) {
  require_prestrain_in_range(mat, lam_p);
  if (static_balance_residual(mat, lam_p, e_field) <= 0.0) return true;
  const double lam_hi = yield_stretch(mat);
  if (lam_hi - lam_p < 1e-12) return false;
  const double log_step = std::log(lam_hi / lam_p) / (kEquilibriumGridPoints - 1);
  double prev_f = static_balance_residual(mat, lam_p, e_field);
  for (int i = 1; i < kEquilibriumGridPoints; ++i) {
    const double lam = lam_p * std::exp(log_step * i);
    const double f = static_balance_residual(mat, lam, e_field);
    if (prev_f > 0.0 && f <= 0.0) return true;
    prev_f = f;
  }
  return false;
}

double pullin_field(const MaterialParams& mat, const MembraneGeometry& geom,
                    double lam_p, double e_ceiling) {
  (void)geom;  // the balance is per unit edge area; geometry cancels
  require_prestrain_in_range(mat, lam_p);
  if (!(e_ceiling > 0.0))
    throw DomainError("failure", "field ceiling must be positive");
  if (has_stable_equilibrium(mat, lam_p, e_ceiling))
    return std::numeric_limits<double>::infinity();
  // At E = 0 the membrane rests against the frame, so a bracket always
  // exists: equilibrium at lo, none at hi.
  double lo = 0.0;
  double hi = e_ceiling;
  while (hi - lo > kPullinFieldRelTol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (has_stable_equilibrium(mat, lam_p, mid))
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

Verdict classify(const MaterialParams& mat, const MembraneGeometry& geom,
                 const DesignPoint& pt, const BreakdownLaw& law) {
  if (!(pt.lam_p >= 1.0) || !(pt.lam_act >= 1.0))
    throw DomainError("failure",
                      "design points require lam_p >= 1 and lam_act >= 1");
  if (pt.e_field < 0.0)
    throw DomainError("failure", "field magnitude must be non-negative");
  const double lam_max = pt.lam_p * pt.lam_act;
  if (lam_max * lam_max > mat.max_area_expansion) return Verdict::yield;
  const double thinnest = thickness_at(geom, lam_max);
  if (pt.e_field > law.field_at(thinnest)) return Verdict::breakdown;
  if (!has_stable_equilibrium(mat, pt.lam_p, pt.e_field))
    return Verdict::pull_in;
  return Verdict::feasible;
}

OperatingEnvelope envelope_grid(const MaterialParams& mat,
                                const MembraneGeometry& geom,
                                const EnvelopeRanges& ranges, int nx, int ny,
                                const BreakdownLaw& law) {
  std::vector<std::string> problems;
  if (!(ranges.lam_p_min >= 1.0) || !(ranges.lam_p_max >= ranges.lam_p_min))
    problems.emplace_back("lam_p range must satisfy 1 <= min <= max");
  if (!(ranges.lam_act_min >= 1.0) ||
      !(ranges.lam_act_max >= ranges.lam_act_min))
    problems.emplace_back("lam_act range must satisfy 1 <= min <= max");
  if (nx < 2 || ny < 2) problems.emplace_back("resolution must be >= 2 per axis");
  if (!problems.empty())
    throw ConfigError("failure", "invalid envelope request", problems);

  const auto node = [](double lo, double hi, int i, int n) {
    return n == 1 ? lo : lo + (static_cast<double>(i) * (hi - lo)) / (n - 1);
  };

  OperatingEnvelope env;
  env.nx = nx;
  env.ny = ny;
  env.cells.reserve(static_cast<std::size_t>(nx) * ny);
  const double lam_yield = std::sqrt(mat.max_area_expansion);
  for (int ix = 0; ix < nx; ++ix) {
    const double lam_p = node(ranges.lam_p_min, ranges.lam_p_max, ix, nx);
    bool column_has_electrical_failure = false;
    for (int iy = 0; iy < ny; ++iy) {
      const double lam_act =
          node(ranges.lam_act_min, ranges.lam_act_max, iy, ny);
      EnvelopeCell cell;
      cell.lam_p = lam_p;
      cell.lam_act = lam_act;
      const double lam_max = lam_p * lam_act;
      const double e_limit = law.field_at(thickness_at(geom, lam_max));
      // Every cell is inspected at its own dielectric-limit field; cells the
      // verdicts call pull_in fail before that field is reached.
      if (lam_p > lam_yield) {
        // Pre-strain alone already past yield: the balance domain is empty.
        cell.verdict = Verdict::yield;
        cell.limiting_field = e_limit;
      } else {
        cell.verdict = classify(mat, geom, {lam_p, lam_act, e_limit}, law);
        cell.limiting_field =
            cell.verdict == Verdict::pull_in
                ? pullin_field(mat, geom, lam_p, e_limit)
                : e_limit;
      }
      if (!column_has_electrical_failure &&
          (cell.verdict == Verdict::breakdown ||
           cell.verdict == Verdict::pull_in)) {
        column_has_electrical_failure = true;
        env.breakdown_boundary.push_back({lam_p, lam_act});
      }
      env.cells.push_back(cell);
    }
    const double act_at_yield = lam_yield / lam_p;
    if (act_at_yield >= ranges.lam_act_min &&
        act_at_yield <= ranges.lam_act_max)
      env.mechanical_boundary.push_back({lam_p, act_at_yield});
  }
  return env;
}

}  // namespace deg
