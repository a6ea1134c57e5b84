#include "deg/fitting.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "deg/errors.hpp"

namespace deg {
namespace {

constexpr int kTauGridPoints = 64;
constexpr double kSumSlack = 1e-9;  // returned sum(g) stays <= 1 - this

double yeoh_basis_factor(double lam, FitMode mode) {
  // nominal stress = factor * f'(u): force along the pull axis over the
  // reference cross-section, with the thickness face traction-free
  return mode == FitMode::equibiaxial
             ? 2.0 * (lam - 1.0 / (lam * lam * lam * lam * lam))
             : 2.0 * (lam - 1.0 / (lam * lam));
}

double yeoh_u(double lam, FitMode mode) {
  return mode == FitMode::equibiaxial
             ? 2.0 * lam * lam + 1.0 / (lam * lam * lam * lam) - 3.0
             : lam * lam + 2.0 / lam - 3.0;
}

std::size_t combination_count(int n, int k) {
  double c = 1.0;
  for (int i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
  return static_cast<std::size_t>(c + 0.5);
}

/// Solves min ||phi*g - d|| by the normal equations for the given tau set and
/// applies the non-negativity / sum constraint by clamping and rescaling.
struct GSolve {
  Eigen::VectorXd g;
  double residual = 0.0;
  double unconstrained_residual = 0.0;
  bool projected = false;
};

GSolve solve_g(const Eigen::MatrixXd& phi, const Eigen::VectorXd& d) {
  const Eigen::MatrixXd gram = phi.transpose() * phi;
  const Eigen::VectorXd rhs = phi.transpose() * d;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
  GSolve out;
  if (lu.rank() < gram.rows()) {
    // Coinciding relaxation times: fall back to the pseudo-inverse direction
    // (still deterministic); such combos lose to distinct-tau ones anyway.
    out.g = gram.completeOrthogonalDecomposition().solve(rhs);
  } else {
    out.g = lu.solve(rhs);
  }
  out.unconstrained_residual = (phi * out.g - d).norm();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < out.g.size(); ++i) {
    if (out.g[i] < 0.0) {
      out.g[i] = 0.0;
      out.projected = true;
    }
    sum += out.g[i];
  }
  if (sum > 1.0 - kSumSlack) {
    out.g *= (1.0 - kSumSlack) / sum;
    out.projected = true;
  }
  out.residual = (phi * out.g - d).norm();
  return out;
}

Eigen::VectorXd relaxation_column(const std::vector<double>& times,
                                  double tau) {
  Eigen::VectorXd col(static_cast<Eigen::Index>(times.size()));
  for (std::size_t i = 0; i < times.size(); ++i)
    col[static_cast<Eigen::Index>(i)] = 1.0 - std::exp(-times[i] / tau);
  return col;
}

}  // namespace

void validate(const TestCurve& curve) {
  std::vector<std::string> problems;
  if (curve.points.size() < 4)
    problems.emplace_back("a test curve needs at least 4 points");
  double prev = -std::numeric_limits<double>::infinity();
  for (const auto& [x, y] : curve.points) {
    if (!std::isfinite(x) || !std::isfinite(y)) {
      problems.emplace_back("curve values must be finite");
      break;
    }
    if (x <= prev) {
      problems.emplace_back("curve abscissae must be strictly increasing");
      break;
    }
    prev = x;
  }
  if (curve.kind == CurveKind::tensile && !curve.points.empty() &&
      curve.points.front().first <= 0.0)
    problems.emplace_back("tensile stretches must be positive");
  if (curve.kind == CurveKind::relaxation && !curve.points.empty() &&
      curve.points.front().first < 0.0)
    problems.emplace_back("relaxation times must be non-negative");
  if (!problems.empty())
    throw ConfigError("fitting", "invalid test curve", problems);
}

double nominal_stress_equibiaxial(const YeohCoefficients& c, double lam) {
  if (!(lam > 0.0)) throw DomainError("fitting", "stretch must be positive");
  return yeoh_basis_factor(lam, FitMode::equibiaxial) *
         strain_energy_derivative(c, yeoh_u(lam, FitMode::equibiaxial) + 3.0);
}

double nominal_stress_uniaxial(const YeohCoefficients& c, double lam) {
  if (!(lam > 0.0)) throw DomainError("fitting", "stretch must be positive");
  return yeoh_basis_factor(lam, FitMode::uniaxial) *
         strain_energy_derivative(c, yeoh_u(lam, FitMode::uniaxial) + 3.0);
}

YeohFit fit_yeoh(const TestCurve& curve, FitMode mode) {
  validate(curve);
  if (curve.kind != CurveKind::tensile)
    throw ConfigError("fitting", "fit_yeoh needs a tensile curve",
                      {"curve kind is relaxation"});
  const auto n = static_cast<Eigen::Index>(curve.points.size());
  Eigen::MatrixXd a(n, 3);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& [lam, stress] = curve.points[static_cast<std::size_t>(i)];
    const double factor = yeoh_basis_factor(lam, mode);
    const double u = yeoh_u(lam, mode);
    a(i, 0) = factor;                // d stress / d c10
    a(i, 1) = factor * 2.0 * u;      // d stress / d c20
    a(i, 2) = factor * 3.0 * u * u;  // d stress / d c30
    b[i] = stress;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  if (qr.rank() < 3)
    throw NumericalError(
        "fitting",
        "coefficients are not identifiable from this curve (rank-deficient "
        "basis; e.g. all points at lam = 1)");
  const Eigen::VectorXd x = qr.solve(b);

  YeohFit fit;
  fit.coefficients = {x[0], x[1], x[2]};
  fit.report.n_points = static_cast<int>(n);
  fit.report.residual_norm = (a * x - b).norm();
  const double data_norm = b.norm();
  fit.report.relative_residual =
      data_norm > 0.0 ? fit.report.residual_norm / data_norm : 0.0;
  fit.report.unconstrained_residual = fit.report.residual_norm;
  return fit;
}

PronyFit fit_prony(const TestCurve& curve, int n_terms) {
  validate(curve);
  if (curve.kind != CurveKind::relaxation)
    throw ConfigError("fitting", "fit_prony needs a relaxation curve",
                      {"curve kind is tensile"});
  if (n_terms < 1)
    throw ConfigError("fitting", "n_terms must be >= 1", {});
  if (curve.points.size() < static_cast<std::size_t>(2 * n_terms + 2))
    throw ConfigError("fitting", "too few points for the requested terms",
                      {"need at least 2*n_terms + 2 points"});
  if (combination_count(kTauGridPoints, n_terms) > 2'000'000)
    throw ConfigError("fitting", "n_terms too large for the fixed tau grid",
                      {"at most 4 terms are searchable"});

  std::vector<double> times;
  times.reserve(curve.points.size());
  Eigen::VectorXd d(static_cast<Eigen::Index>(curve.points.size()));
  double t_first_positive = 0.0;
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    times.push_back(curve.points[i].first);
    d[static_cast<Eigen::Index>(i)] = 1.0 - curve.points[i].second;
    if (t_first_positive == 0.0 && curve.points[i].first > 0.0)
      t_first_positive = curve.points[i].first;
  }
  if (t_first_positive == 0.0)
    throw NumericalError("fitting", "relaxation curve has no positive times");

  const double tau_lo = 0.1 * t_first_positive;
  const double tau_hi = 10.0 * times.back();
  std::vector<double> grid(kTauGridPoints);
  const double log_step =
      std::log(tau_hi / tau_lo) / (kTauGridPoints - 1);
  for (int i = 0; i < kTauGridPoints; ++i)
    grid[static_cast<std::size_t>(i)] = tau_lo * std::exp(log_step * i);

  std::vector<Eigen::VectorXd> columns(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    columns[i] = relaxation_column(times, grid[i]);

  const auto solve_for_taus = [&](const std::vector<double>& taus) {
    Eigen::MatrixXd phi(d.size(), static_cast<Eigen::Index>(taus.size()));
    for (std::size_t k = 0; k < taus.size(); ++k)
      phi.col(static_cast<Eigen::Index>(k)) = relaxation_column(times, taus[k]);
    return solve_g(phi, d);
  };

  // Exhaustive ascending-index combinations; enumeration order makes the
  // smallest-tau tie-break implicit (keep the first strictly better result).
  std::vector<int> idx(static_cast<std::size_t>(n_terms));
  for (int k = 0; k < n_terms; ++k) idx[static_cast<std::size_t>(k)] = k;
  std::vector<int> best_idx;
  GSolve best;
  best.residual = std::numeric_limits<double>::infinity();
  while (true) {
    Eigen::MatrixXd phi(d.size(), n_terms);
    for (int k = 0; k < n_terms; ++k)
      phi.col(k) = columns[static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])];
    GSolve sol = solve_g(phi, d);
    if (sol.residual < best.residual) {
      best = sol;
      best_idx = idx;
    }
    int k = n_terms - 1;
    while (k >= 0 && idx[static_cast<std::size_t>(k)] ==
                         kTauGridPoints - n_terms + k)
      --k;
    if (k < 0) break;
    ++idx[static_cast<std::size_t>(k)];
    for (int j = k + 1; j < n_terms; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }

  std::vector<double> taus(static_cast<std::size_t>(n_terms));
  for (int k = 0; k < n_terms; ++k)
    taus[static_cast<std::size_t>(k)] =
        grid[static_cast<std::size_t>(best_idx[static_cast<std::size_t>(k)])];

  // Polish by rounds of coordinate descent: each tau is refined with a
  // deterministic ternary bisection of the (locally unimodal) residual over
  // one grid spacing around its current value, g re-solved exactly per probe.
  const double cell = std::exp(log_step);
  for (int round = 0; round < 8; ++round) {
    const double before = best.residual;
    for (int k = 0; k < n_terms; ++k) {
      double lo = std::max(grid.front(), taus[static_cast<std::size_t>(k)] / cell);
      double hi = std::min(grid.back(), taus[static_cast<std::size_t>(k)] * cell);
      for (int iter = 0; iter < 80 && hi - lo > 1e-12 * hi; ++iter) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        std::vector<double> t1 = taus, t2 = taus;
        t1[static_cast<std::size_t>(k)] = m1;
        t2[static_cast<std::size_t>(k)] = m2;
        if (solve_for_taus(t1).residual <= solve_for_taus(t2).residual)
          hi = m2;
        else
          lo = m1;
      }
      std::vector<double> candidate = taus;
      candidate[static_cast<std::size_t>(k)] = 0.5 * (lo + hi);
      const GSolve polished = solve_for_taus(candidate);
      if (polished.residual < best.residual) {
        best = polished;
        taus = candidate;
      }
    }
    if (best.residual >= before - 1e-14 * (1.0 + before)) break;
  }

  const double flat_residual = d.norm();
  if (best.projected && best.residual >= flat_residual && flat_residual > 0.0)
    throw NumericalError(
        "fitting",
        "constrained fit explains the data no better than a flat line "
        "(unconstrained residual " +
            std::to_string(best.unconstrained_residual) + ")");

  PronyFit fit;
  for (int k = 0; k < n_terms; ++k)
    fit.terms.push_back({best.g[k], taus[static_cast<std::size_t>(k)]});
  std::sort(fit.terms.begin(), fit.terms.end(),
            [](const PronyTerm& a, const PronyTerm& b) { return a.tau < b.tau; });
  fit.report.n_points = static_cast<int>(curve.points.size());
  fit.report.residual_norm = best.residual;
  fit.report.relative_residual =
      flat_residual > 0.0 ? best.residual / flat_residual : 0.0;
  fit.report.constraint_projected = best.projected;
  fit.report.unconstrained_residual = best.unconstrained_residual;
  return fit;
}

}  // namespace deg
