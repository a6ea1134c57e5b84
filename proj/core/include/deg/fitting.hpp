#pragma once

#include <utility>
#include <vector>

#include "deg/material.hpp"

namespace deg {

enum class CurveKind {
  tensile,    ///< (stretch, nominal stress [Pa])
  relaxation  ///< (time [s], normalized stress, 1 at t = 0)
};

enum class FitMode { equibiaxial, uniaxial };

struct TestCurve {
  CurveKind kind = CurveKind::tensile;
  std::vector<std::pair<double, double>> points;  ///< abscissa ascending
};

/// Throws ConfigError on non-monotonic abscissae or fewer than 4 points.
void validate(const TestCurve& curve);

struct FitReport {
  double residual_norm = 0.0;      ///< ||model - data||_2
  double relative_residual = 0.0;  ///< residual_norm / ||data||_2
  int n_points = 0;
  bool constraint_projected = false;   ///< Prony g projected into the simplex
  double unconstrained_residual = 0.0; ///< pre-projection residual (Prony)
};

struct YeohFit {
  YeohCoefficients coefficients;
  FitReport report;
};

struct PronyFit {
  std::vector<PronyTerm> terms;
  FitReport report;
};

/// Model nominal stress (force per reference area) for the two supported
/// homogeneous tests. Both are linear in the Yeoh coefficients.
[[nodiscard]] double nominal_stress_equibiaxial(const YeohCoefficients& c,
                                                double lam);
[[nodiscard]] double nominal_stress_uniaxial(const YeohCoefficients& c,
                                             double lam);

/// Exact linear least squares for (c10, c20, c30) against a tensile curve:
/// a rank-revealing QR of the basis expansion of the declared mode's nominal
/// stress. Throws NumericalError when the basis is rank deficient (e.g. all
/// abscissae at lam = 1) and ConfigError on a curve of the wrong kind.
[[nodiscard]] YeohFit fit_yeoh(const TestCurve& curve, FitMode mode);

/// Separable least squares for n_terms Prony pairs against a normalized
/// relaxation curve: each tau ranges over a 64-point log grid spanning
/// [0.1*first abscissa, 10*last abscissa], the g vector is solved linearly
/// per tau choice, the best combination is kept (ties broken by smallest
/// taus) and each tau is polished by bounded bisection within its grid cell.
/// The g are projected onto 0 <= g, sum g <= 1 - 1e-9; if the projected
/// model explains the data no better than a flat line, a NumericalError
/// carrying the unconstrained residual is thrown. Requires at least
/// 2*n_terms + 2 points.
[[nodiscard]] PronyFit fit_prony(const TestCurve& curve, int n_terms);

}  // namespace deg
