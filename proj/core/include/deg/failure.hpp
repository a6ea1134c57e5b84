#pragma once

#include <string_view>
#include <utility>
#include <vector>

#include "deg/material.hpp"
#include "deg/membrane.hpp"

namespace deg {

/// Failure classification. Checks are applied in this fixed order so a point
/// violating several criteria always gets the same verdict.
enum class Verdict { feasible, yield, breakdown, pull_in };

[[nodiscard]] std::string_view to_string(Verdict v);

/// One candidate operating point: pre-strain, actuation stretch and the peak
/// electric field it will see.
struct DesignPoint {
  double lam_p = 1.0;
  double lam_act = 1.0;
  double e_field = 0.0;  ///< [V/m]
};

/// Dielectric strength law. Default: field = k_bd / thickness (one-point
/// calibration). A user-supplied (thickness, field) table replaces the
/// reciprocal law; it is interpolated linearly and clamped at its ends.
struct BreakdownLaw {
  double k_bd = 3.89e3;  ///< [V]; calibrated so a 27.8 um film holds 140 MV/m
  std::vector<std::pair<double, double>> table;  ///< (thickness_m, field_v_m)

  [[nodiscard]] double field_at(double thickness) const;
};

/// Largest admissible actuation stretch before the area-expansion yield
/// limit: max(1, sqrt(max_area_expansion)/lam_p). lam_p < 1 throws.
[[nodiscard]] double mechanical_limit(const MaterialParams& mat, double lam_p);

/// Breakdown field for a film of the given thickness under the reciprocal
/// law; non-positive thickness or k_bd throws DomainError.
[[nodiscard]] double breakdown_field(double thickness, double k_bd);

/// Residual of the static stretch balance at fixed field,
///   F(lam) = -6*elastic(lam) + eps0*eps_r*E^2/lam,
/// per unit edge-area (x20*x30), using instantaneous coefficients. The membrane
/// accelerates outward where F > 0. This is the equilibrium of the dynamic
/// motion balance with inertia and gravity dropped; the pre-strain frame pins
/// the membrane wherever F(lam_p) <= 0.
[[nodiscard]] double static_balance_residual(const MaterialParams& mat,
                                             double lam, double e_field);

/// All stable equilibria of the fixed-field balance in [lam_p, yield limit],
/// ascending. A frame-pinned state at lam_p is reported as lam_p itself.
/// Roots are bracketed on a 512-point log-spaced grid and refined by
/// bisection to rel_tol.
[[nodiscard]] std::vector<double> stable_equilibria(const MaterialParams& mat,
                                                    double lam_p,
                                                    double e_field,
                                                    double rel_tol = 1e-9);

/// True if the membrane, pre-strained to lam_p, has any stable stretch
/// equilibrium below the yield limit under the given fixed field.
[[nodiscard]] bool has_stable_equilibrium(const MaterialParams& mat,
                                          double lam_p, double e_field);

/// Smallest field at which every stable equilibrium below the yield limit is
/// lost (the membrane thins without bound: pull-in). Searches [0, e_ceiling]
/// by bisection to 1e-6 relative; returns +infinity if a stable equilibrium
/// persists at e_ceiling (callers pass the breakdown field of the thinnest
/// admissible state so "survives to breakdown" maps to the sentinel).
[[nodiscard]] double pullin_field(const MaterialParams& mat,
                                  const MembraneGeometry& geom, double lam_p,
                                  double e_ceiling);

/// Fixed-order classification: yield (lam_p*lam_act beyond the area limit),
/// then breakdown (field strictly above the law at the thinnest state), then
/// pull-in (no stable equilibrium at the operating field).
[[nodiscard]] Verdict classify(const MaterialParams& mat,
                               const MembraneGeometry& geom,
                               const DesignPoint& pt, const BreakdownLaw& law);

struct EnvelopeRanges {
  double lam_p_min = 1.0;
  double lam_p_max = 6.0;
  double lam_act_min = 1.0;
  double lam_act_max = 6.0;
};

struct EnvelopeCell {
  double lam_p = 1.0;
  double lam_act = 1.0;
  Verdict verdict = Verdict::feasible;
  double limiting_field = 0.0;  ///< min(breakdown, pull-in) at max stretch
};

struct BoundaryPoint {
  double lam_p = 1.0;
  double lam_act = 1.0;
};

/// Raster of verdicts over (lam_p, lam_act) plus extracted boundary
/// polylines. Each cell is classified at its own limit field (the breakdown
/// field of its thinnest state), i.e. the envelope assumes operation at the
/// dielectric limit. Relaxation is ignored: instantaneous coefficients give
/// the conservative (stiffest) envelope.
struct OperatingEnvelope {
  int nx = 0;
  int ny = 0;
  std::vector<EnvelopeCell> cells;  ///< row-major, lam_act fastest
  /// lam_act = sqrt(max_area_expansion)/lam_p sampled on the lam_p grid.
  std::vector<BoundaryPoint> mechanical_boundary;
  /// Per lam_p column, the smallest lam_act whose verdict is an electrical
  /// failure (breakdown or pull-in); empty when no column has one.
  std::vector<BoundaryPoint> breakdown_boundary;
};

/// Classifies an nx-by-ny lattice of design points (inclusive of range ends).
/// Deterministic: identical ranges and resolution give identical envelopes.
[[nodiscard]] OperatingEnvelope envelope_grid(const MaterialParams& mat,
                                              const MembraneGeometry& geom,
                                              const EnvelopeRanges& ranges,
                                              int nx, int ny,
                                              const BreakdownLaw& law);

}  // namespace deg
