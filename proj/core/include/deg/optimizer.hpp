#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "deg/cycle.hpp"
#include "deg/failure.hpp"

namespace deg {

struct SweepOptions {
  double lam_p_min = 1.0;
  double lam_p_max = 6.0;
  int resolution = 51;  ///< grid points, inclusive of both ends
  std::array<double, 5> phase_durations{1.0, 1.0, 1.0, 1.0, 1.0};
  bool include_viscoelasticity = false;
  bool include_conduction_loss = true;
  int threads = 1;
};

struct SweepRow {
  DesignPoint design;
  double net = 0.0;
  double produced = 0.0;
  double loss = 0.0;
  /// For feasible rows, the criterion that capped the field (breakdown or
  /// pull_in); for infeasible rows, the violated criterion.
  Verdict limiting = Verdict::feasible;
  bool feasible = false;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::size_t best = 0;  ///< index of the feasible row with the largest net
};

/// One-dimensional design sweep: for each lam_p on the grid, the actuation
/// stretch is pushed to the mechanical limit and the field to
/// min(breakdown, pull-in) at the resulting thinnest state, then a
/// constant-voltage cycle is evaluated. Rows may be evaluated concurrently;
/// the reduction is index-ordered, so results are identical for any thread
/// count. Ties on net prefer the smallest lam_p. Throws InfeasibleDesign when
/// no row is feasible.
[[nodiscard]] SweepResult sweep_prestrain(const MaterialParams& mat,
                                          const MembraneGeometry& geom,
                                          const SweepOptions& opt,
                                          const BreakdownLaw& law);

struct OptimizeBounds {
  double lam_p_min = 1.0;
  double lam_p_max = 6.0;
  double lam_act_min = 1.0;
  double lam_act_max = 6.0;
  double e_min = 0.0;      ///< [V/m]
  double e_max = 1.4e8;    ///< [V/m]
};

struct OptimizeOptions {
  OptimizeBounds bounds;
  std::array<int, 3> resolution{11, 11, 11};  ///< (lam_p, lam_act, e) points
  std::array<double, 5> phase_durations{1.0, 1.0, 1.0, 1.0, 1.0};
  bool include_viscoelasticity = false;
  bool include_conduction_loss = true;
  int threads = 1;
};

struct OptimizeResult {
  DesignPoint best;
  CycleResult ledger;               ///< exact cycle ledger at the optimum
  std::size_t evaluated = 0;        ///< grid points visited
  std::size_t feasible_count = 0;
  std::size_t rejected_yield = 0;
  std::size_t rejected_breakdown = 0;
  std::size_t rejected_pull_in = 0;
};

/// Deterministic grid search of net energy over the (lam_p, lam_act, e_field)
/// box, constant-voltage cycles, failure criteria as hard constraints. Ties
/// are broken by smallest lam_p, then smallest e_field, then smallest
/// lam_act. Refining the grid by node-preserving subdivision (n -> 2n-1)
/// never lowers the best net. Throws InfeasibleDesign listing per-criterion
/// rejection counts when the feasible set is empty.
[[nodiscard]] OptimizeResult maximize_energy(const MaterialParams& mat,
                                             const MembraneGeometry& geom,
                                             const OptimizeOptions& opt,
                                             const BreakdownLaw& law);

}  // namespace deg
