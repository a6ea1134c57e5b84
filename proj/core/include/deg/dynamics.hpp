#pragma once

#include <string>
#include <utility>
#include <vector>

#include "deg/material.hpp"
#include "deg/membrane.hpp"

namespace deg {

/// Piecewise-constant electric-field schedule: value of the step with the
/// largest start time <= t (0 before the first step).
struct FieldSchedule {
  std::vector<std::pair<double, double>> steps;  ///< (t_start_s, e_v_per_m)

  [[nodiscard]] double at(double t) const;
};

struct DynamicsConfig {
  FieldSchedule e_field;
  double gravity = 9.81;  ///< [m/s^2]; validation configs set 0
  double t_end = 1.0;     ///< [s]
  double dt = 1e-5;       ///< [s]
  double lam0 = 1.0;
  double lam_dot0 = 0.0;  ///< [1/s]
};

struct TrajectorySample {
  double t = 0.0;
  double lam = 1.0;
  double lam_dot = 0.0;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  double dt = 0.0;
  std::string scheme = "rk4-fixed";
  bool aborted = false;
  std::string abort_reason;
};

/// Second time derivative of the stretch from the membrane motion balance
///   m*x10*ldd = -6*x20*x30*elastic(lam; relaxed coeffs at t)
///               + x20*x30*(1/lam)*eps0*eps_r*E(t)^2
///               + (x30/(x10*lam^2))*m*g.
/// The leading factor 6 and the sign of the gravity term are model
/// conventions adopted as-is. lam_dot enters no term (no damping); it is part
/// of the state signature only. Requires lam > 0 and mass > 0.
[[nodiscard]] double lambda_acceleration(const MaterialParams& mat,
                                         const MembraneGeometry& geom,
                                         double lam, double lam_dot, double t,
                                         const DynamicsConfig& cfg);

/// Classical fixed-step RK4 on (lam, lam_dot) over [0, t_end]. Deterministic:
/// identical inputs give bitwise-identical trajectories. Terminates early
/// with the abort flag if lam leaves (0, sqrt(max_area_expansion)] or stops
/// being finite.
[[nodiscard]] Trajectory integrate(const MaterialParams& mat,
                                   const MembraneGeometry& geom,
                                   const DynamicsConfig& cfg);

/// Halves dt (starting from cfg.dt) until no sample's lam changes by more
/// than lam_tol when halved again, then returns the accepted trajectory.
/// Throws NumericalError if max_halvings is exhausted.
[[nodiscard]] Trajectory integrate_with_halving(const MaterialParams& mat,
                                                const MembraneGeometry& geom,
                                                DynamicsConfig cfg,
                                                double lam_tol = 1e-8,
                                                int max_halvings = 16);

/// cycle_energy * frequency [W]; frequency < 0 throws DomainError.
[[nodiscard]] double mean_power(double cycle_energy, double frequency);

}  // namespace deg
