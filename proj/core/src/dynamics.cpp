#include "deg/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "deg/errors.hpp"

namespace deg {
namespace {

struct State {
  double lam;
  double lam_dot;
};

}  // namespace

double FieldSchedule::at(double t) const {
  double value = 0.0;
  for (const auto& [t_start, e] : steps) {
    if (t_start > t) break;
    value = e;
  }
  return value;
}

double lambda_acceleration(const MaterialParams& mat,
                           const MembraneGeometry& geom, double lam,
                           double lam_dot, double t,
                           const DynamicsConfig& cfg) {
  (void)lam_dot;  // no damping term; the state signature keeps the pair
  if (!(lam > 0.0)) throw DomainError("dynamics", "stretch must be positive");
  if (!(geom.mass > 0.0))
    throw DomainError("dynamics", "membrane mass must be positive");
  const YeohCoefficients coeffs = relaxed_coefficients(mat, t);
  const double e = cfg.e_field.at(t);
  const double elastic = equibiaxial_elastic_term(coeffs, lam);
  const double area_factor = geom.x20 * geom.x30;
  const double force = -6.0 * area_factor * elastic +
                       area_factor * maxwell_stress(mat.rel_permittivity, e) /
                           lam +
                       geom.x30 / (geom.x10 * lam * lam) * geom.mass *
                           cfg.gravity;
  return force / (geom.mass * geom.x10);
}

Trajectory integrate(const MaterialParams& mat, const MembraneGeometry& geom,
                     const DynamicsConfig& cfg) {
  if (!(cfg.dt > 0.0)) throw DomainError("dynamics", "dt must be positive");
  if (!(cfg.t_end >= cfg.dt))
    throw DomainError("dynamics", "t_end must be at least one step");
  if (!(cfg.lam0 > 0.0))
    throw DomainError("dynamics", "initial stretch must be positive");

  const double lam_ceiling = std::sqrt(mat.max_area_expansion);
  const auto rhs = [&](double t, const State& s) {
    return State{s.lam_dot, lambda_acceleration(mat, geom, s.lam, s.lam_dot,
                                                t, cfg)};
  };
  const auto admissible = [&](double lam) {
    return std::isfinite(lam) && lam > 0.0 && lam <= lam_ceiling;
  };

  Trajectory traj;
  traj.dt = cfg.dt;
  const auto n_steps =
      static_cast<long long>(std::ceil(cfg.t_end / cfg.dt - 1e-12));
  traj.samples.reserve(static_cast<std::size_t>(n_steps) + 1);
  State s{cfg.lam0, cfg.lam_dot0};
  traj.samples.push_back({0.0, s.lam, s.lam_dot});
  if (!admissible(s.lam)) {
    traj.aborted = true;
    traj.abort_reason = "initial stretch outside (0, yield limit]";
    return traj;
  }
  const double h = cfg.dt;
  for (long long i = 0; i < n_steps; ++i) {
    const double t = static_cast<double>(i) * h;
    const State k1 = rhs(t, s);
    const State k2 =
        rhs(t + 0.5 * h, {s.lam + 0.5 * h * k1.lam, s.lam_dot + 0.5 * h * k1.lam_dot});
    const State k3 =
        rhs(t + 0.5 * h, {s.lam + 0.5 * h * k2.lam, s.lam_dot + 0.5 * h * k2.lam_dot});
    const State k4 = rhs(t + h, {s.lam + h * k3.lam, s.lam_dot + h * k3.lam_dot});
    const State next{
        s.lam + h / 6.0 * (k1.lam + 2.0 * k2.lam + 2.0 * k3.lam + k4.lam),
        s.lam_dot +
            h / 6.0 * (k1.lam_dot + 2.0 * k2.lam_dot + 2.0 * k3.lam_dot +
                       k4.lam_dot)};
    if (!admissible(next.lam) || !std::isfinite(next.lam_dot)) {
      traj.aborted = true;
      traj.abort_reason = "stretch left (0, yield limit]";
      break;
    }
    s = next;
    traj.samples.push_back({static_cast<double>(i + 1) * h, s.lam, s.lam_dot});
  }
  return traj;
}

Trajectory integrate_with_halving(const MaterialParams& mat,
                                  const MembraneGeometry& geom,
                                  DynamicsConfig cfg, double lam_tol,
                                  int max_halvings) {
  for (int level = 0; level <= max_halvings; ++level) {
    Trajectory coarse = integrate(mat, geom, cfg);
    if (coarse.aborted) return coarse;  // physics, not resolution
    DynamicsConfig finer_cfg = cfg;
    finer_cfg.dt = 0.5 * cfg.dt;
    Trajectory fine = integrate(mat, geom, finer_cfg);
    if (!fine.aborted) {
      double max_shift = 0.0;
      const std::size_t shared =
          std::min(coarse.samples.size(), (fine.samples.size() + 1) / 2);
      for (std::size_t i = 0; i < shared; ++i)
        max_shift = std::max(
            max_shift,
            std::abs(coarse.samples[i].lam - fine.samples[2 * i].lam));
      if (max_shift < lam_tol) return coarse;
    }
    cfg.dt = finer_cfg.dt;
  }
  throw NumericalError("dynamics",
                       "step halving did not reach the acceptance tolerance");
}

double mean_power(double cycle_energy, double frequency) {
  if (frequency < 0.0)
    throw DomainError("dynamics", "frequency must be non-negative");
  return cycle_energy * frequency;
}

}  // namespace deg
