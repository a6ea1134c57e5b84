#include "deg/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "deg/cycle.hpp"
#include "deg/errors.hpp"

namespace deg {
namespace {

/// Deterministic standard-normal draws: 53-bit uniforms from mt19937_64 fed
/// through Box-Muller. std::normal_distribution is implementation-defined,
/// which would break byte-identical reruns across standard libraries.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : rng_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();        // [0, 1)
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  double uniform() {
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  }

  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

struct SourceState {
  double v_hv = 0.0;
  bool connected = false;
};

SourceState source_at(const CircuitParams& circ, double t) {
  SourceState st;
  for (const auto& step : circ.source) {
    if (step.t > t) break;
    st.v_hv = circ.converter_gain * step.v_cmd;
    st.connected = step.connected;
  }
  return st;
}

/// Net current into the film charge, plus the source-loop current.
struct NodeCurrents {
  double dq_dt = 0.0;
  double i_source = 0.0;
};

NodeCurrents node_currents(const CircuitParams& circ,
                           const CapacitorProfile& profile, double t,
                           double q) {
  const double c = profile.c_p.at(t);
  if (!(c > 0.0))
    throw DomainError("circuit", "capacitance profile must stay positive");
  const double r_p = profile.r_p.at(t);
  if (!(r_p > 0.0))
    throw DomainError("circuit", "leakage profile must stay positive");
  const double v = q / c;
  const SourceState src = source_at(circ, t);
  NodeCurrents nc;
  nc.i_source = src.connected ? (src.v_hv - v) / circ.r_e : 0.0;
  nc.dq_dt = nc.i_source - v * (1.0 / r_p + 1.0 / circ.r_mes);
  return nc;
}

Trace integrate_trace(const CircuitParams& circ,
                      const CapacitorProfile& profile, double t_end,
                      double dt) {
  Trace trace;
  trace.dt = dt;
  const auto n_steps = static_cast<long long>(std::ceil(t_end / dt - 1e-12));
  trace.samples.reserve(static_cast<std::size_t>(n_steps) + 1);
  double q = 0.0;  // the film starts uncharged
  const auto record = [&](double t, double charge) {
    const NodeCurrents nc = node_currents(circ, profile, t, charge);
    trace.samples.push_back({t, charge / profile.c_p.at(t), nc.i_source});
  };
  record(0.0, q);
  for (long long i = 0; i < n_steps; ++i) {
    const double t = static_cast<double>(i) * dt;
    const double k1 = node_currents(circ, profile, t, q).dq_dt;
    const double k2 =
        node_currents(circ, profile, t + 0.5 * dt, q + 0.5 * dt * k1).dq_dt;
    const double k3 =
        node_currents(circ, profile, t + 0.5 * dt, q + 0.5 * dt * k2).dq_dt;
    const double k4 = node_currents(circ, profile, t + dt, q + dt * k3).dq_dt;
    q += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    record(static_cast<double>(i + 1) * dt, q);
  }
  return trace;
}

}  // namespace

double PiecewiseLinear::at(double t) const {
  if (knots.empty())
    throw DomainError("circuit", "profile has no knots");
  if (t <= knots.front().first) return knots.front().second;
  if (t >= knots.back().first) return knots.back().second;
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (t <= knots[i].first) {
      const auto& [t0, y0] = knots[i - 1];
      const auto& [t1, y1] = knots[i];
      return y0 + (t - t0) / (t1 - t0) * (y1 - y0);
    }
  }
  return knots.back().second;
}

Trace simulate_trace(const CircuitParams& circ, const CapacitorProfile& profile,
                     double t_end, double dt, bool check_refinement) {
  if (!(circ.r_e > 0.0) || !(circ.r_mes > 0.0))
    throw DomainError("circuit", "resistances must be positive");
  if (!(circ.converter_gain > 0.0))
    throw DomainError("circuit", "converter gain must be positive");
  if (!(dt > 0.0)) throw DomainError("circuit", "dt must be positive");
  if (!(t_end >= dt))
    throw DomainError("circuit", "t_end must be at least one step");

  Trace trace = integrate_trace(circ, profile, t_end, dt);
  if (check_refinement) {
    const Trace fine = integrate_trace(circ, profile, t_end, 0.5 * dt);
    double v_scale = 0.0;
    for (const auto& s : fine.samples)
      v_scale = std::max(v_scale, std::abs(s.v_active));
    const std::size_t shared =
        std::min(trace.samples.size(), (fine.samples.size() + 1) / 2);
    for (std::size_t i = 0; i < shared; ++i) {
      const double shift =
          std::abs(trace.samples[i].v_active - fine.samples[2 * i].v_active);
      // Relative to the trace's voltage scale; a uniformly zero trace never
      // demands refinement.
      if (shift > 1e-6 * v_scale) {
        trace.refinement_required = true;
        break;
      }
    }
  }
  if (circ.noise_std > 0.0) {
    GaussianSource noise(circ.seed);
    for (auto& s : trace.samples) s.i_shunt += circ.noise_std * noise.next();
  }
  return trace;
}

CapacitanceEstimate estimate_capacitance(const Trace& trace, double t0,
                                         double t1, double v_known, double r_p,
                                         double r_mes) {
  if (!(r_p > 0.0) || !(r_mes > 0.0))
    throw DomainError("circuit", "resistances must be positive");
  if (v_known == 0.0)
    throw DomainError("circuit", "v_known must be nonzero");
  if (trace.samples.size() < 2)
    throw NumericalError("circuit", "trace too short to integrate");
  if (!(t1 > t0))
    throw NumericalError("circuit", "estimation window is empty");

  // Reconstruct the film charge from the uncharged start of the trace:
  // dQ/dt = i_loop - v/r_p - v/r_mes, trapezoid quadrature on the trace grid.
  const auto i_cap = [&](const TraceSample& s) {
    return s.i_shunt - s.v_active / r_p - s.v_active / r_mes;
  };
  std::vector<double> charge(trace.samples.size(), 0.0);
  for (std::size_t i = 1; i < trace.samples.size(); ++i) {
    const auto& a = trace.samples[i - 1];
    const auto& b = trace.samples[i];
    charge[i] = charge[i - 1] + 0.5 * (i_cap(a) + i_cap(b)) * (b.t - a.t);
  }

  double sum_qv = 0.0;
  double sum_vv = 0.0;
  double sum_abs_v = 0.0;
  std::size_t n = 0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < trace.samples.size(); ++i) {
    const double t = trace.samples[i].t;
    if (t < t0 - 1e-12 || t > t1 + 1e-12) continue;
    const double v = trace.samples[i].v_active;
    sum_qv += charge[i] * v;
    sum_vv += v * v;
    sum_abs_v += std::abs(v);
    last = i;
    ++n;
  }
  if (n < 2)
    throw NumericalError("circuit",
                         "estimation window contains fewer than two samples");
  if (sum_abs_v / static_cast<double>(n) <= 1e-6 * std::abs(v_known))
    throw NumericalError("circuit", "estimation window carries no signal");
  const double v_end = trace.samples[last].v_active;
  if (std::abs(v_end - v_known) > 0.25 * std::abs(v_known))
    throw NumericalError(
        "circuit", "window does not settle near the expected voltage level");
  if (!(sum_vv > 0.0))
    throw NumericalError("circuit", "estimation window carries no signal");

  CapacitanceEstimate est;
  est.capacitance = sum_qv / sum_vv;
  est.n_samples = static_cast<int>(n);
  double ss = 0.0;
  for (std::size_t i = 0; i < trace.samples.size(); ++i) {
    const double t = trace.samples[i].t;
    if (t < t0 - 1e-12 || t > t1 + 1e-12) continue;
    const double r = charge[i] - est.capacitance * trace.samples[i].v_active;
    ss += r * r;
  }
  est.rms_residual = std::sqrt(ss / static_cast<double>(n));
  return est;
}

double scavenged_from_trace(double c_max, double c_min, double v) {
  return produced_energy(c_max, c_min, v, v);
}

}  // namespace deg
