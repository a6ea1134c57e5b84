#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace deg {

/// Piecewise-linear function of time; constant extrapolation outside the
/// knot range. Knot times must be strictly increasing.
struct PiecewiseLinear {
  std::vector<std::pair<double, double>> knots;  ///< (t_s, value)

  [[nodiscard]] double at(double t) const;
};

/// One row of the source schedule: from time t the low-voltage command is
/// v_cmd and the HV side is connected or not.
struct SourceStep {
  double t = 0.0;
  double v_cmd = 0.0;
  bool connected = false;
};

/// Measurement chain around the film: an ideal proportional HV converter
/// (v_hv = gain * v_cmd) feeding the active area through a series resistance
/// r_e, with a measurement path of resistance r_mes from the active electrode
/// to ground. Optional zero-mean Gaussian noise (fixed seed) is added to the
/// recorded shunt current only; the simulated state stays exact.
struct CircuitParams {
  double r_e = 1e6;    ///< [ohm]
  double r_mes = 1e9;  ///< [ohm]
  double converter_gain = 2000.0;
  std::vector<SourceStep> source;
  double noise_std = 0.0;  ///< [A]
  std::uint64_t seed = 0;
};

/// Externally imposed film state: capacitance and leakage resistance versus
/// time (stretch enters through these profiles).
struct CapacitorProfile {
  PiecewiseLinear c_p;  ///< [F]
  PiecewiseLinear r_p;  ///< [ohm]
};

struct TraceSample {
  double t = 0.0;
  double v_active = 0.0;  ///< film voltage [V]
  double i_shunt = 0.0;   ///< source-loop current through r_e [A]
};

struct Trace {
  std::vector<TraceSample> samples;
  double dt = 0.0;
  bool refinement_required = false;  ///< set by the halving check
};

/// Integrates the single-node charge balance
///   dQ/dt = i_source - v*(1/r_p + 1/r_mes),   v = Q/c_p(t),
///   i_source = (gain*v_cmd - v)/r_e when connected, else 0,
/// with fixed-step RK4 (the per-step charge update equals the scheme's own
/// quadrature of the net current by construction). The film starts uncharged.
/// With check_refinement, the run is repeated at dt/2 and the flag is set if
/// any shared sample's voltage moves by more than 1e-6 relative.
[[nodiscard]] Trace simulate_trace(const CircuitParams& circ,
                                   const CapacitorProfile& profile,
                                   double t_end, double dt,
                                   bool check_refinement = false);

struct CapacitanceEstimate {
  double capacitance = 0.0;  ///< [F]
  double rms_residual = 0.0;
  int n_samples = 0;
};

/// Recovers the film capacitance from a trace over [t0, t1]: the conduction
/// currents v/r_p and v/r_mes are subtracted from the recorded loop current,
/// the remainder is integrated from the (uncharged) start of the trace into a
/// film charge Q(t), and C is the least-squares slope of Q against v over the
/// window. v_known anchors the sanity checks: the window must carry signal
/// (mean |v| above 1e-6*|v_known|) and end within 25% of v_known; violations
/// throw NumericalError rather than returning a silent zero.
[[nodiscard]] CapacitanceEstimate estimate_capacitance(const Trace& trace,
                                                       double t0, double t1,
                                                       double v_known,
                                                       double r_p,
                                                       double r_mes);

/// Constant-voltage scavenged-energy reading 0.5*(c_max - c_min)*v^2 from
/// measured capacitance endpoints; delegates to the cycle ledger's
/// produced_energy so both paths agree bit-for-bit.
[[nodiscard]] double scavenged_from_trace(double c_max, double c_min,
                                          double v);

}  // namespace deg
