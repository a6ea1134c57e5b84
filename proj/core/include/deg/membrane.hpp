#pragma once

namespace deg {

/// Reference (unstretched) film dimensions [m] plus the lumped moving mass
/// [kg] used by the dynamic model. The mass is an independent input: configs
/// typically set it to the film mass (density * volume) but a rig may add a
/// proof mass.
struct MembraneGeometry {
  double x10 = 0.0;
  double x20 = 0.0;
  double x30 = 0.0;
  double mass = 0.0;
};

/// Throws ConfigError listing every non-positive dimension (mass may be 0).
void validate(const MembraneGeometry& geom);

/// Equibiaxial stretch state: lam_total = lam_p * lam_act.
struct StretchState {
  double lam_p = 1.0;
  double lam_act = 1.0;
  double lam_total = 1.0;

  /// Builds a consistent state; throws DomainError if either factor < 1.
  [[nodiscard]] static StretchState from(double lam_p, double lam_act);
};

/// Electrostatic (Maxwell) compressive stress eps0*eps_r*E^2 [Pa].
/// Negative field or eps_r < 1 throws DomainError.
[[nodiscard]] double maxwell_stress(double rel_permittivity, double e_field);

/// Film thickness x30/lam^2 under equibiaxial stretch (incompressibility).
[[nodiscard]] double thickness_at(const MembraneGeometry& geom,
                                  double lam_total);

/// In-plane electrode area x10*x20*lam^2.
[[nodiscard]] double stretched_area(const MembraneGeometry& geom,
                                    double lam_total);

/// Parallel-plate capacitance eps0*eps_r*x10*x20*lam^4/x30 [F]; the lam^4 is
/// area growth (lam^2) times thickness reduction (lam^2).
[[nodiscard]] double capacitance(const MembraneGeometry& geom,
                                 double rel_permittivity, double lam_total);

/// Through-thickness conduction resistance rho*thickness/area =
/// rho*x30/(x10*x20*lam^4) [ohm]. Satisfies R_p*C_p = rho*eps0*eps_r
/// regardless of geometry or stretch.
[[nodiscard]] double leakage_resistance(const MembraneGeometry& geom,
                                        double bulk_resistivity,
                                        double lam_total);

/// Uniform field V/thickness [V/m]; non-positive thickness throws.
[[nodiscard]] double field_from_voltage(double voltage, double thickness);

}  // namespace deg
