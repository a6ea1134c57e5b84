#pragma once

#include <array>
#include <vector>

namespace deg {

/// Vacuum permittivity [F/m].
inline constexpr double kVacuumPermittivity = 8.854187817e-12;

/// Third-order incompressible polynomial (Yeoh) coefficients [Pa].
/// W(I1) = c10*(I1-3) + c20*(I1-3)^2 + c30*(I1-3)^3.
struct YeohCoefficients {
  double c10 = 0.0;
  double c20 = 0.0;
  double c30 = 0.0;
};

/// One term of a Prony relaxation series: dimensionless modulus fraction g
/// and time constant tau [s].
struct PronyTerm {
  double g = 0.0;
  double tau = 1.0;
};

/// Bulk material description. All values come from config files; nothing here
/// is hard-coded elsewhere in the library.
struct MaterialParams {
  YeohCoefficients yeoh0;        ///< instantaneous (t = 0) coefficients
  std::vector<PronyTerm> prony;  ///< empty = purely elastic
  double rel_permittivity = 4.7;
  double density = 960.0;            ///< [kg/m^3]
  double bulk_resistivity = 1e13;    ///< [ohm*m]
  double max_area_expansion = 36.0;  ///< yield limit on lambda^2 (equibiaxial)
};

/// Throws ConfigError listing every violated constraint (c10 > 0, finite
/// coefficients, 0 <= g < 1 with sum < 1, tau > 0, rel_permittivity >= 1,
/// positive density/resistivity, max_area_expansion > 1).
void validate(const MaterialParams& mat);

/// First invariant of the left Cauchy-Green tensor for a principal stretch
/// triple: I1 = l1^2 + l2^2 + l3^2. Throws DomainError on non-positive input.
[[nodiscard]] double first_invariant(double l1, double l2, double l3);

/// Incompressible equibiaxial stretch triple {lam, lam, lam^-2}.
[[nodiscard]] std::array<double, 3> equibiaxial_stretches(double lam);

/// Scalar relaxation factor 1 - sum_k g_k*(1 - exp(-t/tau_k)); multiplies all
/// three Yeoh coefficients. t < 0 throws DomainError.
[[nodiscard]] double relaxation_factor(const MaterialParams& mat, double t);

/// Coefficients after relaxing for time t since load application.
[[nodiscard]] YeohCoefficients relaxed_coefficients(const MaterialParams& mat,
                                                    double t);

/// Strain-energy density W(I1) [Pa]; i1 < 3 throws DomainError.
[[nodiscard]] double strain_energy(const YeohCoefficients& c, double i1);

/// dW/dI1 evaluated at i1; the tangent entering every stress expression.
[[nodiscard]] double strain_energy_derivative(const YeohCoefficients& c,
                                              double i1);

/// Equibiaxial elastic stress kernel
///   (lam^2 - lam^-4) * [c10 + 2*c20*(I1-3) + 3*c30*(I1-3)^2]
/// with I1 = 2*lam^2 + lam^-4. This is the elastic term of the membrane
/// motion balance and exactly half the equibiaxial Cauchy stress difference
/// sigma1 - sigma3. Zero at lam = 1.
[[nodiscard]] double equibiaxial_elastic_term(const YeohCoefficients& c,
                                              double lam);

/// In-plane Cauchy stress sigma1 = sigma2 for the equibiaxial incompressible
/// state, with the pressure eliminated through a prescribed through-thickness
/// stress sigma3: sigma1 = sigma3 + 2*equibiaxial_elastic_term(lam).
[[nodiscard]] double cauchy_stress_equibiaxial(const YeohCoefficients& c,
                                               double lam, double sigma3);

}  // namespace deg
