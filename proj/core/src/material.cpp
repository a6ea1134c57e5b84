#include "deg/material.hpp"

#include <cmath>
#include <string>

#include "deg/errors.hpp"

namespace deg {
namespace {

void require_finite(double v, const char* name,
                    std::vector<std::string>& problems) {
  if (!std::isfinite(v))
    problems.push_back(std::string(name) + " must be finite");
}

}  // namespace

void validate(const MaterialParams& mat) {
  std::vector<std::string> problems;
  require_finite(mat.yeoh0.c10, "c10_pa", problems);
  require_finite(mat.yeoh0.c20, "c20_pa", problems);
  require_finite(mat.yeoh0.c30, "c30_pa", problems);
  if (!(mat.yeoh0.c10 > 0.0)) problems.emplace_back("c10_pa must be > 0");
  double g_sum = 0.0;
  for (std::size_t k = 0; k < mat.prony.size(); ++k) {
    const auto& term = mat.prony[k];
    const std::string where = "prony[" + std::to_string(k) + "]";
    if (!(term.g >= 0.0 && term.g < 1.0))
      problems.push_back(where + ".g must be in [0, 1)");
    if (!(term.tau > 0.0)) problems.push_back(where + ".tau_s must be > 0");
    g_sum += term.g;
  }
  if (!(g_sum < 1.0))
    problems.emplace_back("sum of prony g must be < 1 (long-term modulus)");
  if (!(mat.rel_permittivity >= 1.0))
    problems.emplace_back("rel_permittivity must be >= 1");
  if (!(mat.density > 0.0)) problems.emplace_back("density_kg_m3 must be > 0");
  if (!(mat.bulk_resistivity > 0.0))
    problems.emplace_back("bulk_resistivity_ohm_m must be > 0");
  if (!(mat.max_area_expansion > 1.0))
    problems.emplace_back("max_area_expansion must be > 1");
  if (!problems.empty())
    throw ConfigError("material", "invalid material parameters", problems);
}

double first_invariant(double l1, double l2, double l3) {
  if (!(l1 > 0.0) || !(l2 > 0.0) || !(l3 > 0.0))
    throw DomainError("material", "stretches must be positive");
  return l1 * l1 + l2 * l2 + l3 * l3;
}

std::array<double, 3> equibiaxial_stretches(double lam) {
  if (!(lam > 0.0))
    throw DomainError("material", "stretch must be positive");
  return {lam, lam, 1.0 / (lam * lam)};
}

double relaxation_factor(const MaterialParams& mat, double t) {
  if (t < 0.0)
    throw DomainError("material", "relaxation time must be non-negative");
  double decayed = 0.0;
  for (const auto& term : mat.prony)
    decayed += term.g * (1.0 - std::exp(-t / term.tau));
  return 1.0 - decayed;
}

YeohCoefficients relaxed_coefficients(const MaterialParams& mat, double t) {
  const double s = relaxation_factor(mat, t);
  return {mat.yeoh0.c10 * s, mat.yeoh0.c20 * s, mat.yeoh0.c30 * s};
}

double strain_energy(const YeohCoefficients& c, double i1) {
  if (i1 < 3.0)
    throw DomainError("material",
                      "first invariant below 3 is unreachable for an "
                      "incompressible state");
  const double u = i1 - 3.0;
  return ((c.c30 * u + c.c20) * u + c.c10) * u;
}

double strain_energy_derivative(const YeohCoefficients& c, double i1) {
  const double u = i1 - 3.0;
  return (3.0 * c.c30 * u + 2.0 * c.c20) * u + c.c10;
}

double equibiaxial_elastic_term(const YeohCoefficients& c, double lam) {
  if (!(lam > 0.0))
    throw DomainError("material", "stretch must be positive");
  const double lam2 = lam * lam;
  const double lam4i = 1.0 / (lam2 * lam2);
  const double i1 = 2.0 * lam2 + lam4i;
  return (lam2 - lam4i) * strain_energy_derivative(c, i1);
}

double cauchy_stress_equibiaxial(const YeohCoefficients& c, double lam,
                                 double sigma3) {
  return sigma3 + 2.0 * equibiaxial_elastic_term(c, lam);
}

}  // namespace deg
