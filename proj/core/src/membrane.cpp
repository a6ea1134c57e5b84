#include "deg/membrane.hpp"

#include <string>
#include <vector>

#include "deg/errors.hpp"
#include "deg/material.hpp"

namespace deg {

void validate(const MembraneGeometry& geom) {
  std::vector<std::string> problems;
  if (!(geom.x10 > 0.0)) problems.emplace_back("x10_m must be > 0");
  if (!(geom.x20 > 0.0)) problems.emplace_back("x20_m must be > 0");
  if (!(geom.x30 > 0.0)) problems.emplace_back("x30_m must be > 0");
  if (geom.mass < 0.0) problems.emplace_back("mass_kg must be >= 0");
  if (!problems.empty())
    throw ConfigError("membrane", "invalid geometry", problems);
}

StretchState StretchState::from(double lam_p, double lam_act) {
  if (!(lam_p >= 1.0) || !(lam_act >= 1.0))
    throw DomainError("membrane",
                      "generator operation requires lam_p >= 1 and "
                      "lam_act >= 1");
  return {lam_p, lam_act, lam_p * lam_act};
}

double maxwell_stress(double rel_permittivity, double e_field) {
  if (e_field < 0.0)
    throw DomainError("membrane", "field magnitude must be non-negative");
  if (!(rel_permittivity >= 1.0))
    throw DomainError("membrane", "rel_permittivity must be >= 1");
  return kVacuumPermittivity * rel_permittivity * e_field * e_field;
}

double thickness_at(const MembraneGeometry& geom, double lam_total) {
  if (!(lam_total > 0.0))
    throw DomainError("membrane", "stretch must be positive");
  return geom.x30 / (lam_total * lam_total);
}

double stretched_area(const MembraneGeometry& geom, double lam_total) {
  if (!(lam_total > 0.0))
    throw DomainError("membrane", "stretch must be positive");
  return geom.x10 * geom.x20 * lam_total * lam_total;
}

double capacitance(const MembraneGeometry& geom, double rel_permittivity,
                   double lam_total) {
  if (!(lam_total > 0.0))
    throw DomainError("membrane", "stretch must be positive");
  if (!(rel_permittivity >= 1.0))
    throw DomainError("membrane", "rel_permittivity must be >= 1");
  const double lam2 = lam_total * lam_total;
  return kVacuumPermittivity * rel_permittivity * geom.x10 * geom.x20 * lam2 *
         lam2 / geom.x30;
}

double leakage_resistance(const MembraneGeometry& geom,
                          double bulk_resistivity, double lam_total) {
  if (!(bulk_resistivity > 0.0))
    throw DomainError("membrane", "bulk resistivity must be positive");
  if (!(lam_total > 0.0))
    throw DomainError("membrane", "stretch must be positive");
  const double lam2 = lam_total * lam_total;
  return bulk_resistivity * geom.x30 / (geom.x10 * geom.x20 * lam2 * lam2);
}

double field_from_voltage(double voltage, double thickness) {
  if (!(thickness > 0.0))
    throw DomainError("membrane", "thickness must be positive");
  return voltage / thickness;
}

}  // namespace deg
