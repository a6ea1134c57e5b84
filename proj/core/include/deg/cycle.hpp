#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "deg/failure.hpp"
#include "deg/material.hpp"
#include "deg/membrane.hpp"

namespace deg {

/// Electrical boundary condition during the active (relaxation) phase.
enum class CycleMode { constant_voltage, constant_charge };

/// How the actuation stretch is reached in phase 1->2: by an external
/// mechanical load to the prescribed lam_act, or electrically, with lam_act
/// solved from the static balance under the stretch voltage.
enum class StretchDrive { mechanical, electrical };

/// Five-phase scavenging cycle:
///   0->1 pre-strain to lam_p (frame),
///   1->2 stretch to lam_max (mechanical load or stretch voltage),
///   2->3 poling: the active area is brought to the poling voltage at
///        maximal stretch (under the electrical drive this is the step from
///        the stretch voltage down to the poling voltage),
///   3->4 active phase: release; the membrane relaxes against the electric
///        load until equilibrium, pushing charge at high potential,
///   4->1 disconnect and return to the pre-strained dimensions.
struct CycleSpec {
  DesignPoint design;  ///< lam_act is solved + overwritten for electrical drive
  CycleMode mode = CycleMode::constant_voltage;
  StretchDrive drive = StretchDrive::mechanical;
  double poling_voltage = 0.0;   ///< [V]; >= 0
  double stretch_voltage = 0.0;  ///< [V]; electrical drive only; 0 -> poling
  /// Durations [s] of phases 0->1, 1->2, 2->3, 3->4, 4->1.
  std::array<double, 5> phase_durations{1.0, 1.0, 1.0, 1.0, 1.0};
  bool include_viscoelasticity = false;
  bool include_conduction_loss = true;
};

/// Membrane state at a phase boundary, for reporting.
struct PhaseState {
  std::string label;
  double lam = 1.0;
  double thickness = 0.0;
  double capacitance = 0.0;
  double voltage = 0.0;
  double e_field = 0.0;
};

/// Energy ledger of one cycle. produced - conduction_loss - net == 0 exactly
/// (net is computed as the difference, never independently).
struct CycleResult {
  double lam_max = 1.0;
  double lam_min = 1.0;
  double c_max = 0.0;
  double c_min = 0.0;
  double v_max = 0.0;
  double v_min = 0.0;
  double produced = 0.0;         ///< [J]
  double conduction_loss = 0.0;  ///< [J]
  double net = 0.0;              ///< [J]
  double energy_density = 0.0;   ///< [J/kg]; NaN when mass is zero
  std::vector<PhaseState> phases;
};

/// Electrical energy gained over a capacitance swing. With equal voltage
/// levels this is the constant-voltage reading 0.5*(c_max - c_min)*V^2;
/// otherwise the constant-charge reading 0.5*Q*(v_max - v_min) with
/// Q = c_max*v_min (charge placed at maximal capacitance and low voltage).
[[nodiscard]] double produced_energy(double c_max, double c_min, double v_max,
                                     double v_min);

/// Literal two-state form 0.5*(c_max*v_min^2 - c_min*v_max^2), kept for
/// traceability against the constant-voltage reading (to which it reduces at
/// equal levels). Sign-fragile for unequal levels; prefer produced_energy.
[[nodiscard]] double produced_energy_printed_form(double c_max, double c_min,
                                                  double v_max, double v_min);

/// Joule loss sum_i v_i^2/r_i * dt_i over piecewise-constant segments.
/// Mismatched lengths throw ConfigError; non-positive resistance throws
/// DomainError.
[[nodiscard]] double conduction_loss(std::span<const double> voltages,
                                     std::span<const double> leakage_resistances,
                                     std::span<const double> durations);

/// net [J] per mass [kg]; non-positive mass throws DomainError.
[[nodiscard]] double energy_density(double net, double mass);

/// Quasi-static cycle evaluation.
///
/// Stretch equilibria use the pre-stress-offset static balance: the elastic
/// stress is measured relative to the pre-strained state (the frame carries
/// the pre-strain stress), so the electric load works only against the
/// incremental stiffness. The membrane never leaves [lam_p, lam_max]: the
/// frame floors it at lam_p and the release mechanism only moves inward.
/// With viscoelasticity enabled, each phase's equilibrium uses coefficients
/// relaxed for that phase's duration (the relaxation clock restarts at each
/// load application).
///
/// Throws InfeasibleDesign when the design violates a failure criterion, the
/// poling or stretch voltage exceeds the breakdown law (under the reciprocal
/// law that comparison is thickness-independent: V > k_bd), or the electrical
/// stretch has no stable equilibrium below the yield limit.
[[nodiscard]] CycleResult run_quasistatic_cycle(const MaterialParams& mat,
                                                const MembraneGeometry& geom,
                                                const CycleSpec& spec,
                                                const BreakdownLaw& law);

}  // namespace deg
