#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "deg/circuit.hpp"
#include "deg/cycle.hpp"
#include "deg/dynamics.hpp"
#include "deg/failure.hpp"
#include "deg/fitting.hpp"
#include "deg/material.hpp"
#include "deg/membrane.hpp"
#include "deg/optimizer.hpp"

namespace deg {

/// Capacitance endpoints measured on a rig, for the report's side-by-side
/// energy reading.
struct MeasuredCapacitances {
  double c_max = 0.0;
  double c_min = 0.0;
  double v = 0.0;
};

struct CycleConfig {
  CycleSpec spec;
  std::optional<MeasuredCapacitances> measured;
};

struct EnvelopeConfig {
  EnvelopeRanges ranges;
  int nx = 51;
  int ny = 51;
};

struct DynamicsRunConfig {
  DynamicsConfig dyn;
  bool auto_step = false;  ///< apply the step-halving acceptance rule
};

struct EstimationWindow {
  double t0 = 0.0;
  double t1 = 0.0;
  double v_known = 0.0;
};

struct CircuitConfig {
  CircuitParams params;
  CapacitorProfile profile;
  double t_end = 1.0;
  double dt = 1e-5;
  bool check_refinement = true;
  std::vector<EstimationWindow> windows;
};

struct FitConfig {
  std::filesystem::path input_csv;
  FitMode mode = FitMode::equibiaxial;
  int n_terms = 2;
  std::string output_material = "fitted_material.json";
};

/// Everything a run needs, resolved and validated. The material always comes
/// from its own file so fitted parameter sets round-trip through the same
/// format.
struct RunConfig {
  std::filesystem::path config_path;
  std::string config_hash;  ///< fnv1a64 of the config file bytes, hex
  std::filesystem::path material_path;
  MaterialParams material;
  MembraneGeometry geometry;
  BreakdownLaw breakdown;
  std::optional<CycleConfig> cycle;
  std::optional<EnvelopeConfig> envelope;
  std::optional<DynamicsRunConfig> dynamics;
  std::optional<CircuitConfig> circuit;
  std::optional<SweepOptions> sweep;
  std::optional<OptimizeOptions> optimize;
  std::optional<FitConfig> fit;
  std::uint64_t seed = 0;
};

/// Parses and validates a full run config. Collects every problem (unknown
/// keys, missing or non-physical values, missing referenced files) and throws
/// a single ConfigError listing all of them.
[[nodiscard]] RunConfig parse_run_config(const std::filesystem::path& path);

/// Reads a material parameter file (keys: c10_pa, c20_pa, c30_pa, prony
/// [{g, tau_s}], rel_permittivity, density_kg_m3, bulk_resistivity_ohm_m,
/// max_area_expansion).
[[nodiscard]] MaterialParams parse_material_file(
    const std::filesystem::path& path);

/// Writes a material parameter file in the same format (round-trippable).
void write_material_file(const std::filesystem::path& path,
                         const MaterialParams& mat,
                         const std::string& comment = {});

/// Reads a two-column test-curve CSV whose header names the kind:
/// "lambda,nominal_stress_pa" or "time_s,normalized_stress".
[[nodiscard]] TestCurve read_curve_csv(const std::filesystem::path& path);

}  // namespace deg
