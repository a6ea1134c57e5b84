#include "deg/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "deg/circuit.hpp"
#include "deg/cycle.hpp"
#include "deg/dynamics.hpp"
#include "deg/errors.hpp"
#include "deg/failure.hpp"
#include "deg/fitting.hpp"
#include "deg/optimizer.hpp"
#include "deg/report.hpp"
#include "deg/version.hpp"
#include "json.hpp"

namespace deg {
namespace {

FileStamp make_stamp(const RunConfig& rc) {
  return {kToolVersion, rc.config_hash, rc.seed};
}

void require_block(bool present, const std::string& name) {
  if (!present)
    throw ConfigError("cli", "config has no \"" + name + "\" block",
                      {"the " + name + " subcommand needs a \"" + name +
                       "\" object in the config"});
}

void write_summary(const std::filesystem::path& out_dir, const FileStamp& st,
                   const std::string& subcommand,
                   const std::vector<std::string>& lines) {
  OutputFile f(out_dir / "run_summary.txt", st);
  f.line("subcommand: " + subcommand);
  for (const auto& l : lines) f.line(l);
}

void cmd_cycle(const RunConfig& rc, const std::filesystem::path& out_dir) {
  require_block(rc.cycle.has_value(), "cycle");
  const FileStamp st = make_stamp(rc);
  const CycleResult r = run_quasistatic_cycle(rc.material, rc.geometry,
                                              rc.cycle->spec, rc.breakdown);

  OutputFile rep(out_dir / "cycle_report.txt", st);
  rep.line("lam_max: " + format_double(r.lam_max));
  rep.line("lam_min: " + format_double(r.lam_min));
  rep.line("c_max_f: " + format_double(r.c_max));
  rep.line("c_min_f: " + format_double(r.c_min));
  rep.line("v_max_v: " + format_double(r.v_max));
  rep.line("v_min_v: " + format_double(r.v_min));
  rep.line("produced_j: " + format_double(r.produced));
  rep.line("conduction_loss_j: " + format_double(r.conduction_loss));
  rep.line("net_j: " + format_double(r.net));
  rep.line("energy_density_j_per_kg: " + format_double(r.energy_density));
  if (rc.cycle->measured) {
    const auto& m = *rc.cycle->measured;
    rep.line("produced_from_measured_capacitances_j: " +
             format_double(produced_energy(m.c_max, m.c_min, m.v, m.v)));
  }
  rep.line("");
  rep.line("phase  lam  thickness_m  capacitance_f  voltage_v  e_field_v_per_m");
  for (const auto& p : r.phases)
    rep.line(p.label + "  " + format_double(p.lam) + "  " +
             format_double(p.thickness) + "  " +
             format_double(p.capacitance) + "  " + format_double(p.voltage) +
             "  " + format_double(p.e_field));

  OutputFile csv(out_dir / "cycle_phases.csv", st);
  csv.line("phase,lam,thickness_m,capacitance_f,voltage_v,e_field_v_per_m");
  for (const auto& p : r.phases)
    csv.row({p.label, format_double(p.lam), format_double(p.thickness),
             format_double(p.capacitance), format_double(p.voltage),
             format_double(p.e_field)});

  std::vector<std::string> summary{
      "produced_j: " + format_double(r.produced),
      "conduction_loss_j: " + format_double(r.conduction_loss),
      "net_j: " + format_double(r.net),
      "energy_density_j_per_kg: " + format_double(r.energy_density)};
  if (rc.cycle->measured) {
    const auto& m = *rc.cycle->measured;
    summary.push_back("produced_from_measured_capacitances_j: " +
                      format_double(produced_energy(m.c_max, m.c_min, m.v,
                                                    m.v)));
  }
  write_summary(out_dir, st, "cycle", summary);
}

void cmd_envelope(const RunConfig& rc, const std::filesystem::path& out_dir) {
  require_block(rc.envelope.has_value(), "envelope");
  const FileStamp st = make_stamp(rc);
  const auto& ec = *rc.envelope;
  const OperatingEnvelope env = envelope_grid(rc.material, rc.geometry,
                                              ec.ranges, ec.nx, ec.ny,
                                              rc.breakdown);

  OutputFile cells(out_dir / "envelope_cells.csv", st);
  cells.line("lam_p,lam_act,verdict,limiting_field_v_per_m");
  for (const auto& c : env.cells)
    cells.row({format_double(c.lam_p), format_double(c.lam_act),
               std::string(to_string(c.verdict)),
               format_double(c.limiting_field)});

  OutputFile mech(out_dir / "envelope_mechanical_boundary.csv", st);
  mech.line("lam_p,lam_act");
  for (const auto& b : env.mechanical_boundary)
    mech.row({format_double(b.lam_p), format_double(b.lam_act)});

  OutputFile bd(out_dir / "envelope_breakdown_boundary.csv", st);
  bd.line("lam_p,lam_act");
  for (const auto& b : env.breakdown_boundary)
    bd.row({format_double(b.lam_p), format_double(b.lam_act)});

  std::size_t feasible = 0, yield = 0, breakdown = 0, pull_in = 0;
  for (const auto& c : env.cells) switch (c.verdict) {
      case Verdict::feasible: ++feasible; break;
      case Verdict::yield: ++yield; break;
      case Verdict::breakdown: ++breakdown; break;
      case Verdict::pull_in: ++pull_in; break;
    }
  write_summary(out_dir, st, "envelope",
                {"cells: " + std::to_string(env.cells.size()),
                 "feasible: " + std::to_string(feasible),
                 "yield: " + std::to_string(yield),
                 "breakdown: " + std::to_string(breakdown),
                 "pull_in: " + std::to_string(pull_in)});
}

void cmd_dynamics(const RunConfig& rc, const std::filesystem::path& out_dir) {
  require_block(rc.dynamics.has_value(), "dynamics");
  const FileStamp st = make_stamp(rc);
  const Trajectory traj =
      rc.dynamics->auto_step
          ? integrate_with_halving(rc.material, rc.geometry, rc.dynamics->dyn)
          : integrate(rc.material, rc.geometry, rc.dynamics->dyn);

  std::vector<std::string> extra{
      "scheme: " + traj.scheme, "dt_s: " + format_double(traj.dt),
      std::string("aborted: ") + (traj.aborted ? "true" : "false")};
  if (traj.aborted) extra.push_back("abort_reason: " + traj.abort_reason);
  OutputFile csv(out_dir / "trajectory.csv", st, extra);
  csv.line("t_s,lambda,lambda_dot");
  for (const auto& s : traj.samples)
    csv.row({format_double(s.t), format_double(s.lam),
             format_double(s.lam_dot)});

  write_summary(out_dir, st, "dynamics",
                {"samples: " + std::to_string(traj.samples.size()),
                 "dt_s: " + format_double(traj.dt),
                 std::string("aborted: ") + (traj.aborted ? "true" : "false"),
                 "final_lambda: " +
                     format_double(traj.samples.back().lam)});
}

void cmd_circuit(const RunConfig& rc, const std::filesystem::path& out_dir) {
  require_block(rc.circuit.has_value(), "circuit");
  const FileStamp st = make_stamp(rc);
  CircuitParams params = rc.circuit->params;
  params.seed = rc.seed;  // the run seed drives the measurement noise
  const Trace trace =
      simulate_trace(params, rc.circuit->profile, rc.circuit->t_end,
                     rc.circuit->dt, rc.circuit->check_refinement);

  OutputFile csv(out_dir / "trace.csv", st,
                 {std::string("refinement_required: ") +
                  (trace.refinement_required ? "true" : "false")});
  csv.line("t_s,v_active_v,i_shunt_a");
  for (const auto& s : trace.samples)
    csv.row({format_double(s.t), format_double(s.v_active),
             format_double(s.i_shunt)});

  std::vector<std::string> summary{
      "samples: " + std::to_string(trace.samples.size()),
      std::string("refinement_required: ") +
          (trace.refinement_required ? "true" : "false")};

  if (!rc.circuit->windows.empty()) {
    OutputFile est(out_dir / "capacitance_estimates.csv", st);
    est.line("t0_s,t1_s,v_known_v,capacitance_f,rms_residual,n_samples");
    std::vector<CapacitanceEstimate> estimates;
    bool same_level = true;
    for (const auto& w : rc.circuit->windows) {
      const double r_p = rc.circuit->profile.r_p.at(0.5 * (w.t0 + w.t1));
      const CapacitanceEstimate ce = estimate_capacitance(
          trace, w.t0, w.t1, w.v_known, r_p, params.r_mes);
      estimates.push_back(ce);
      est.row({format_double(w.t0), format_double(w.t1),
               format_double(w.v_known), format_double(ce.capacitance),
               format_double(ce.rms_residual),
               std::to_string(ce.n_samples)});
      if (w.v_known != rc.circuit->windows.front().v_known) same_level = false;
    }
    if (estimates.size() >= 2 && same_level) {
      double c_max = estimates.front().capacitance;
      double c_min = estimates.front().capacitance;
      for (const auto& ce : estimates) {
        c_max = std::max(c_max, ce.capacitance);
        c_min = std::min(c_min, ce.capacitance);
      }
      const double v = std::abs(rc.circuit->windows.front().v_known);
      summary.push_back("scavenged_from_trace_j: " +
                        format_double(scavenged_from_trace(c_max, c_min, v)));
    }
  }
  write_summary(out_dir, st, "circuit", summary);
}

void cmd_sweep(const RunConfig& rc, const std::filesystem::path& out_dir,
               int threads) {
  require_block(rc.sweep.has_value(), "sweep");
  const FileStamp st = make_stamp(rc);
  SweepOptions opt = *rc.sweep;
  opt.threads = threads;
  const SweepResult res =
      sweep_prestrain(rc.material, rc.geometry, opt, rc.breakdown);

  OutputFile csv(out_dir / "sweep.csv", st);
  csv.line("lam_p,lam_act,e_field_v_per_m,net_j,produced_j,loss_j,"
           "limiting_criterion");
  for (const auto& row : res.rows)
    csv.row({format_double(row.design.lam_p), format_double(row.design.lam_act),
             format_double(row.design.e_field), format_double(row.net),
             format_double(row.produced), format_double(row.loss),
             std::string(to_string(row.limiting))});

  const SweepRow& best = res.rows[res.best];
  write_summary(out_dir, st, "sweep",
                {"rows: " + std::to_string(res.rows.size()),
                 "best_index: " + std::to_string(res.best),
                 "best_lam_p: " + format_double(best.design.lam_p),
                 "best_net_j: " + format_double(best.net)});
}

void cmd_optimize(const RunConfig& rc, const std::filesystem::path& out_dir,
                  int threads) {
  require_block(rc.optimize.has_value(), "optimize");
  const FileStamp st = make_stamp(rc);
  OptimizeOptions opt = *rc.optimize;
  opt.threads = threads;
  const OptimizeResult res =
      maximize_energy(rc.material, rc.geometry, opt, rc.breakdown);

  OutputFile rep(out_dir / "optimize_result.txt", st);
  rep.line("best_lam_p: " + format_double(res.best.lam_p));
  rep.line("best_lam_act: " + format_double(res.best.lam_act));
  rep.line("best_e_field_v_per_m: " + format_double(res.best.e_field));
  rep.line("net_j: " + format_double(res.ledger.net));
  rep.line("produced_j: " + format_double(res.ledger.produced));
  rep.line("conduction_loss_j: " + format_double(res.ledger.conduction_loss));
  rep.line("energy_density_j_per_kg: " +
           format_double(res.ledger.energy_density));
  rep.line("evaluated: " + std::to_string(res.evaluated));
  rep.line("feasible: " + std::to_string(res.feasible_count));
  rep.line("rejected_yield: " + std::to_string(res.rejected_yield));
  rep.line("rejected_breakdown: " + std::to_string(res.rejected_breakdown));
  rep.line("rejected_pull_in: " + std::to_string(res.rejected_pull_in));

  write_summary(out_dir, st, "optimize",
                {"best_lam_p: " + format_double(res.best.lam_p),
                 "best_lam_act: " + format_double(res.best.lam_act),
                 "best_e_field_v_per_m: " + format_double(res.best.e_field),
                 "net_j: " + format_double(res.ledger.net)});
}

void cmd_fit(const RunConfig& rc, const std::filesystem::path& out_dir) {
  require_block(rc.fit.has_value(), "fit");
  const FileStamp st = make_stamp(rc);
  const TestCurve curve = read_curve_csv(rc.fit->input_csv);
  MaterialParams fitted = rc.material;

  OutputFile rep(out_dir / "fit_report.txt", st);
  if (curve.kind == CurveKind::tensile) {
    const YeohFit yf = fit_yeoh(curve, rc.fit->mode);
    fitted.yeoh0 = yf.coefficients;
    rep.line("kind: tensile");
    rep.line(std::string("mode: ") +
             (rc.fit->mode == FitMode::equibiaxial ? "equibiaxial"
                                                   : "uniaxial"));
    rep.line("c10_pa: " + format_double(yf.coefficients.c10));
    rep.line("c20_pa: " + format_double(yf.coefficients.c20));
    rep.line("c30_pa: " + format_double(yf.coefficients.c30));
    rep.line("residual_norm: " + format_double(yf.report.residual_norm));
    rep.line("relative_residual: " +
             format_double(yf.report.relative_residual));
    rep.line("n_points: " + std::to_string(yf.report.n_points));
  } else {
    const PronyFit pf = fit_prony(curve, rc.fit->n_terms);
    fitted.prony = pf.terms;
    rep.line("kind: relaxation");
    rep.line("n_terms: " + std::to_string(rc.fit->n_terms));
    for (std::size_t i = 0; i < pf.terms.size(); ++i) {
      rep.line("g" + std::to_string(i + 1) + ": " +
               format_double(pf.terms[i].g));
      rep.line("tau" + std::to_string(i + 1) + "_s: " +
               format_double(pf.terms[i].tau));
    }
    rep.line("residual_norm: " + format_double(pf.report.residual_norm));
    rep.line("relative_residual: " +
             format_double(pf.report.relative_residual));
    rep.line(std::string("constraint_projected: ") +
             (pf.report.constraint_projected ? "true" : "false"));
    rep.line("n_points: " + std::to_string(pf.report.n_points));
  }

  std::string warning;
  try {
    validate(fitted);
  } catch (const ConfigError& e) {
    warning = "fitted parameters fail material validation: ";
    warning += e.details().empty() ? e.what() : e.details().front();
    rep.line("warning: " + warning);
  }

  const std::string stamp_comment =
      "tool_version: " + std::string(kToolVersion) +
      "\nconfig_hash: " + st.config_hash +
      "\nseed: " + std::to_string(st.seed);
  write_material_file(out_dir / rc.fit->output_material, fitted,
                      stamp_comment);

  std::vector<std::string> summary{"output_material: " +
                                   rc.fit->output_material};
  if (!warning.empty()) summary.push_back("warning: " + warning);
  write_summary(out_dir, st, "fit", summary);
}

}  // namespace

void run_command(const std::string& subcommand, const RunConfig& config,
                 const std::filesystem::path& out_dir, int threads) {
  std::filesystem::create_directories(out_dir);
  if (subcommand == "cycle")
    cmd_cycle(config, out_dir);
  else if (subcommand == "envelope")
    cmd_envelope(config, out_dir);
  else if (subcommand == "dynamics")
    cmd_dynamics(config, out_dir);
  else if (subcommand == "circuit")
    cmd_circuit(config, out_dir);
  else if (subcommand == "sweep")
    cmd_sweep(config, out_dir, threads);
  else if (subcommand == "optimize")
    cmd_optimize(config, out_dir, threads);
  else if (subcommand == "fit")
    cmd_fit(config, out_dir);
  else
    throw ConfigError("cli", "unknown subcommand \"" + subcommand + "\"",
                      {"expected one of: cycle, envelope, dynamics, circuit, "
                       "sweep, optimize, fit"});
}

int run_command_guarded(const std::string& subcommand,
                        const std::filesystem::path& config_path,
                        const std::filesystem::path& out_dir,
                        std::uint64_t seed_override, bool has_seed_override,
                        int threads) {
  std::string config_hash;
  std::uint64_t seed = 0;
  bool have_stamp = false;

  const auto report_error = [&](const Error& e, int code,
                                const std::vector<std::string>& details,
                                const std::string& criterion) {
    std::cerr << "error [" << e.module() << "]: " << e.what() << '\n';
    for (const auto& d : details) std::cerr << "  - " << d << '\n';
    try {
      std::filesystem::create_directories(out_dir);
      nlohmann::json j;
      j["module"] = e.module();
      j["cause"] = e.what();
      j["details"] = details;
      if (!criterion.empty()) j["criterion"] = criterion;
      j["exit_code"] = code;
      j["tool_version"] = std::string(kToolVersion);
      if (have_stamp) {
        j["config_hash"] = config_hash;
        j["seed"] = seed;
      }
      std::ofstream out(out_dir / "error_report.json", std::ios::binary);
      out << j.dump(2) << '\n';
    } catch (...) {
      // the error report is best-effort; the exit code still signals failure
    }
    return code;
  };

  try {
    RunConfig rc = parse_run_config(config_path);
    if (has_seed_override) rc.seed = seed_override;
    config_hash = rc.config_hash;
    seed = rc.seed;
    have_stamp = true;
    run_command(subcommand, rc, out_dir, threads);
    return kExitOk;
  } catch (const ConfigError& e) {
    return report_error(e, kExitConfigError, e.details(), {});
  } catch (const InfeasibleDesign& e) {
    return report_error(e, kExitInfeasible, {}, e.criterion());
  } catch (const Error& e) {
    return report_error(e, kExitNumericalError, {}, {});
  }
}

}  // namespace deg
