#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#ifdef DEG_TOOL_PATH
#include <sys/wait.h>
#endif

#include "deg/cli.hpp"
#include "deg/config.hpp"
#include "deg/cycle.hpp"
#include "deg/errors.hpp"
#include "deg/version.hpp"
#include "doctest.h"
#include "json.hpp"
#include "test_support.hpp"

using namespace deg;

namespace {

std::filesystem::path configs_dir() {
  return std::filesystem::path(DEG_CONFIG_DIR);
}

const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names = {
      "cycle_electrical_4kv.json", "envelope_default.json",
      "dynamics_release.json",     "circuit_step_measure.json",
      "sweep_prestrain.json",      "optimize_box.json",
      "fit_tensile_equibiaxial.json", "fit_relaxation.json"};
  return names;
}

bool any_detail_contains(const ConfigError& e, const std::string& needle) {
  return std::any_of(e.details().begin(), e.details().end(),
                     [&](const std::string& d) {
                       return d.find(needle) != std::string::npos;
                     });
}

/// Value of a "key: value" line in a stamped text artifact.
double value_of(const std::string& text, const std::string& key) {
  const auto pos = text.find(key + ": ");
  REQUIRE(pos != std::string::npos);
  return std::stod(text.substr(pos + key.size() + 2));
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("every shipped example config parses") {
  std::set<std::string> hashes;
  for (const auto& name : fixture_names()) {
    CAPTURE(name);
    const RunConfig rc = parse_run_config(configs_dir() / name);
    CHECK(rc.config_hash.size() == 16);
    for (char c : rc.config_hash)
      CHECK(((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f')));
    hashes.insert(rc.config_hash);
    CHECK(rc.material.yeoh0.c10 == 1.8e4);
    CHECK(rc.material.prony.size() == 2);
  }
  CHECK(hashes.size() == fixture_names().size());  // fingerprints differ
}

TEST_CASE("the electrical-drive example resolves every field") {
  const RunConfig rc =
      parse_run_config(configs_dir() / "cycle_electrical_4kv.json");
  REQUIRE(rc.cycle.has_value());
  CHECK(rc.cycle->spec.design.lam_p == 4.0);
  CHECK(rc.cycle->spec.drive == StretchDrive::electrical);
  CHECK(rc.cycle->spec.mode == CycleMode::constant_voltage);
  CHECK(rc.cycle->spec.stretch_voltage == 4000.0);
  CHECK(rc.cycle->spec.poling_voltage == 2000.0);
  CHECK(rc.cycle->spec.phase_durations[1] == 30.0);
  REQUIRE(rc.cycle->measured.has_value());
  CHECK(rc.cycle->measured->c_max == 80.2e-12);
  CHECK(rc.cycle->measured->c_min == 66.2e-12);
  CHECK(rc.cycle->measured->v == 2000.0);
  CHECK(rc.seed == 42);
  CHECK(rc.breakdown.k_bd == 8e3);
  CHECK(rc.geometry.x30 == 1e-3);
  CHECK(rc.geometry.mass == doctest::Approx(6e-6).epsilon(1e-12));
}

TEST_CASE("the circuit example resolves profiles and windows") {
  const RunConfig rc =
      parse_run_config(configs_dir() / "circuit_step_measure.json");
  REQUIRE(rc.circuit.has_value());
  CHECK(rc.circuit->params.r_e == 1e6);
  CHECK(rc.circuit->params.noise_std == 2e-8);
  CHECK(rc.circuit->profile.c_p.knots.size() == 4);
  CHECK(rc.circuit->check_refinement);
  REQUIRE(rc.circuit->windows.size() == 2);
  CHECK(rc.circuit->windows[0].v_known == 2000.0);
  CHECK(rc.circuit->windows[1].v_known == 2000.0);
}

TEST_CASE("config problems are collected into one report") {
  const auto dir = test::fresh_out_dir("badcfg");
  test::spit(dir / "broken.json", R"({
  "material_file": "does_not_exist.json",
  "bogus_top": 1,
  "geometry": {"x10_m": 2.5e-3, "x20_m": 2.5e-3, "x30_m": -1.0, "wat": 2},
  "cycle": {
    "lam_p": 4.0,
    "poling_voltage_v": 2000.0,
    "constant_voltage": true,
    "constant_charge": true,
    "mystery": 7
  }
})");
  try {
    (void)parse_run_config(dir / "broken.json");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.module() == "config");
    CHECK(e.details().size() >= 5);
    CHECK(any_detail_contains(e, "does_not_exist"));
    CHECK(any_detail_contains(e, "x30_m"));
    CHECK(any_detail_contains(e, "exclusive"));
    CHECK(any_detail_contains(e, "bogus_top"));
    CHECK(any_detail_contains(e, "wat"));
    CHECK(any_detail_contains(e, "mystery"));
  }
}

TEST_CASE("material files round-trip bit-exactly") {
  const auto dir = test::fresh_out_dir("matrt");
  const MaterialParams mat = test::reference_material();
  write_material_file(dir / "m.json", mat, "first line\nsecond line");
  const MaterialParams back = parse_material_file(dir / "m.json");
  CHECK(back.yeoh0.c10 == mat.yeoh0.c10);
  CHECK(back.yeoh0.c20 == mat.yeoh0.c20);
  CHECK(back.yeoh0.c30 == mat.yeoh0.c30);
  REQUIRE(back.prony.size() == mat.prony.size());
  for (std::size_t i = 0; i < mat.prony.size(); ++i) {
    CHECK(back.prony[i].g == mat.prony[i].g);
    CHECK(back.prony[i].tau == mat.prony[i].tau);
  }
  CHECK(back.rel_permittivity == mat.rel_permittivity);
  CHECK(back.density == mat.density);
  CHECK(back.bulk_resistivity == mat.bulk_resistivity);
  CHECK(back.max_area_expansion == mat.max_area_expansion);

  const std::string text = test::slurp(dir / "m.json");
  CHECK(text.rfind("# first line\n# second line\n", 0) == 0);
  write_material_file(dir / "m2.json", back, "first line\nsecond line");
  CHECK(test::slurp(dir / "m2.json") == text);
}

TEST_CASE("curve files tolerate cosmetics and reject damage") {
  const auto dir = test::fresh_out_dir("curves");
  test::spit(dir / "ok.csv",
             "# a comment\n"
             "\n"
             "lambda, nominal_stress_pa\n"
             "  1.1 , 100.5\n"
             "1.5,2.0e4\n"
             "\n"
             "2.0, 3e4\n"
             "3.0, 4e4\n");
  const TestCurve curve = read_curve_csv(dir / "ok.csv");
  CHECK(curve.kind == CurveKind::tensile);
  REQUIRE(curve.points.size() == 4);
  CHECK(curve.points[0].first == 1.1);
  CHECK(curve.points[0].second == 100.5);
  CHECK(curve.points[1].second == 2.0e4);

  test::spit(dir / "bad_header.csv", "stretch,stress\n1,2\n2,3\n3,4\n4,5\n");
  CHECK_THROWS_AS((void)read_curve_csv(dir / "bad_header.csv"), ConfigError);

  test::spit(dir / "bad_cell.csv",
             "lambda,nominal_stress_pa\n1.1,abc\n1.5,2\n2.0,3\n2.5,4\n");
  try {
    (void)read_curve_csv(dir / "bad_cell.csv");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(any_detail_contains(e, "unparseable number"));
  }

  test::spit(dir / "short.csv", "lambda,nominal_stress_pa\n1.1,1\n1.5,2\n");
  CHECK_THROWS_AS((void)read_curve_csv(dir / "short.csv"), ConfigError);
  CHECK_THROWS_AS((void)read_curve_csv(dir / "missing.csv"), ConfigError);
}

TEST_CASE("cycle artifacts are stamped and byte-reproducible") {
  const RunConfig rc =
      parse_run_config(configs_dir() / "cycle_electrical_4kv.json");
  const auto out1 = test::fresh_out_dir("cycle1");
  run_command("cycle", rc, out1);

  const std::string report = test::slurp(out1 / "cycle_report.txt");
  const std::string stamp = "# tool_version: " + std::string(kToolVersion) +
                            "\n# config_hash: " + rc.config_hash +
                            "\n# seed: 42\n";
  CHECK(report.rfind(stamp, 0) == 0);
  CHECK(value_of(report, "net_j") > 0.0);
  const double measured = value_of(report, "produced_from_measured_capacitances_j");
  CHECK(std::abs(measured - 2.8e-5) / 2.8e-5 < 1e-3);

  const std::string phases = test::slurp(out1 / "cycle_phases.csv");
  CHECK(phases.find("phase,lam,thickness_m,capacitance_f,voltage_v,"
                    "e_field_v_per_m\n") != std::string::npos);
  CHECK(phases.find("prestrain,") != std::string::npos);
  CHECK(phases.find("discharge,") != std::string::npos);

  const auto out2 = test::fresh_out_dir("cycle2");
  run_command("cycle", rc, out2);
  CHECK(test::slurp(out2 / "cycle_report.txt") == report);
  CHECK(test::slurp(out2 / "cycle_phases.csv") == phases);
  CHECK(test::slurp(out2 / "run_summary.txt") ==
        test::slurp(out1 / "run_summary.txt"));
}

TEST_CASE("a seed override reaches every stamp") {
  const auto out = test::fresh_out_dir("seedover");
  const int code = run_command_guarded(
      "cycle", configs_dir() / "cycle_electrical_4kv.json", out, 99, true, 1);
  CHECK(code == kExitOk);
  CHECK(test::slurp(out / "run_summary.txt").find("# seed: 99\n") !=
        std::string::npos);
}

TEST_CASE("envelope artifacts contain the yield-boundary anchor row") {
  const RunConfig rc = parse_run_config(configs_dir() / "envelope_default.json");
  REQUIRE(rc.envelope.has_value());
  CHECK(rc.envelope->nx == 51);
  const auto out = test::fresh_out_dir("envelope");
  run_command("envelope", rc, out);
  const std::string mech = test::slurp(out / "envelope_mechanical_boundary.csv");
  CHECK(mech.find("\n4,1.5\n") != std::string::npos);
  CHECK(mech.find("\n3,2\n") != std::string::npos);
  const std::string cells = test::slurp(out / "envelope_cells.csv");
  CHECK(cells.find("lam_p,lam_act,verdict,limiting_field_v_per_m\n") !=
        std::string::npos);
  CHECK(test::slurp(out / "run_summary.txt").find("subcommand: envelope\n") !=
        std::string::npos);
}

TEST_CASE("missing blocks are config errors") {
  const RunConfig rc = parse_run_config(configs_dir() / "envelope_default.json");
  const auto out = test::fresh_out_dir("noblk");
  try {
    run_command("cycle", rc, out);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.module() == "cli");
  }
}

TEST_CASE("unknown subcommands exit with the config code and a report") {
  const auto out = test::fresh_out_dir("unknowncmd");
  const int code = run_command_guarded(
      "frobnicate", configs_dir() / "cycle_electrical_4kv.json", out, 0, false,
      1);
  CHECK(code == kExitConfigError);
  const auto j = nlohmann::json::parse(test::slurp(out / "error_report.json"));
  CHECK(j.at("module") == "cli");
  CHECK(j.at("exit_code") == kExitConfigError);
  CHECK(std::string(j.at("cause")).find("unknown subcommand") !=
        std::string::npos);
  CHECK(j.contains("config_hash"));  // parsing succeeded before the dispatch
  CHECK(j.at("tool_version") == std::string(kToolVersion));
}

TEST_CASE("infeasible designs exit with the dedicated code") {
  const auto dir = test::fresh_out_dir("infeasible");
  write_material_file(dir / "mat.json", test::reference_material());
  test::spit(dir / "run.json", R"({
  "material_file": "mat.json",
  "geometry": {"x10_m": 2.5e-3, "x20_m": 2.5e-3, "x30_m": 1e-3},
  "cycle": {
    "lam_p": 4.0,
    "lam_act": 2.0,
    "poling_voltage_v": 100.0,
    "constant_voltage": true
  }
})");
  const auto out = test::fresh_out_dir("infeasible_out");
  const int code = run_command_guarded("cycle", dir / "run.json", out, 0,
                                       false, 1);
  CHECK(code == kExitInfeasible);
  const auto j = nlohmann::json::parse(test::slurp(out / "error_report.json"));
  CHECK(j.at("criterion") == "yield");
  CHECK(j.at("module") == "cycle");
  CHECK(j.at("exit_code") == kExitInfeasible);
}

TEST_CASE("unparseable configs exit with the config code") {
  const auto dir = test::fresh_out_dir("notjson");
  test::spit(dir / "broken.json", "{ this is not json\n");
  const auto out = test::fresh_out_dir("notjson_out");
  const int code =
      run_command_guarded("cycle", dir / "broken.json", out, 0, false, 1);
  CHECK(code == kExitConfigError);
  const auto j = nlohmann::json::parse(test::slurp(out / "error_report.json"));
  CHECK(j.at("module") == "config");
  CHECK(!j.contains("config_hash"));  // parsing never finished
}

#ifdef DEG_TOOL_PATH
TEST_CASE("the command-line binary honors the same exit contract") {
  const auto out = test::fresh_out_dir("extbin");
  const std::string tool = DEG_TOOL_PATH;

  const std::string version_cmd =
      tool + " --version > " + (out / "version.txt").string() + " 2>/dev/null";
  const int vstatus = std::system(version_cmd.c_str());
  REQUIRE(WIFEXITED(vstatus));
  CHECK(WEXITSTATUS(vstatus) == 0);
  CHECK(test::slurp(out / "version.txt").find(std::string(kToolVersion)) !=
        std::string::npos);

  const std::string bogus_cmd =
      tool + " frobnicate --config " +
      (configs_dir() / "cycle_electrical_4kv.json").string() + " --out " +
      (out / "bogus").string() + " 2>/dev/null";
  const int bstatus = std::system(bogus_cmd.c_str());
  REQUIRE(WIFEXITED(bstatus));
  CHECK(WEXITSTATUS(bstatus) == kExitConfigError);

  const std::string ok_cmd =
      tool + " cycle --config " +
      (configs_dir() / "cycle_electrical_4kv.json").string() + " --out " +
      (out / "run").string() + " 2>/dev/null";
  const int ostatus = std::system(ok_cmd.c_str());
  REQUIRE(WIFEXITED(ostatus));
  CHECK(WEXITSTATUS(ostatus) == kExitOk);
  CHECK(std::filesystem::exists(out / "run" / "cycle_report.txt"));
}
#endif

}  // TEST_SUITE("config")
