#include "deg/config.hpp"

#include <array>
#include <cctype>
#include <fstream>
#include <initializer_list>
#include <iterator>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "deg/errors.hpp"
#include "deg/version.hpp"
#include "json.hpp"

namespace deg {
namespace {

using nlohmann::json;

std::string hex_hash(std::uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

/// Full-line '#' comments are allowed in every file we read; the JSON parser
/// sees the stripped text (hashes are taken over the raw bytes).
std::string strip_comment_lines(const std::string& raw) {
  std::istringstream in(raw);
  std::string out;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] != '#') {
      out += line;
      out += '\n';
    }
  }
  return out;
}

std::string read_file(const std::filesystem::path& path,
                      const std::string& what) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ConfigError("config", "cannot open " + what,
                      {path.string() + ": file is missing or unreadable"});
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

json parse_json_text(const std::string& raw, const std::string& what) {
  try {
    return json::parse(strip_comment_lines(raw));
  } catch (const json::parse_error& e) {
    throw ConfigError("config", what + " is not valid JSON", {e.what()});
  }
}

/// Accumulates problems instead of failing fast, so one run reports every
/// config defect at once.
struct Problems {
  std::vector<std::string> list;

  void add(const std::string& path, const std::string& msg) {
    list.push_back(path + ": " + msg);
  }
};

void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed, Problems& pr) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) {
        ok = true;
        break;
      }
    if (!ok) pr.add(path + "." + key, "unknown key");
  }
}

bool has(const json& j, const char* key) { return j.contains(key); }

double get_num(const json& j, const std::string& path, const char* key,
               Problems& pr, bool required, double def) {
  if (!j.contains(key)) {
    if (required) pr.add(path + "." + key, "required value is missing");
    return def;
  }
  if (!j[key].is_number()) {
    pr.add(path + "." + key, "must be a number");
    return def;
  }
  return j[key].get<double>();
}

int get_int(const json& j, const std::string& path, const char* key,
            Problems& pr, bool required, int def) {
  if (!j.contains(key)) {
    if (required) pr.add(path + "." + key, "required value is missing");
    return def;
  }
  if (!j[key].is_number_integer()) {
    pr.add(path + "." + key, "must be an integer");
    return def;
  }
  return j[key].get<int>();
}

bool get_bool(const json& j, const std::string& path, const char* key,
              Problems& pr, bool def) {
  if (!j.contains(key)) return def;
  if (!j[key].is_boolean()) {
    pr.add(path + "." + key, "must be a boolean");
    return def;
  }
  return j[key].get<bool>();
}

std::string get_str(const json& j, const std::string& path, const char* key,
                    Problems& pr, bool required, const std::string& def) {
  if (!j.contains(key)) {
    if (required) pr.add(path + "." + key, "required value is missing");
    return def;
  }
  if (!j[key].is_string()) {
    pr.add(path + "." + key, "must be a string");
    return def;
  }
  return j[key].get<std::string>();
}

std::vector<std::pair<double, double>> get_pairs(const json& j,
                                                 const std::string& path,
                                                 const char* key,
                                                 Problems& pr) {
  std::vector<std::pair<double, double>> out;
  if (!j.contains(key)) return out;
  if (!j[key].is_array()) {
    pr.add(path + "." + key, "must be an array of [x, y] pairs");
    return out;
  }
  for (const auto& el : j[key]) {
    if (!el.is_array() || el.size() != 2 || !el[0].is_number() ||
        !el[1].is_number()) {
      pr.add(path + "." + key, "every entry must be a numeric [x, y] pair");
      return {};
    }
    out.emplace_back(el[0].get<double>(), el[1].get<double>());
  }
  return out;
}

std::array<double, 5> get_durations(const json& j, const std::string& path,
                                    Problems& pr) {
  std::array<double, 5> out{1.0, 1.0, 1.0, 1.0, 1.0};
  if (!j.contains("phase_durations_s")) return out;
  const auto& a = j["phase_durations_s"];
  if (!a.is_array() || a.size() != 5) {
    pr.add(path + ".phase_durations_s", "must be an array of 5 durations");
    return out;
  }
  for (std::size_t i = 0; i < 5; ++i) {
    if (!a[i].is_number()) {
      pr.add(path + ".phase_durations_s", "durations must be numbers");
      return out;
    }
    out[i] = a[i].get<double>();
    if (out[i] < 0.0) pr.add(path + ".phase_durations_s", "durations must be >= 0");
  }
  return out;
}

MaterialParams parse_material_json(const json& j, Problems& pr) {
  const std::string path = "material";
  check_keys(j, path,
             {"c10_pa", "c20_pa", "c30_pa", "prony", "rel_permittivity",
              "density_kg_m3", "bulk_resistivity_ohm_m", "max_area_expansion",
              "_comment"},
             pr);
  MaterialParams mat;
  mat.yeoh0.c10 = get_num(j, path, "c10_pa", pr, true, 0.0);
  mat.yeoh0.c20 = get_num(j, path, "c20_pa", pr, false, 0.0);
  mat.yeoh0.c30 = get_num(j, path, "c30_pa", pr, false, 0.0);
  mat.rel_permittivity = get_num(j, path, "rel_permittivity", pr, false, 4.7);
  mat.density = get_num(j, path, "density_kg_m3", pr, false, 960.0);
  mat.bulk_resistivity =
      get_num(j, path, "bulk_resistivity_ohm_m", pr, false, 1e13);
  mat.max_area_expansion =
      get_num(j, path, "max_area_expansion", pr, false, 36.0);
  mat.prony.clear();
  if (has(j, "prony")) {
    if (!j["prony"].is_array()) {
      pr.add(path + ".prony", "must be an array of {g, tau_s} terms");
    } else {
      int i = 0;
      for (const auto& term : j["prony"]) {
        const std::string tp = path + ".prony[" + std::to_string(i++) + "]";
        if (!term.is_object()) {
          pr.add(tp, "must be an object {g, tau_s}");
          continue;
        }
        check_keys(term, tp, {"g", "tau_s"}, pr);
        PronyTerm t;
        t.g = get_num(term, tp, "g", pr, true, 0.0);
        t.tau = get_num(term, tp, "tau_s", pr, true, 1.0);
        mat.prony.push_back(t);
      }
    }
  }
  try {
    validate(mat);
  } catch (const ConfigError& e) {
    for (const auto& d : e.details()) pr.add(path, d);
  }
  return mat;
}

CycleConfig parse_cycle_block(const json& j, Problems& pr) {
  const std::string path = "cycle";
  check_keys(j, path,
             {"lam_p", "lam_act", "constant_voltage", "constant_charge",
              "drive", "poling_voltage_v", "stretch_voltage_v",
              "phase_durations_s", "include_viscoelasticity",
              "include_conduction_loss", "measured"},
             pr);
  CycleConfig cc;
  cc.spec.design.lam_p = get_num(j, path, "lam_p", pr, true, 1.0);
  cc.spec.design.lam_act = get_num(j, path, "lam_act", pr, false, 1.0);
  if (!(cc.spec.design.lam_p >= 1.0)) pr.add(path + ".lam_p", "must be >= 1");
  if (!(cc.spec.design.lam_act >= 1.0))
    pr.add(path + ".lam_act", "must be >= 1");

  const bool cv = get_bool(j, path, "constant_voltage", pr, false);
  const bool cq = get_bool(j, path, "constant_charge", pr, false);
  if (cv && cq)
    pr.add(path, "constant_voltage and constant_charge are exclusive");
  cc.spec.mode = cq ? CycleMode::constant_charge : CycleMode::constant_voltage;

  const std::string drive =
      get_str(j, path, "drive", pr, false, "mechanical");
  if (drive == "mechanical")
    cc.spec.drive = StretchDrive::mechanical;
  else if (drive == "electrical")
    cc.spec.drive = StretchDrive::electrical;
  else
    pr.add(path + ".drive", "must be \"mechanical\" or \"electrical\"");

  cc.spec.poling_voltage = get_num(j, path, "poling_voltage_v", pr, true, 0.0);
  if (cc.spec.poling_voltage < 0.0)
    pr.add(path + ".poling_voltage_v", "must be >= 0");
  cc.spec.stretch_voltage =
      get_num(j, path, "stretch_voltage_v", pr, false, 0.0);
  if (cc.spec.stretch_voltage < 0.0)
    pr.add(path + ".stretch_voltage_v", "must be >= 0");
  cc.spec.phase_durations = get_durations(j, path, pr);
  cc.spec.include_viscoelasticity =
      get_bool(j, path, "include_viscoelasticity", pr, false);
  cc.spec.include_conduction_loss =
      get_bool(j, path, "include_conduction_loss", pr, true);

  if (has(j, "measured")) {
    const auto& m = j["measured"];
    const std::string mp = path + ".measured";
    if (!m.is_object()) {
      pr.add(mp, "must be an object {c_max_f, c_min_f, v_v}");
    } else {
      check_keys(m, mp, {"c_max_f", "c_min_f", "v_v"}, pr);
      MeasuredCapacitances meas;
      meas.c_max = get_num(m, mp, "c_max_f", pr, true, 0.0);
      meas.c_min = get_num(m, mp, "c_min_f", pr, true, 0.0);
      meas.v = get_num(m, mp, "v_v", pr, true, 0.0);
      if (!(meas.c_max > 0.0)) pr.add(mp + ".c_max_f", "must be > 0");
      if (!(meas.c_min > 0.0)) pr.add(mp + ".c_min_f", "must be > 0");
      if (meas.c_max < meas.c_min)
        pr.add(mp, "c_max_f must be >= c_min_f");
      if (meas.v < 0.0) pr.add(mp + ".v_v", "must be >= 0");
      cc.measured = meas;
    }
  }
  return cc;
}

EnvelopeConfig parse_envelope_block(const json& j, Problems& pr) {
  const std::string path = "envelope";
  check_keys(j, path,
             {"lam_p_min", "lam_p_max", "lam_act_min", "lam_act_max", "nx",
              "ny"},
             pr);
  EnvelopeConfig ec;
  ec.ranges.lam_p_min = get_num(j, path, "lam_p_min", pr, false, 1.0);
  ec.ranges.lam_p_max = get_num(j, path, "lam_p_max", pr, false, 6.0);
  ec.ranges.lam_act_min = get_num(j, path, "lam_act_min", pr, false, 1.0);
  ec.ranges.lam_act_max = get_num(j, path, "lam_act_max", pr, false, 6.0);
  ec.nx = get_int(j, path, "nx", pr, false, 51);
  ec.ny = get_int(j, path, "ny", pr, false, 51);
  if (!(ec.ranges.lam_p_min >= 1.0) ||
      !(ec.ranges.lam_p_max >= ec.ranges.lam_p_min))
    pr.add(path, "lam_p range must satisfy 1 <= min <= max");
  if (!(ec.ranges.lam_act_min >= 1.0) ||
      !(ec.ranges.lam_act_max >= ec.ranges.lam_act_min))
    pr.add(path, "lam_act range must satisfy 1 <= min <= max");
  if (ec.nx < 1 || ec.ny < 1) pr.add(path, "nx and ny must be >= 1");
  return ec;
}

DynamicsRunConfig parse_dynamics_block(const json& j, Problems& pr) {
  const std::string path = "dynamics";
  check_keys(j, path,
             {"e_field_v_per_m", "e_field_schedule", "gravity_m_s2", "t_end_s",
              "dt_s", "lam0", "lam_dot0", "auto_step"},
             pr);
  DynamicsRunConfig dc;
  const bool has_const = has(j, "e_field_v_per_m");
  const bool has_sched = has(j, "e_field_schedule");
  if (has_const && has_sched)
    pr.add(path, "e_field_v_per_m and e_field_schedule are exclusive");
  if (has_const) {
    const double e = get_num(j, path, "e_field_v_per_m", pr, false, 0.0);
    if (e < 0.0) pr.add(path + ".e_field_v_per_m", "must be >= 0");
    dc.dyn.e_field.steps = {{0.0, e}};
  } else if (has_sched) {
    dc.dyn.e_field.steps = get_pairs(j, path, "e_field_schedule", pr);
    double prev_t = -1.0;
    for (const auto& [t, e] : dc.dyn.e_field.steps) {
      if (t < 0.0 || t <= prev_t) {
        pr.add(path + ".e_field_schedule",
               "step times must be >= 0 and strictly increasing");
        break;
      }
      if (e < 0.0) {
        pr.add(path + ".e_field_schedule", "fields must be >= 0");
        break;
      }
      prev_t = t;
    }
  }
  dc.dyn.gravity = get_num(j, path, "gravity_m_s2", pr, false, 9.81);
  dc.dyn.t_end = get_num(j, path, "t_end_s", pr, false, 1.0);
  dc.dyn.dt = get_num(j, path, "dt_s", pr, false, 1e-5);
  dc.dyn.lam0 = get_num(j, path, "lam0", pr, false, 1.0);
  dc.dyn.lam_dot0 = get_num(j, path, "lam_dot0", pr, false, 0.0);
  dc.auto_step = get_bool(j, path, "auto_step", pr, false);
  if (!(dc.dyn.dt > 0.0)) pr.add(path + ".dt_s", "must be > 0");
  if (!(dc.dyn.t_end >= dc.dyn.dt))
    pr.add(path + ".t_end_s", "must cover at least one step");
  if (!(dc.dyn.lam0 > 0.0)) pr.add(path + ".lam0", "must be > 0");
  return dc;
}

CircuitConfig parse_circuit_block(const json& j, Problems& pr) {
  const std::string path = "circuit";
  check_keys(j, path,
             {"r_e_ohm", "r_mes_ohm", "converter_gain", "noise_std_a",
              "source", "c_p_f", "r_p_ohm", "t_end_s", "dt_s",
              "check_refinement", "windows"},
             pr);
  CircuitConfig cc;
  cc.params.r_e = get_num(j, path, "r_e_ohm", pr, false, 1e6);
  cc.params.r_mes = get_num(j, path, "r_mes_ohm", pr, false, 1e9);
  cc.params.converter_gain = get_num(j, path, "converter_gain", pr, false, 2000.0);
  cc.params.noise_std = get_num(j, path, "noise_std_a", pr, false, 0.0);
  if (!(cc.params.r_e > 0.0)) pr.add(path + ".r_e_ohm", "must be > 0");
  if (!(cc.params.r_mes > 0.0)) pr.add(path + ".r_mes_ohm", "must be > 0");
  if (!(cc.params.converter_gain > 0.0))
    pr.add(path + ".converter_gain", "must be > 0");
  if (cc.params.noise_std < 0.0) pr.add(path + ".noise_std_a", "must be >= 0");

  if (has(j, "source")) {
    if (!j["source"].is_array()) {
      pr.add(path + ".source", "must be an array of steps");
    } else {
      int i = 0;
      double prev_t = -1.0;
      for (const auto& s : j["source"]) {
        const std::string sp = path + ".source[" + std::to_string(i++) + "]";
        if (!s.is_object()) {
          pr.add(sp, "must be an object {t_s, v_cmd_v, connected}");
          continue;
        }
        check_keys(s, sp, {"t_s", "v_cmd_v", "connected"}, pr);
        SourceStep step;
        step.t = get_num(s, sp, "t_s", pr, true, 0.0);
        step.v_cmd = get_num(s, sp, "v_cmd_v", pr, true, 0.0);
        step.connected = get_bool(s, sp, "connected", pr, false);
        if (step.t < 0.0 || step.t <= prev_t)
          pr.add(sp + ".t_s", "step times must be >= 0 and strictly increasing");
        // the low-voltage command side of the converter spans 0-5 V
        if (step.v_cmd < 0.0 || step.v_cmd > 5.0)
          pr.add(sp + ".v_cmd_v", "must lie within the converter range [0, 5]");
        prev_t = step.t;
        cc.params.source.push_back(step);
      }
    }
  }

  const auto profile = [&](const char* key, PiecewiseLinear& pl,
                           bool required) {
    if (!has(j, key)) {
      if (required) pr.add(path + "." + key, "required profile is missing");
      return;
    }
    pl.knots = get_pairs(j, path, key, pr);
    if (pl.knots.empty()) {
      pr.add(path + "." + key, "profile needs at least one knot");
      return;
    }
    double prev_t = -std::numeric_limits<double>::infinity();
    for (const auto& [t, v] : pl.knots) {
      if (t <= prev_t) {
        pr.add(path + "." + key, "knot times must be strictly increasing");
        break;
      }
      if (!(v > 0.0)) {
        pr.add(path + "." + key, "values must be > 0");
        break;
      }
      prev_t = t;
    }
  };
  profile("c_p_f", cc.profile.c_p, true);
  profile("r_p_ohm", cc.profile.r_p, true);

  cc.t_end = get_num(j, path, "t_end_s", pr, false, 1.0);
  cc.dt = get_num(j, path, "dt_s", pr, false, 1e-5);
  cc.check_refinement = get_bool(j, path, "check_refinement", pr, true);
  if (!(cc.dt > 0.0)) pr.add(path + ".dt_s", "must be > 0");
  if (!(cc.t_end >= cc.dt)) pr.add(path + ".t_end_s", "must cover at least one step");

  if (has(j, "windows")) {
    if (!j["windows"].is_array()) {
      pr.add(path + ".windows", "must be an array");
    } else {
      int i = 0;
      for (const auto& w : j["windows"]) {
        const std::string wp = path + ".windows[" + std::to_string(i++) + "]";
        if (!w.is_object()) {
          pr.add(wp, "must be an object {t0_s, t1_s, v_known_v}");
          continue;
        }
        check_keys(w, wp, {"t0_s", "t1_s", "v_known_v"}, pr);
        EstimationWindow win;
        win.t0 = get_num(w, wp, "t0_s", pr, true, 0.0);
        win.t1 = get_num(w, wp, "t1_s", pr, true, 0.0);
        win.v_known = get_num(w, wp, "v_known_v", pr, true, 0.0);
        if (!(win.t1 > win.t0)) pr.add(wp, "t1_s must be > t0_s");
        if (win.v_known == 0.0) pr.add(wp + ".v_known_v", "must be nonzero");
        cc.windows.push_back(win);
      }
    }
  }
  return cc;
}

SweepOptions parse_sweep_block(const json& j, Problems& pr) {
  const std::string path = "sweep";
  check_keys(j, path,
             {"lam_p_min", "lam_p_max", "resolution", "phase_durations_s",
              "include_viscoelasticity", "include_conduction_loss"},
             pr);
  SweepOptions so;
  so.lam_p_min = get_num(j, path, "lam_p_min", pr, false, 1.0);
  so.lam_p_max = get_num(j, path, "lam_p_max", pr, false, 6.0);
  so.resolution = get_int(j, path, "resolution", pr, false, 51);
  so.phase_durations = get_durations(j, path, pr);
  so.include_viscoelasticity =
      get_bool(j, path, "include_viscoelasticity", pr, false);
  so.include_conduction_loss =
      get_bool(j, path, "include_conduction_loss", pr, true);
  if (!(so.lam_p_min >= 1.0) || !(so.lam_p_max >= so.lam_p_min))
    pr.add(path, "lam_p range must satisfy 1 <= min <= max");
  if (so.resolution < 1) pr.add(path + ".resolution", "must be >= 1");
  return so;
}

OptimizeOptions parse_optimize_block(const json& j, Problems& pr) {
  const std::string path = "optimize";
  check_keys(j, path,
             {"lam_p_min", "lam_p_max", "lam_act_min", "lam_act_max",
              "e_min_v_per_m", "e_max_v_per_m", "resolution",
              "phase_durations_s", "include_viscoelasticity",
              "include_conduction_loss"},
             pr);
  OptimizeOptions oo;
  oo.bounds.lam_p_min = get_num(j, path, "lam_p_min", pr, false, 1.0);
  oo.bounds.lam_p_max = get_num(j, path, "lam_p_max", pr, false, 6.0);
  oo.bounds.lam_act_min = get_num(j, path, "lam_act_min", pr, false, 1.0);
  oo.bounds.lam_act_max = get_num(j, path, "lam_act_max", pr, false, 6.0);
  oo.bounds.e_min = get_num(j, path, "e_min_v_per_m", pr, false, 0.0);
  oo.bounds.e_max = get_num(j, path, "e_max_v_per_m", pr, false, 1.4e8);
  if (has(j, "resolution")) {
    const auto& r = j["resolution"];
    if (!r.is_array() || r.size() != 3 || !r[0].is_number_integer() ||
        !r[1].is_number_integer() || !r[2].is_number_integer()) {
      pr.add(path + ".resolution", "must be an array of 3 integers");
    } else {
      oo.resolution = {r[0].get<int>(), r[1].get<int>(), r[2].get<int>()};
    }
  }
  oo.phase_durations = get_durations(j, path, pr);
  oo.include_viscoelasticity =
      get_bool(j, path, "include_viscoelasticity", pr, false);
  oo.include_conduction_loss =
      get_bool(j, path, "include_conduction_loss", pr, true);
  if (!(oo.bounds.lam_p_min >= 1.0) ||
      !(oo.bounds.lam_p_max >= oo.bounds.lam_p_min))
    pr.add(path, "lam_p bounds must satisfy 1 <= min <= max");
  if (!(oo.bounds.lam_act_min >= 1.0) ||
      !(oo.bounds.lam_act_max >= oo.bounds.lam_act_min))
    pr.add(path, "lam_act bounds must satisfy 1 <= min <= max");
  if (!(oo.bounds.e_min >= 0.0) || !(oo.bounds.e_max >= oo.bounds.e_min))
    pr.add(path, "field bounds must satisfy 0 <= min <= max");
  for (int r : oo.resolution)
    if (r < 1) {
      pr.add(path + ".resolution", "entries must be >= 1");
      break;
    }
  return oo;
}

FitConfig parse_fit_block(const json& j, const std::filesystem::path& base,
                          Problems& pr) {
  const std::string path = "fit";
  check_keys(j, path, {"input_csv", "mode", "n_terms", "output_material"}, pr);
  FitConfig fc;
  const std::string csv = get_str(j, path, "input_csv", pr, true, "");
  if (!csv.empty()) {
    fc.input_csv = base / csv;
    if (!std::filesystem::exists(fc.input_csv))
      pr.add(path + ".input_csv", "referenced file does not exist: " +
                                      fc.input_csv.string());
  }
  const std::string mode = get_str(j, path, "mode", pr, false, "equibiaxial");
  if (mode == "equibiaxial")
    fc.mode = FitMode::equibiaxial;
  else if (mode == "uniaxial")
    fc.mode = FitMode::uniaxial;
  else
    pr.add(path + ".mode", "must be \"equibiaxial\" or \"uniaxial\"");
  fc.n_terms = get_int(j, path, "n_terms", pr, false, 2);
  if (fc.n_terms < 1) pr.add(path + ".n_terms", "must be >= 1");
  fc.output_material =
      get_str(j, path, "output_material", pr, false, "fitted_material.json");
  return fc;
}

BreakdownLaw parse_breakdown_block(const json& j, Problems& pr) {
  const std::string path = "breakdown";
  check_keys(j, path, {"k_bd_v", "table"}, pr);
  BreakdownLaw law;
  law.k_bd = get_num(j, path, "k_bd_v", pr, false, 3.89e3);
  if (!(law.k_bd > 0.0)) pr.add(path + ".k_bd_v", "must be > 0");
  law.table = get_pairs(j, path, "table", pr);
  double prev_t = 0.0;
  for (const auto& [thickness, field] : law.table) {
    if (!(thickness > prev_t)) {
      pr.add(path + ".table",
             "thicknesses must be positive and strictly increasing");
      break;
    }
    if (!(field > 0.0)) {
      pr.add(path + ".table", "fields must be > 0");
      break;
    }
    prev_t = thickness;
  }
  return law;
}

}  // namespace

MaterialParams parse_material_file(const std::filesystem::path& path) {
  const std::string raw = read_file(path, "material file");
  const json j = parse_json_text(raw, "material file");
  if (!j.is_object())
    throw ConfigError("config", "material file must hold a JSON object", {});
  Problems pr;
  MaterialParams mat = parse_material_json(j, pr);
  if (!pr.list.empty())
    throw ConfigError("config", "invalid material file " + path.string(),
                      pr.list);
  return mat;
}

void write_material_file(const std::filesystem::path& path,
                         const MaterialParams& mat,
                         const std::string& comment) {
  json j;
  j["c10_pa"] = mat.yeoh0.c10;
  j["c20_pa"] = mat.yeoh0.c20;
  j["c30_pa"] = mat.yeoh0.c30;
  j["prony"] = json::array();
  for (const auto& term : mat.prony)
    j["prony"].push_back({{"g", term.g}, {"tau_s", term.tau}});
  j["rel_permittivity"] = mat.rel_permittivity;
  j["density_kg_m3"] = mat.density;
  j["bulk_resistivity_ohm_m"] = mat.bulk_resistivity;
  j["max_area_expansion"] = mat.max_area_expansion;

  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw ConfigError("config", "cannot write material file",
                      {path.string()});
  if (!comment.empty()) {
    std::istringstream lines(comment);
    std::string line;
    while (std::getline(lines, line)) out << "# " << line << '\n';
  }
  out << j.dump(2) << '\n';
}

TestCurve read_curve_csv(const std::filesystem::path& path) {
  const std::string raw = read_file(path, "curve file");
  std::istringstream in(raw);
  std::string line;
  TestCurve curve;
  bool header_seen = false;
  Problems pr;
  int line_no = 0;
  const auto strip = [](std::string s) {
    std::string out;
    for (char c : s)
      if (!std::isspace(static_cast<unsigned char>(c))) out += c;
    return out;
  };
  while (std::getline(in, line)) {
    ++line_no;
    const std::string s = strip(line);
    if (s.empty() || s[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      if (s == "lambda,nominal_stress_pa")
        curve.kind = CurveKind::tensile;
      else if (s == "time_s,normalized_stress")
        curve.kind = CurveKind::relaxation;
      else
        pr.add("line " + std::to_string(line_no),
               "header must be \"lambda,nominal_stress_pa\" or "
               "\"time_s,normalized_stress\"");
      continue;
    }
    const auto comma = s.find(',');
    if (comma == std::string::npos) {
      pr.add("line " + std::to_string(line_no), "expected two comma-separated values");
      continue;
    }
    try {
      std::size_t used = 0;
      const std::string left = s.substr(0, comma);
      const std::string right = s.substr(comma + 1);
      const double x = std::stod(left, &used);
      if (used != left.size()) throw std::invalid_argument(left);
      const double y = std::stod(right, &used);
      if (used != right.size()) throw std::invalid_argument(right);
      curve.points.emplace_back(x, y);
    } catch (const std::exception&) {
      pr.add("line " + std::to_string(line_no), "unparseable number");
    }
  }
  if (!header_seen) pr.add(path.string(), "file has no header line");
  if (!pr.list.empty())
    throw ConfigError("config", "invalid curve file " + path.string(),
                      pr.list);
  try {
    validate(curve);
  } catch (const ConfigError& e) {
    throw ConfigError("config", "invalid curve file " + path.string(),
                      e.details());
  }
  return curve;
}

RunConfig parse_run_config(const std::filesystem::path& path) {
  const std::string raw = read_file(path, "config file");
  const json j = parse_json_text(raw, "config file");
  if (!j.is_object())
    throw ConfigError("config", "config file must hold a JSON object", {});

  RunConfig rc;
  rc.config_path = path;
  rc.config_hash = hex_hash(fnv1a64(raw));

  Problems pr;
  check_keys(j, "config",
             {"material_file", "geometry", "breakdown", "seed", "cycle",
              "envelope", "dynamics", "circuit", "sweep", "optimize", "fit"},
             pr);

  const std::filesystem::path base = path.has_parent_path()
                                         ? path.parent_path()
                                         : std::filesystem::path(".");
  const std::string mat_file =
      get_str(j, "config", "material_file", pr, true, "");
  bool material_ok = false;
  if (!mat_file.empty()) {
    rc.material_path = base / mat_file;
    try {
      rc.material = parse_material_file(rc.material_path);
      material_ok = true;
    } catch (const ConfigError& e) {
      if (e.details().empty()) {
        pr.add("material_file", e.what());
      } else {
        for (const auto& d : e.details()) pr.add("material_file", d);
      }
    }
  }

  if (!has(j, "geometry")) {
    pr.add("config.geometry", "required block is missing");
  } else if (!j["geometry"].is_object()) {
    pr.add("config.geometry", "must be an object");
  } else {
    const auto& g = j["geometry"];
    check_keys(g, "geometry", {"x10_m", "x20_m", "x30_m", "mass_kg"}, pr);
    rc.geometry.x10 = get_num(g, "geometry", "x10_m", pr, true, 0.0);
    rc.geometry.x20 = get_num(g, "geometry", "x20_m", pr, true, 0.0);
    rc.geometry.x30 = get_num(g, "geometry", "x30_m", pr, true, 0.0);
    if (has(g, "mass_kg")) {
      rc.geometry.mass = get_num(g, "geometry", "mass_kg", pr, false, 0.0);
      if (rc.geometry.mass < 0.0) pr.add("geometry.mass_kg", "must be >= 0");
    } else if (material_ok) {
      // Default to the film's own mass: density times reference volume.
      rc.geometry.mass = rc.material.density * rc.geometry.x10 *
                         rc.geometry.x20 * rc.geometry.x30;
    }
    try {
      validate(rc.geometry);
    } catch (const ConfigError& e) {
      for (const auto& d : e.details()) pr.add("geometry", d);
    }
  }

  if (has(j, "breakdown")) {
    if (!j["breakdown"].is_object())
      pr.add("config.breakdown", "must be an object");
    else
      rc.breakdown = parse_breakdown_block(j["breakdown"], pr);
  }

  if (has(j, "seed")) {
    if (!j["seed"].is_number_unsigned())
      pr.add("config.seed", "must be a non-negative integer");
    else
      rc.seed = j["seed"].get<std::uint64_t>();
  }

  const auto block = [&](const char* key, auto parser, auto& slot) {
    if (!has(j, key)) return;
    if (!j[key].is_object()) {
      pr.add(std::string("config.") + key, "must be an object");
      return;
    }
    slot = parser(j[key], pr);
  };
  block("cycle", parse_cycle_block, rc.cycle);
  block("envelope", parse_envelope_block, rc.envelope);
  block("dynamics", parse_dynamics_block, rc.dynamics);
  block("circuit", parse_circuit_block, rc.circuit);
  block("sweep", parse_sweep_block, rc.sweep);
  block("optimize", parse_optimize_block, rc.optimize);
  if (has(j, "fit")) {
    if (!j["fit"].is_object())
      pr.add("config.fit", "must be an object");
    else
      rc.fit = parse_fit_block(j["fit"], base, pr);
  }

  if (!pr.list.empty())
    throw ConfigError("config", "invalid run config " + path.string(),
                      pr.list);
  return rc;
}

}  // namespace deg
