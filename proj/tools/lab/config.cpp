#include "lab/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace lab {

using subcycle::ConfigError;

namespace {

const std::map<std::string, std::set<std::string>> kFields{
    {"linear-taylor", {"model", "schemes", "strang_order", "thetas"}},
    {"linear-aorder-map", {"model", "schemes", "strang_order", "theta_grid", "dt", "initial"}},
    {"nonlinear-aorder", {"model", "schemes", "strang_order", "thetas", "dt", "initial", "t_final"}},
    {"pde-decay",
     {"model", "schemes", "strang_order", "thetas", "grid", "dt_cfl_fractions", "t_final", "stride",
      "transient_fraction"}},
    {"pde-inhomogeneous-order", {"model", "grid", "cases"}},
    {"appendix-b-bounds", {"model", "thetas", "grid", "dt_cfl_fractions"}},
};

const std::map<std::string, std::set<std::string>> kRequired{
    {"linear-taylor", {"thetas"}},
    {"linear-aorder-map", {"theta_grid", "dt"}},
    {"nonlinear-aorder", {"thetas", "dt"}},
    {"pde-decay", {"thetas", "grid", "dt_cfl_fractions", "t_final"}},
    {"pde-inhomogeneous-order", {"grid", "cases"}},
    {"appendix-b-bounds", {"thetas", "grid", "dt_cfl_fractions"}},
};

const std::set<std::string> kCommon{"experiment", "output", "jobs", "seed"};

[[noreturn]] void fail(const std::string& where, const std::string& what) { throw ConfigError(where + ": " + what); }

template <class T>
T scalar(const YAML::Node& n, const std::string& where) {
  if (!n.IsScalar()) fail(where, "expected a scalar");
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    fail(where, "cannot convert '" + n.Scalar() + "'");
  }
}

void check_keys(const YAML::Node& map, const std::set<std::string>& allowed, const std::string& where) {
  if (!map.IsMap()) fail(where, "expected a mapping");
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) fail(where, "unknown field '" + key + "'");
  }
}

template <class T>
std::vector<T> scalar_or_list(const YAML::Node& n, const std::string& where) {
  std::vector<T> out;
  if (n.IsSequence()) {
    for (std::size_t i = 0; i < n.size(); ++i) out.push_back(scalar<T>(n[i], where + "[" + std::to_string(i) + "]"));
  } else {
    out.push_back(scalar<T>(n, where));
  }
  if (out.empty()) fail(where, "empty list");
  return out;
}

Range parse_range(const YAML::Node& n, const std::string& where) {
  check_keys(n, {"start", "stop", "count"}, where);
  for (const char* k : {"start", "stop", "count"})
    if (!n[k]) fail(where, std::string("missing '") + k + "'");
  Range r{scalar<double>(n["start"], where + ".start"), scalar<double>(n["stop"], where + ".stop"),
          scalar<int>(n["count"], where + ".count")};
  if (r.count < 1) fail(where, "count must be >= 1");
  return r;
}

// Either an explicit list or a geometric sequence {start, ratio, count}.
std::vector<double> parse_sequence(const YAML::Node& n, const std::string& where) {
  std::vector<double> out;
  if (n.IsMap()) {
    check_keys(n, {"start", "ratio", "count"}, where);
    for (const char* k : {"start", "ratio", "count"})
      if (!n[k]) fail(where, std::string("missing '") + k + "'");
    const double start = scalar<double>(n["start"], where + ".start");
    const double ratio = scalar<double>(n["ratio"], where + ".ratio");
    const int count = scalar<int>(n["count"], where + ".count");
    if (count < 1) fail(where, "count must be >= 1");
    for (int i = 0; i < count; ++i) out.push_back(start * std::pow(ratio, i));
  } else {
    out = scalar_or_list<double>(n, where);
  }
  for (double x : out)
    if (!(x > 0.0) || !std::isfinite(x)) fail(where, "values must be positive and finite");
  return out;
}

ThetaValue parse_theta_value(const YAML::Node& n, const std::string& where) {
  if (!n.IsScalar()) fail(where, "expected a number or \"(N+1)/(2N)\"");
  if (n.Scalar() == "(N+1)/(2N)") return {0.0, true};
  const double v = scalar<double>(n, where);
  if (!(v >= 0.0 && v <= 1.0)) fail(where, "theta must lie in [0, 1]");
  return {v, false};
}

subcycle::ThetaPair parse_theta_pair(const YAML::Node& n, const std::string& where) {
  if (!n.IsSequence() || n.size() != 2) fail(where, "expected [theta_f, theta_s]");
  const double f = scalar<double>(n[0], where + "[0]"), s = scalar<double>(n[1], where + "[1]");
  if (!(f >= 0.0 && f <= 1.0 && s >= 0.0 && s <= 1.0)) fail(where, "theta must lie in [0, 1]");
  return {f, s};
}

subcycle::StrangOrder parse_order(const YAML::Node& n, const std::string& where) {
  const auto s = scalar<std::string>(n, where);
  if (s == "SFS") return subcycle::StrangOrder::SFS;
  if (s == "FSF") return subcycle::StrangOrder::FSF;
  fail(where, "strang_order must be SFS or FSF, got '" + s + "'");
}

subcycle::DirichletData parse_bc(const YAML::Node& n, const std::string& where) {
  if (!n.IsSequence() || n.size() != 4) fail(where, "expected [u_left, u_right, v_left, v_right]");
  return {scalar<double>(n[0], where), scalar<double>(n[1], where), scalar<double>(n[2], where),
          scalar<double>(n[3], where)};
}

subcycle::DtRule parse_dt_rule(const YAML::Node& n, const std::string& where) {
  check_keys(n, {"rule", "value"}, where);
  if (!n["rule"] || !n["value"]) fail(where, "expected {rule, value}");
  const auto rule = scalar<std::string>(n["rule"], where + ".rule");
  const double v = scalar<double>(n["value"], where + ".value");
  if (!(v > 0.0)) fail(where, "value must be positive");
  if (rule == "fixed") return subcycle::DtRule::fixed(v);
  if (rule == "diffusive") return subcycle::DtRule::diffusive(v);
  fail(where, "rule must be 'fixed' or 'diffusive'");
}

void parse_model(const YAML::Node& n, ExperimentConfig& cfg, bool pde) {
  const std::string where = "model";
  std::set<std::string> allowed{"c", "n_ratio"};
  if (cfg.experiment == "nonlinear-aorder") allowed.insert("kappa");
  if (pde) allowed.insert({"nu", "length"});
  check_keys(n, allowed, where);
  if (n["c"]) cfg.c = scalar<double>(n["c"], "model.c");
  if (n["kappa"]) cfg.kappa = scalar<double>(n["kappa"], "model.kappa");
  if (n["nu"]) cfg.nu = scalar<double>(n["nu"], "model.nu");
  if (n["length"]) cfg.length = scalar<double>(n["length"], "model.length");
  if (n["n_ratio"]) cfg.n_ratios = scalar_or_list<int>(n["n_ratio"], "model.n_ratio");
  if (!(cfg.c > 0.0)) fail("model.c", "must be positive");
  if (!(cfg.nu > 0.0)) fail("model.nu", "must be positive");
  if (!(cfg.length > 0.0)) fail("model.length", "must be positive");
  for (int r : cfg.n_ratios)
    if (r < 1) fail("model.n_ratio", "must be >= 1");
  if (cfg.experiment != "linear-taylor" && cfg.n_ratios.size() != 1)
    fail("model.n_ratio", "a single value is required for " + cfg.experiment);
}

}  // namespace

std::vector<double> Range::values() const {
  if (count == 1) return {start};
  std::vector<double> v;
  for (int i = 0; i < count; ++i) v.push_back(start + (stop - start) * i / (count - 1));
  return v;
}

ExperimentConfig parse_config(const std::string& yaml_text, const std::string& origin) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  if (!root.IsMap()) throw ConfigError(origin + ": top level must be a mapping");
  if (!root["experiment"]) throw ConfigError(origin + ": missing 'experiment'");

  ExperimentConfig cfg;
  cfg.experiment = scalar<std::string>(root["experiment"], "experiment");
  const auto fields = kFields.find(cfg.experiment);
  if (fields == kFields.end()) fail("experiment", "unknown experiment '" + cfg.experiment + "'");
  std::set<std::string> allowed = fields->second;
  allowed.insert(kCommon.begin(), kCommon.end());
  check_keys(root, allowed, origin);
  for (const auto& k : kRequired.at(cfg.experiment))
    if (!root[k]) fail(origin, "missing required field '" + k + "' for " + cfg.experiment);

  const bool pde = cfg.experiment.rfind("pde-", 0) == 0 || cfg.experiment == "appendix-b-bounds";
  cfg.output = root["output"] ? scalar<std::string>(root["output"], "output") : cfg.experiment;
  if (cfg.output.empty() || cfg.output.find('/') != std::string::npos) fail("output", "must be a plain file stem");
  if (root["jobs"]) cfg.jobs = scalar<int>(root["jobs"], "jobs");
  if (cfg.jobs < 1) fail("jobs", "must be >= 1");
  if (root["seed"]) cfg.seed = scalar<std::uint64_t>(root["seed"], "seed");
  if (root["model"]) parse_model(root["model"], cfg, pde);

  if (root["schemes"]) cfg.schemes = scalar_or_list<int>(root["schemes"], "schemes");
  for (int s : cfg.schemes)
    if (s < 1 || s > 6) fail("schemes", "scheme numbers are 1..6");
  if (root["strang_order"]) {
    cfg.strang_orders.clear();
    const auto& n = root["strang_order"];
    if (n.IsSequence()) {
      for (std::size_t i = 0; i < n.size(); ++i) cfg.strang_orders.push_back(parse_order(n[i], "strang_order"));
    } else {
      cfg.strang_orders.push_back(parse_order(n, "strang_order"));
    }
    if (cfg.strang_orders.empty()) fail("strang_order", "empty list");
  }

  if (root["thetas"]) {
    const auto& n = root["thetas"];
    if (!n.IsSequence() || n.size() == 0) fail("thetas", "expected a list of [theta_f, theta_s]");
    for (std::size_t i = 0; i < n.size(); ++i) {
      const std::string w = "thetas[" + std::to_string(i) + "]";
      if (!n[i].IsSequence() || n[i].size() != 2) fail(w, "expected [theta_f, theta_s]");
      cfg.thetas.push_back({parse_theta_value(n[i][0], w + "[0]"), parse_theta_value(n[i][1], w + "[1]")});
    }
  }
  if (root["theta_grid"]) {
    const auto& n = root["theta_grid"];
    check_keys(n, {"fast", "slow"}, "theta_grid");
    if (!n["fast"] || !n["slow"]) fail("theta_grid", "needs 'fast' and 'slow' ranges");
    cfg.theta_fast = parse_range(n["fast"], "theta_grid.fast");
    cfg.theta_slow = parse_range(n["slow"], "theta_grid.slow");
    for (const Range& r : {cfg.theta_fast, cfg.theta_slow})
      if (!(r.start >= 0.0 && r.stop <= 1.0 && r.start <= r.stop)) fail("theta_grid", "ranges must lie in [0, 1]");
  }
  if (root["dt"]) cfg.dt_grid = parse_sequence(root["dt"], "dt");
  if (root["initial"]) {
    const auto& n = root["initial"];
    check_keys(n, {"u", "v"}, "initial");
    if (n["u"]) cfg.u0 = scalar<double>(n["u"], "initial.u");
    if (n["v"]) cfg.v0 = scalar<double>(n["v"], "initial.v");
  }
  if (root["t_final"]) cfg.t_final = scalar<double>(root["t_final"], "t_final");
  if (!(cfg.t_final > 0.0)) fail("t_final", "must be positive");
  if (root["grid"]) {
    const auto& n = root["grid"];
    check_keys(n, {"J"}, "grid");
    if (!n["J"]) fail("grid", "missing 'J'");
    cfg.j_list = scalar_or_list<int>(n["J"], "grid.J");
    for (int J : cfg.j_list)
      if (J < 1) fail("grid.J", "must be >= 1");
    if (cfg.experiment == "appendix-b-bounds")
      for (int J : cfg.j_list)
        if (J > 64) fail("grid.J", "dense diagnostics are limited to J <= 64");
  }
  if (root["dt_cfl_fractions"]) cfg.dt_cfl_fractions = parse_sequence(root["dt_cfl_fractions"], "dt_cfl_fractions");
  if (root["stride"]) cfg.stride = scalar<long>(root["stride"], "stride");
  if (cfg.stride < 1) fail("stride", "must be >= 1");
  if (root["transient_fraction"]) cfg.transient_fraction = scalar<double>(root["transient_fraction"], "transient_fraction");
  if (!(cfg.transient_fraction >= 0.0 && cfg.transient_fraction < 1.0))
    fail("transient_fraction", "must lie in [0, 1)");
  if (root["cases"]) {
    const auto& n = root["cases"];
    if (!n.IsSequence() || n.size() == 0) fail("cases", "expected a non-empty list");
    for (std::size_t i = 0; i < n.size(); ++i) {
      const std::string w = "cases[" + std::to_string(i) + "]";
      check_keys(n[i], {"label", "scheme", "theta", "dt", "bc"}, w);
      for (const char* k : {"label", "theta", "dt", "bc"})
        if (!n[i][k]) fail(w, std::string("missing '") + k + "'");
      PdeCase pc;
      pc.label = scalar<std::string>(n[i]["label"], w + ".label");
      if (n[i]["scheme"]) pc.scheme = scalar<int>(n[i]["scheme"], w + ".scheme");
      if (pc.scheme < 1 || pc.scheme > 6) fail(w + ".scheme", "scheme numbers are 1..6");
      pc.thetas = parse_theta_pair(n[i]["theta"], w + ".theta");
      pc.dt_rule = parse_dt_rule(n[i]["dt"], w + ".dt");
      pc.bc = parse_bc(n[i]["bc"], w + ".bc");
      cfg.cases.push_back(pc);
    }
  }

  if (cfg.experiment == "nonlinear-aorder") {
    for (double dt : cfg.dt_grid) {
      const double r = cfg.t_final / dt;
      if (std::abs(r - std::round(r)) > 1e-9 * std::max(1.0, r))
        fail("t_final", "must be an integer multiple of every dt (dt = " + std::to_string(dt) + ")");
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), path);
}

}  // namespace lab
