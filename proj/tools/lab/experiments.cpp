#include "lab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>
#include <sstream>

#include "lab/pool.hpp"
#include "subcycle/analysis.hpp"
#include "subcycle/linear_ode.hpp"
#include "subcycle/nonlinear_ode.hpp"
#include "subcycle/reaction_diffusion.hpp"

namespace lab {

using namespace subcycle;

namespace {

using Cells = std::vector<Cell>;

Cell I(long long v) { return static_cast<std::int64_t>(v); }
Cell D(double v) { return v; }
Cell S(std::string v) { return v; }

bool is_strang(int scheme) { return scheme == 3 || scheme == 4; }

const char* order_name(StrangOrder o) { return o == StrangOrder::SFS ? "SFS" : "FSF"; }

// Strang ordering only matters for schemes 3 and 4; other schemes get "-".
struct SchemeChoice {
  int number;
  std::optional<StrangOrder> order;

  std::string order_label() const { return order ? order_name(*order) : "-"; }
  SchemeSpec spec(int n, ThetaPair t) const { return numbered_scheme(number, n, t, order.value_or(StrangOrder::SFS)); }
};

std::vector<SchemeChoice> scheme_choices(const ExperimentConfig& cfg) {
  std::vector<SchemeChoice> out;
  for (int s : cfg.schemes) {
    if (is_strang(s)) {
      for (auto o : cfg.strang_orders) out.push_back({s, o});
    } else {
      out.push_back({s, std::nullopt});
    }
  }
  return out;
}

std::string describe(const SchemeChoice& sc, ThetaPair t) {
  std::ostringstream os;
  os << "scheme " << sc.number;
  if (sc.order) os << ' ' << order_name(*sc.order);
  os << " theta=(" << format_double(t.fast()) << "," << format_double(t.slow()) << ")";
  return os.str();
}

// Per-task output slot, merged after the pool finishes.
struct Slot {
  std::vector<Cells> main, points;
  std::vector<PointIssue> issues;
};

struct FitCells {
  double slope = std::numeric_limits<double>::quiet_NaN();
  double intercept = std::numeric_limits<double>::quiet_NaN();
  double rms = std::numeric_limits<double>::quiet_NaN();
  double min_pair = std::numeric_limits<double>::quiet_NaN();
  double max_pair = std::numeric_limits<double>::quiet_NaN();
  long used = 0, excluded = 0;
  long divergent = 0;
  std::string status = "ok";

  Cells cells() const { return {D(slope), D(intercept), D(rms), I(used), I(excluded), D(min_pair), D(max_pair), I(divergent), S(status)}; }
};

const std::vector<std::string> kFitHeader{"a_order", "intercept", "residual_rms", "points_used", "points_excluded",
                                          "min_pair_slope", "max_pair_slope", "pair_divergence", "status"};

FitCells fit_cells(const std::vector<std::pair<double, double>>& pts) {
  FitCells f;
  try {
    const OrderFit o = fit_order(pts);
    f.slope = o.slope;
    f.intercept = o.intercept;
    f.rms = o.residual_rms;
    f.min_pair = o.min_pair_slope();
    f.max_pair = o.max_pair_slope();
    f.used = static_cast<long>(o.points.size());
    f.excluded = o.excluded;
    f.divergent = std::abs(f.min_pair - f.slope) > 0.1 || std::abs(f.max_pair - f.slope) > 0.1;
  } catch (const ZeroErrorDegenerate&) {
    f.slope = std::numeric_limits<double>::infinity();
    f.excluded = static_cast<long>(pts.size());
    f.status = "unbounded";
  } catch (const DegenerateFit& e) {
    long below = 0;
    for (const auto& p : pts) below += !(p.second >= kErrorFloor);
    f.excluded = below;
    f.used = static_cast<long>(pts.size()) - below;
    if (below > 0) {
      f.slope = std::numeric_limits<double>::infinity();
      f.status = "unbounded";
    } else {
      f.status = std::string("degenerate: ") + e.what();
    }
  }
  return f;
}

template <class Task, class Fn>
RunResult run_tasks(const std::vector<Task>& tasks, int jobs, Table main, Table points, const Fn& fn) {
  std::vector<Slot> slots(tasks.size());
  parallel_for(tasks.size(), jobs, [&](std::size_t i) { fn(tasks[i], slots[i]); });
  RunResult r{std::move(main), std::move(points), {}};
  for (auto& s : slots) {
    for (auto& c : s.main) r.main.add(std::move(c));
    for (auto& c : s.points) r.points.add(std::move(c));
    for (auto& i : s.issues) r.issues.push_back(std::move(i));
  }
  r.main.sort();
  r.points.sort();
  std::sort(r.issues.begin(), r.issues.end(), [](const PointIssue& a, const PointIssue& b) {
    return std::tie(a.point, a.message) < std::tie(b.point, b.message);
  });
  return r;
}

Table make_table(std::vector<std::string> header, std::size_t keys) {
  Table t;
  t.header = std::move(header);
  t.key_columns = keys;
  return t;
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

Cells concat(Cells a, const Cells& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

// ---- linear-taylor

struct TaylorTask {
  int n;
  SchemeChoice sc;
  ThetaPair t;
};

std::vector<TaylorTask> taylor_tasks(const ExperimentConfig& cfg) {
  std::vector<TaylorTask> out;
  for (int n : cfg.n_ratios)
    for (const auto& sc : scheme_choices(cfg))
      for (const auto& te : cfg.thetas) out.push_back({n, sc, te.resolve(n)});
  return out;
}

RunResult run_linear_taylor(const ExperimentConfig& cfg, int jobs) {
  auto main = make_table({"c", "n_ratio", "scheme", "strang_order", "theta_f", "theta_s", "predicted_c1", "empirical_c1",
                          "predicted_c2", "empirical_c2", "status"},
                         6);
  return run_tasks(taylor_tasks(cfg), jobs, std::move(main), make_table({}, 0), [&](const TaylorTask& k, Slot& out) {
    const LinearModel m(cfg.c, k.n);
    const auto spec = k.sc.spec(k.n, k.t);
    const Cells key{D(cfg.c), I(k.n), I(k.sc.number), S(k.sc.order_label()), D(k.t.fast()), D(k.t.slow())};
    try {
      const auto s = slope_taylor_check(m, spec);
      const auto r = rate_taylor_check(m, spec);
      out.main.push_back(concat(key, {D(s.predicted), D(s.empirical), D(r.predicted), D(r.empirical), S("ok")}));
    } catch (const Error& e) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      out.main.push_back(concat(key, {D(nan), D(nan), D(nan), D(nan), S(std::string("failed: ") + e.what())}));
      out.issues.push_back({IssueKind::Numerical, "N=" + std::to_string(k.n) + " " + describe(k.sc, k.t), e.what()});
    }
  });
}

// ---- shared A-order sweep over dt

struct AOrderTask {
  SchemeChoice sc;
  ThetaPair t;
};

std::optional<std::string> ode_stability_problem(const ExperimentConfig& cfg, const SchemeSpec& spec, double dt) {
  const double h = ode_stability_interval(spec, cfg.c);
  if (dt > h) return "dt = " + format_double(dt) + " exceeds the stability interval " + format_double(h);
  try {
    scheme_matrix(LinearModel(cfg.c, cfg.n_ratios.front()), spec, dt);
  } catch (const StabilityViolation& e) {
    return std::string(e.what());
  }
  return std::nullopt;
}

std::vector<PointIssue> screen_aorder(const ExperimentConfig& cfg, const std::vector<AOrderTask>& tasks) {
  std::vector<PointIssue> out;
  const int n = cfg.n_ratios.front();
  for (const auto& k : tasks)
    for (double dt : cfg.dt_grid)
      if (auto p = ode_stability_problem(cfg, k.sc.spec(n, k.t), dt))
        out.push_back({IssueKind::Stability, describe(k.sc, k.t) + " dt=" + format_double(dt), *p});
  return out;
}

std::vector<AOrderTask> map_tasks(const ExperimentConfig& cfg) {
  std::vector<AOrderTask> out;
  for (const auto& sc : scheme_choices(cfg))
    for (double f : cfg.theta_fast.values())
      for (double s : cfg.theta_slow.values()) out.push_back({sc, {f, s}});
  return out;
}

std::vector<AOrderTask> table_tasks(const ExperimentConfig& cfg) {
  std::vector<AOrderTask> out;
  const int n = cfg.n_ratios.front();
  for (const auto& sc : scheme_choices(cfg))
    for (const auto& te : cfg.thetas) out.push_back({sc, te.resolve(n)});
  return out;
}

RunResult run_aorder(const ExperimentConfig& cfg, int jobs, bool nonlinear) {
  const int n = cfg.n_ratios.front();
  std::vector<std::string> key_head{"c", "n_ratio"};
  if (nonlinear) key_head.insert(key_head.end(), {"kappa", "t_final"});
  key_head.insert(key_head.end(), {"u0", "v0", "scheme", "strang_order", "theta_f", "theta_s"});
  const std::size_t nkey = key_head.size();
  auto main = make_table(concat(key_head, kFitHeader), nkey);
  auto points = make_table(concat(key_head, {"dt", "eps_relative", "eps_as"}), nkey + 1);
  const auto tasks = nonlinear ? table_tasks(cfg) : map_tasks(cfg);

  return run_tasks(tasks, jobs, std::move(main), std::move(points), [&](const AOrderTask& k, Slot& out) {
    const auto spec = k.sc.spec(n, k.t);
    Cells key{D(cfg.c), I(n)};
    if (nonlinear) key.insert(key.end(), {D(cfg.kappa), D(cfg.t_final)});
    key.insert(key.end(), {D(cfg.u0), D(cfg.v0), I(k.sc.number), S(k.sc.order_label()), D(k.t.fast()), D(k.t.slow())});
    const std::string where = describe(k.sc, k.t);

    std::vector<std::pair<double, double>> pts;
    bool skipped = false, failed = false;
    for (double dt : cfg.dt_grid) {
      if (auto p = ode_stability_problem(cfg, spec, dt)) {
        out.issues.push_back({IssueKind::Stability, where + " dt=" + format_double(dt), *p});
        skipped = true;
        continue;
      }
      try {
        double rel, err;
        if (nonlinear) {
          const NonlinearModel m(cfg.c, n, cfg.kappa);
          const auto run = nl_run_to_equilibrium(m, spec, {cfg.u0, cfg.v0}, dt, cfg.t_final);
          const NLState ex = nl_exact_solution(m, {cfg.u0, cfg.v0}, cfg.t_final);
          err = run.eps_as;
          rel = err / std::hypot(ex.u, ex.v);
        } else {
          const LinearModel m(cfg.c, n);
          const auto a = asymptotic_error(analyze_propagator(scheme_matrix(m, spec, dt)), m, cfg.u0, cfg.v0);
          rel = a.eps_relative;
          err = a.eps_as_norm;
        }
        pts.emplace_back(dt, err);
        out.points.push_back(concat(key, {D(dt), D(rel), D(err)}));
      } catch (const StabilityViolation& e) {
        out.issues.push_back({IssueKind::Stability, where + " dt=" + format_double(dt), e.what()});
        skipped = true;
      } catch (const Error& e) {
        out.issues.push_back({IssueKind::Numerical, where + " dt=" + format_double(dt), e.what()});
        failed = true;
      }
    }
    FitCells f;
    if (failed) {
      f.status = "numerical failure";
    } else if (skipped) {
      f.status = "skipped: stability";
    } else {
      f = fit_cells(pts);
    }
    out.main.push_back(concat(key, f.cells()));
  });
}

// ---- pde-decay

struct DecayTask {
  int J;
  SchemeChoice sc;
  ThetaPair t;
  double frac;
};

std::vector<DecayTask> decay_tasks(const ExperimentConfig& cfg) {
  std::vector<DecayTask> out;
  for (int J : cfg.j_list)
    for (const auto& sc : scheme_choices(cfg))
      for (const auto& te : cfg.thetas)
        for (double f : cfg.dt_cfl_fractions) out.push_back({J, sc, te.resolve(cfg.n_ratios.front()), f});
  return out;
}

PdeParams pde_params(const ExperimentConfig& cfg, int J) { return {cfg.nu, cfg.c, cfg.n_ratios.front(), cfg.length, J}; }

std::optional<std::string> cfl_problem(const PdeParams& p, ThetaPair t, double dt) {
  if (std::min(t.fast(), t.slow()) >= 0.5) return std::nullopt;
  if (dt > p.cfl() * (1.0 + 1e-12))
    return "dt = " + format_double(dt) + " exceeds CFL(J=" + std::to_string(p.J) + ") = " + format_double(p.cfl());
  return std::nullopt;
}

RunResult run_pde_decay(const ExperimentConfig& cfg, int jobs, std::uint64_t seed) {
  const std::vector<std::string> key_head{"nu",      "c",       "n_ratio", "length",          "J",
                                          "scheme",  "strang_order", "theta_f", "theta_s", "dt_cfl_fraction"};
  auto main = make_table(concat(key_head, {"dt", "seed", "gamma_fit", "r2", "samples_used", "gamma_tau_plus",
                                           "fit_rel_diff", "gamma0", "lower_bound", "tau_plus", "proved_scope",
                                           "status"}),
                         key_head.size());
  auto points = make_table(concat(key_head, {"t", "l2_norm"}), key_head.size() + 1);
  return run_tasks(decay_tasks(cfg), jobs, std::move(main), std::move(points), [&](const DecayTask& k, Slot& out) {
    const PdeParams p = pde_params(cfg, k.J);
    const auto spec = k.sc.spec(p.n_ratio, k.t);
    const double dt = k.frac * p.cfl();
    const Cells key{D(cfg.nu), D(cfg.c), I(p.n_ratio), D(cfg.length), I(k.J), I(k.sc.number),
                    S(k.sc.order_label()), D(k.t.fast()), D(k.t.slow()), D(k.frac)};
    const std::string where = "J=" + std::to_string(k.J) + " " + describe(k.sc, k.t) + " dt/CFL=" + format_double(k.frac);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    auto bail = [&](IssueKind kind, const std::string& msg, const char* status) {
      out.issues.push_back({kind, where, msg});
      out.main.push_back(concat(key, {D(dt), I(static_cast<long long>(seed)), D(nan), D(nan), I(0), D(nan), D(nan),
                                      D(nan), D(nan), D(nan), I(0), S(status)}));
    };
    if (auto prob = cfl_problem(p, k.t, dt)) return bail(IssueKind::Stability, *prob, "skipped: stability");
    try {
      const auto pred = pde_decay_rate(p, spec, dt);
      const double call = pde_step_duration(spec, dt);
      const long calls = static_cast<long>(std::ceil(cfg.t_final / call));
      const auto series = pde_norm_series(p, spec, dt, random_field(k.J, seed), calls, cfg.stride);
      const auto fit = fit_decay_rate(series, cfg.transient_fraction);
      for (const auto& [t, norm] : series) out.points.push_back(concat(key, {D(t), D(norm)}));
      out.main.push_back(concat(key, {D(dt), I(static_cast<long long>(seed)), D(fit.gamma_hat), D(fit.r2), I(fit.used),
                                      D(pred.gamma_hat), D(std::abs(fit.gamma_hat - pred.gamma_hat) / pred.gamma_hat),
                                      D(pred.gamma0_predicted), D(pred.lower_bound), D(pred.tau_plus_mu1),
                                      I(pred.proved_scope), S("ok")}));
    } catch (const StabilityViolation& e) {
      bail(IssueKind::Stability, e.what(), "skipped: stability");
    } catch (const Error& e) {
      bail(IssueKind::Numerical, e.what(), "numerical failure");
    }
  });
}

// ---- pde-inhomogeneous-order

struct StationaryTask {
  std::size_t case_index;
  int J;
};

RunResult run_pde_order(const ExperimentConfig& cfg, int jobs) {
  const std::vector<std::string> case_head{"nu",      "c",       "n_ratio", "length",   "case",    "scheme", "theta_f",
                                           "theta_s", "dt_rule", "dt_value", "u_left", "u_right", "v_left", "v_right"};
  auto main = make_table(concat(case_head, {"order_sup", "order_l2", "residual_rms_sup", "points_used", "status"}), 5);
  auto points = make_table(concat(case_head, {"J", "dx", "dt", "err_sup", "err_l2"}), 5);
  auto case_key = [&](const PdeCase& pc) {
    const bool fixed = pc.dt_rule.kind == DtRule::Kind::Fixed;
    return Cells{D(cfg.nu),       D(cfg.c),         I(cfg.n_ratios.front()), D(cfg.length),   S(pc.label),
                 I(pc.scheme),    D(pc.thetas.fast()), D(pc.thetas.slow()), S(fixed ? "fixed" : "diffusive"),
                 D(pc.dt_rule.value), D(pc.bc.u_l), D(pc.bc.u_r), D(pc.bc.v_l), D(pc.bc.v_r)};
  };
  std::vector<StationaryTask> tasks;
  for (std::size_t c = 0; c < cfg.cases.size(); ++c)
    for (int J : cfg.j_list) tasks.push_back({c, J});

  RunResult r = run_tasks(tasks, jobs, make_table(main.header, main.key_columns), std::move(points),
                          [&](const StationaryTask& k, Slot& out) {
                            const PdeCase& pc = cfg.cases[k.case_index];
                            const PdeParams p = pde_params(cfg, k.J);
                            const auto spec = numbered_scheme(pc.scheme, p.n_ratio, pc.thetas);
                            const double dt = pc.dt_rule.dt(p);
                            const std::string where = "case " + pc.label + " J=" + std::to_string(k.J);
                            if (auto prob = cfl_problem(p, pc.thetas, dt)) {
                              out.issues.push_back({IssueKind::Stability, where, *prob});
                              return;
                            }
                            try {
                              const GridField num = pde_asymptotic_state(p, spec, dt, pc.bc);
                              const GridField diff = num - pde_exact_stationary(p, pc.bc);
                              out.points.push_back(concat(case_key(pc), {I(k.J), D(p.dx()), D(dt), D(diff.sup_norm()),
                                                                         D(diff.l2_norm())}));
                            } catch (const StabilityViolation& e) {
                              out.issues.push_back({IssueKind::Stability, where, e.what()});
                            } catch (const Error& e) {
                              out.issues.push_back({IssueKind::Numerical, where, e.what()});
                            }
                          });

  // Fit each case from its gathered rows; the point table is already sorted by case then J.
  const std::size_t first_value = case_head.size();
  for (const auto& pc : cfg.cases) {
    std::vector<StationaryErrorRow> rows;
    for (const auto& row : r.points.rows) {
      if (std::get<std::string>(row.cells[4]) != pc.label) continue;
      rows.push_back({static_cast<int>(std::get<std::int64_t>(row.cells[first_value])),
                      std::get<double>(row.cells[first_value + 1]), std::get<double>(row.cells[first_value + 2]),
                      std::get<double>(row.cells[first_value + 3]), std::get<double>(row.cells[first_value + 4])});
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    Cells tail{D(nan), D(nan), D(nan), I(static_cast<long long>(rows.size())), S("ok")};
    try {
      const auto fit = fit_stationary_errors(rows);
      tail = {D(fit.sup_fit.slope), D(fit.l2_fit.slope), D(fit.sup_fit.residual_rms),
              I(static_cast<long long>(fit.sup_fit.points.size())), S("ok")};
    } catch (const DegenerateFit& e) {
      tail.back() = S(std::string("degenerate: ") + e.what());
    }
    r.main.add(concat(case_key(pc), tail));
  }
  r.main.sort();
  return r;
}

// ---- appendix-b-bounds

struct BoundsTask {
  int J;
  ThetaPair t;
};

RunResult run_appendix_b(const ExperimentConfig& cfg, int jobs) {
  const std::vector<std::string> key_head{"nu", "c", "n_ratio", "length", "J", "theta_f", "theta_s"};
  auto main = make_table(concat(key_head, {"c_bound", "max_norm_ms", "max_norm_mf", "inv_norm_dt_min",
                                           "inv_norm_dt_max", "inv_norm_dt_ratio", "norms_within_bound", "status"}),
                         key_head.size());
  auto points = make_table(concat(key_head, {"dt_cfl_fraction", "dt", "norm_ms", "norm_mf", "c_bound", "inv_norm",
                                             "inv_norm_dt"}),
                           key_head.size() + 1);
  std::vector<BoundsTask> tasks;
  for (int J : cfg.j_list)
    for (const auto& te : cfg.thetas) tasks.push_back({J, te.resolve(cfg.n_ratios.front())});
  return run_tasks(tasks, jobs, std::move(main), std::move(points), [&](const BoundsTask& k, Slot& out) {
    const PdeParams p = pde_params(cfg, k.J);
    const Cells key{D(cfg.nu), D(cfg.c), I(p.n_ratio), D(cfg.length), I(k.J), D(k.t.fast()), D(k.t.slow())};
    double ms = 0.0, mf = 0.0, lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    bool ok = true;
    std::string status = "ok";
    for (double frac : cfg.dt_cfl_fractions) {
      const double dt = frac * p.cfl();
      const std::string where = "J=" + std::to_string(k.J) + " theta=(" + format_double(k.t.fast()) + "," +
                                format_double(k.t.slow()) + ") dt/CFL=" + format_double(frac);
      if (auto prob = cfl_problem(p, k.t, dt)) {
        out.issues.push_back({IssueKind::Stability, where, *prob});
        status = "partial: stability";
        continue;
      }
      try {
        const auto b = appendix_b_bounds(p, k.t, dt);
        ms = std::max(ms, b.norm_ms);
        mf = std::max(mf, b.norm_mf);
        lo = std::min(lo, b.inv_norm * dt);
        hi = std::max(hi, b.inv_norm * dt);
        ok = ok && b.bound_c_over_dt_ok;
        out.points.push_back(concat(key, {D(frac), D(dt), D(b.norm_ms), D(b.norm_mf), D(b.c_lemma), D(b.inv_norm),
                                          D(b.inv_norm * dt)}));
      } catch (const StabilityViolation& e) {
        out.issues.push_back({IssueKind::Stability, where, e.what()});
        status = "partial: stability";
      } catch (const Error& e) {
        out.issues.push_back({IssueKind::Numerical, where, e.what()});
        status = "numerical failure";
      }
    }
    out.main.push_back(concat(key, {D(appendix_b_constant(p)), D(ms), D(mf), D(lo), D(hi), D(hi / lo), I(ok),
                                    S(status)}));
  });
}

}  // namespace

int RunResult::exit_code() const {
  bool stability = false;
  for (const auto& i : issues) {
    if (i.kind == IssueKind::Numerical) return 4;
    stability = true;
  }
  return stability ? 3 : 0;
}

std::vector<PointIssue> screen_points(const ExperimentConfig& cfg) {
  std::vector<PointIssue> out;
  if (cfg.experiment == "linear-aorder-map") return screen_aorder(cfg, map_tasks(cfg));
  if (cfg.experiment == "nonlinear-aorder") return screen_aorder(cfg, table_tasks(cfg));
  if (cfg.experiment == "pde-decay") {
    for (const auto& k : decay_tasks(cfg)) {
      const PdeParams p = pde_params(cfg, k.J);
      if (auto prob = cfl_problem(p, k.t, k.frac * p.cfl()))
        out.push_back({IssueKind::Stability, "J=" + std::to_string(k.J) + " " + describe(k.sc, k.t), *prob});
    }
  } else if (cfg.experiment == "pde-inhomogeneous-order") {
    for (const auto& pc : cfg.cases)
      for (int J : cfg.j_list) {
        const PdeParams p = pde_params(cfg, J);
        if (auto prob = cfl_problem(p, pc.thetas, pc.dt_rule.dt(p)))
          out.push_back({IssueKind::Stability, "case " + pc.label + " J=" + std::to_string(J), *prob});
      }
  } else if (cfg.experiment == "appendix-b-bounds") {
    for (int J : cfg.j_list)
      for (const auto& te : cfg.thetas)
        for (double frac : cfg.dt_cfl_fractions) {
          const PdeParams p = pde_params(cfg, J);
          const ThetaPair t = te.resolve(p.n_ratio);
          if (auto prob = cfl_problem(p, t, frac * p.cfl()))
            out.push_back({IssueKind::Stability, "J=" + std::to_string(J), *prob});
        }
  }
  return out;
}

RunResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
  const int jobs = opts.jobs.value_or(cfg.jobs);
  const std::uint64_t seed = opts.seed.value_or(cfg.seed);
  if (cfg.experiment == "linear-taylor") return run_linear_taylor(cfg, jobs);
  if (cfg.experiment == "linear-aorder-map") return run_aorder(cfg, jobs, false);
  if (cfg.experiment == "nonlinear-aorder") return run_aorder(cfg, jobs, true);
  if (cfg.experiment == "pde-decay") return run_pde_decay(cfg, jobs, seed);
  if (cfg.experiment == "pde-inhomogeneous-order") return run_pde_order(cfg, jobs);
  if (cfg.experiment == "appendix-b-bounds") return run_appendix_b(cfg, jobs);
  throw ConfigError("unknown experiment '" + cfg.experiment + "'");
}

Table issues_table(const std::vector<PointIssue>& issues) {
  Table t = make_table({"kind", "point", "message"}, 2);
  for (const auto& i : issues) t.add({S(i.kind == IssueKind::Stability ? "stability" : "numerical"), S(i.point), S(i.message)});
  return t;
}

std::vector<std::string> write_result(const RunResult& r, const std::string& out_dir, const std::string& stem) {
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  std::vector<std::string> written;
  auto put = [&](const std::string& name, const Table& t) {
    const std::string path = (dir / name).string();
    write_csv_file(path, t);
    written.push_back(path);
  };
  put(stem + ".csv", r.main);
  if (!r.points.header.empty()) put(stem + "_points.csv", r.points);
  if (!r.issues.empty()) put(stem + "_skipped.csv", issues_table(r.issues));
  return written;
}

}  // namespace lab
