#pragma once

#include "subcycle/errors.hpp"
#include "subcycle/splitting.hpp"

namespace subcycle {

struct NLState {
  double u = 0.0;
  double v = 0.0;

  friend NLState operator+(const NLState& a, const NLState& b) { return {a.u + b.u, a.v + b.v}; }
  friend NLState operator*(double k, const NLState& a) { return {k * a.u, k * a.v}; }
};

/// u' = -N (u - v)(c + kappa (u - v)), v' = (u - v)(c + kappa (u - v)).
/// kappa = 0 recovers the linear model.
struct NonlinearModel {
  NonlinearModel(double c, int n_ratio, double kappa = 1.0);

  double c;
  int n_ratio;
  double kappa;
};

struct NLExactSolution {
  double x_conserved;  ///< u + N v
  double y0;           ///< u - v at t = 0
};

NLExactSolution nl_invariants(const NonlinearModel& m, const NLState& s0);

NLState nl_exact_solution(const NonlinearModel& m, const NLState& s0, double t);

/// Theta-scheme on the fast equation over a physical duration dt_sub; v is frozen.
NLState nl_fast_step(const NonlinearModel& m, double theta_f, double dt_sub, const NLState& s);

/// Theta-scheme on the slow equation over dt; u is frozen.
NLState nl_slow_step(const NonlinearModel& m, double theta_s, double dt, const NLState& s);

using NLFlow = StateMap<NLState>;

/// Composite step over dt for any scheme.
NLFlow nl_scheme_flow(const NonlinearModel& m, const SchemeSpec& spec, double dt);

NLState nl_scheme_step(const NonlinearModel& m, const SchemeSpec& spec, double dt, const NLState& s);

struct NLRunResult {
  NLState state_final;
  double eps_as;
  long steps;
};

/// Iterates t_final / dt steps and measures the distance to the exact state at t_final.
NLRunResult nl_run_to_equilibrium(const NonlinearModel& m, const SchemeSpec& spec, const NLState& s0, double dt,
                                  double t_final);

}  // namespace subcycle
