#include "subcycle/nonlinear_ode.hpp"

#include <cmath>
#include <sstream>

namespace subcycle {

namespace {

constexpr double kLinearSwitch = 1e-14;

// Root of k w^2 + b w - r = 0 that tends to r / b as k -> 0 (b > 0).
double continuous_root(double k, double b, double r, const NLState& s, double dt, const char* which) {
  if (std::abs(k) < kLinearSwitch) return r / b;
  const double disc = b * b + 4.0 * k * r;
  if (disc < 0.0) {
    std::ostringstream os;
    os << which << " substep has no real root at (u, v) = (" << s.u << ", " << s.v << "), dt = " << dt;
    throw NoRealRoot(os.str(), s.u, s.v, dt);
  }
  return 2.0 * r / (b + std::sqrt(disc));
}

void check_step(double h) {
  if (!(h >= 0.0)) throw InvalidArgument("step must be >= 0");
}

}  // namespace

NonlinearModel::NonlinearModel(double c_, int n_ratio_, double kappa_) : c(c_), n_ratio(n_ratio_), kappa(kappa_) {
  if (!(c > 0.0)) throw InvalidArgument("NonlinearModel: c must be positive");
  if (n_ratio < 1) throw InvalidArgument("NonlinearModel: n_ratio must be >= 1");
}

NLExactSolution nl_invariants(const NonlinearModel& m, const NLState& s0) {
  return {s0.u + m.n_ratio * s0.v, s0.u - s0.v};
}

NLState nl_exact_solution(const NonlinearModel& m, const NLState& s0, double t) {
  if (t < 0.0) throw InvalidArgument("nl_exact_solution: t must be >= 0");
  const double n = m.n_ratio;
  const auto inv = nl_invariants(m, s0);
  // y = y0 / (1 + (e^{c(N+1)t} - 1) q)  with  q = 1 + kappa y0 / c
  const double q = 1.0 + m.kappa * inv.y0 / m.c;
  const double denom = q == 0.0 ? 1.0 : 1.0 + std::expm1(m.c * (n + 1.0) * t) * q;
  if (!(denom > 0.0)) {
    std::ostringstream os;
    os << "exact solution ceases to exist before t = " << t << " (u0 + c < v0)";
    throw BlowUp(os.str());
  }
  const double y = inv.y0 / denom;
  return {(inv.x_conserved + n * y) / (n + 1.0), (inv.x_conserved - y) / (n + 1.0)};
}

NLState nl_fast_step(const NonlinearModel& m, double theta_f, double dt_sub, const NLState& s) {
  check_step(dt_sub);
  const double a = m.n_ratio * dt_sub;
  const double y = s.u - s.v;
  // W = u_new - v solves  a theta kappa W^2 + (1 + a theta c) W - (y + E) = 0.
  const double explicit_part = a * (1.0 - theta_f) * (-m.c * y - m.kappa * y * y);
  const double w = continuous_root(a * theta_f * m.kappa, 1.0 + a * theta_f * m.c, y + explicit_part, s, dt_sub,
                                   "fast");
  return {s.v + w, s.v};
}

NLState nl_slow_step(const NonlinearModel& m, double theta_s, double dt, const NLState& s) {
  check_step(dt);
  const double y = s.u - s.v;
  // Z = u - v_new solves  dt theta kappa Z^2 + (1 + dt theta c) Z - (y - E) = 0.
  const double explicit_part = dt * (1.0 - theta_s) * (m.c * y + m.kappa * y * y);
  const double z = continuous_root(dt * theta_s * m.kappa, 1.0 + dt * theta_s * m.c, y - explicit_part, s, dt,
                                   "slow");
  return {s.u, s.u - z};
}

NLFlow nl_scheme_flow(const NonlinearModel& m, const SchemeSpec& spec, double dt) {
  const double tf = spec.thetas.fast(), ts = spec.thetas.slow();
  auto fast = [&m, tf](double h) {
    return NLFlow([m, tf, h](const NLState& s) { return nl_fast_step(m, tf, h, s); });
  };
  auto slow = [&m, ts](double h) {
    return NLFlow([m, ts, h](const NLState& s) { return nl_slow_step(m, ts, h, s); });
  };
  return compose_flows<NLFlow>(spec, fast, slow, dt);
}

NLState nl_scheme_step(const NonlinearModel& m, const SchemeSpec& spec, double dt, const NLState& s) {
  return nl_scheme_flow(m, spec, dt)(s);
}

NLRunResult nl_run_to_equilibrium(const NonlinearModel& m, const SchemeSpec& spec, const NLState& s0, double dt,
                                  double t_final) {
  if (!(dt > 0.0) || t_final < 0.0) throw InvalidArgument("nl_run_to_equilibrium: bad time arguments");
  const double ratio = t_final / dt;
  const long n_end = std::lround(ratio);
  if (std::abs(ratio - static_cast<double>(n_end)) > 1e-9 * std::max(1.0, ratio))
    throw InvalidArgument("t_final is not an integer multiple of dt");

  const NLFlow step = nl_scheme_flow(m, spec, dt);
  NLState s = s0;
  for (long n = 0; n < n_end; ++n) {
    try {
      s = step(s);
    } catch (const NoRealRoot& e) {
      throw NoRealRoot(std::string(e.what()) + " at step " + std::to_string(n), e.u(), e.v(), e.dt(), n);
    }
    if (!std::isfinite(s.u) || !std::isfinite(s.v)) {
      throw BlowUp("numerical trajectory left the finite range at step " + std::to_string(n));
    }
  }
  const NLState ex = nl_exact_solution(m, s0, t_final);
  return {s, std::hypot(s.u - ex.u, s.v - ex.v), n_end};
}

}  // namespace subcycle
