#pragma once

#include <sstream>

#include "subcycle/errors.hpp"
#include "subcycle/mat2.hpp"
#include "subcycle/splitting.hpp"

namespace subcycle {

/// u' = -N c (u - v), v' = c (u - v).
struct LinearModel {
  LinearModel(double c, int n_ratio);

  double c;
  int n_ratio;
};

/// Matrix of the fast sub-flow with amplification lambda: [[l, 1-l], [0, 1]].
template <class Real>
BasicMat2<Real> fast_matrix(const Real& lambda) {
  return {lambda, Real(1) - lambda, Real(0), Real(1)};
}

/// Same, with 1 - lambda supplied by the caller to avoid cancellation.
template <class Real>
BasicMat2<Real> fast_matrix(const Real& lambda, const Real& complement) {
  return {lambda, complement, Real(0), Real(1)};
}

/// Matrix of the slow sub-flow with amplification lambda: [[1, 0], [1-l, l]].
template <class Real>
BasicMat2<Real> slow_matrix(const Real& lambda) {
  return {Real(1), Real(0), Real(1) - lambda, lambda};
}

template <class Real>
BasicMat2<Real> slow_matrix(const Real& lambda, const Real& complement) {
  return {Real(1), Real(0), complement, lambda};
}

/// G[alpha, beta] = [[1-alpha, alpha], [beta, 1-beta]].
inline Mat2 stochastic_matrix(double alpha, double beta) { return {1.0 - alpha, alpha, beta, 1.0 - beta}; }

/// (1 - (1-theta) x) / (1 + theta x) with x = rate * h.
template <class Real>
Real theta_amplification(double theta, const Real& x) {
  return (Real(1) - Real(1.0 - theta) * x) / (Real(1) + Real(theta) * x);
}

/// 1 - theta_amplification(theta, x) = x / (1 + theta x).
template <class Real>
Real theta_complement(double theta, const Real& x) {
  return x / (Real(1) + Real(theta) * x);
}

namespace detail {
template <class Real>
Real checked_lambda(double theta, const Real& x, const char* which) {
  Real l = theta_amplification(theta, x);
  if (!(l > Real(0) && l <= Real(1))) {
    std::ostringstream os;
    os << which << " amplification factor " << static_cast<double>(l) << " outside (0,1] at rate*h = "
       << static_cast<double>(x);
    throw StabilityViolation(os.str());
  }
  return l;
}
}  // namespace detail

/// Fast theta-scheme substep of physical duration h (rate N c).
template <class Real>
BasicMat2<Real> fast_flow_matrix(const LinearModel& m, double theta_f, const Real& h) {
  const Real x = Real(m.n_ratio * m.c) * h;
  return fast_matrix(detail::checked_lambda(theta_f, x, "fast"), theta_complement(theta_f, x));
}

/// Slow theta-scheme substep of duration h (rate c).
template <class Real>
BasicMat2<Real> slow_flow_matrix(const LinearModel& m, double theta_s, const Real& h) {
  const Real x = Real(m.c) * h;
  return slow_matrix(detail::checked_lambda(theta_s, x, "slow"), theta_complement(theta_s, x));
}

/// G(dt) for any scheme; the Real parameter allows extended-precision evaluation.
template <class Real>
BasicMat2<Real> scheme_matrix_as(const LinearModel& m, const SchemeSpec& spec, const Real& dt) {
  if (dt == Real(0)) return BasicMat2<Real>::identity();
  auto fast = [&](const Real& h) { return fast_flow_matrix<Real>(m, spec.thetas.fast(), h); };
  auto slow = [&](const Real& h) { return slow_flow_matrix<Real>(m, spec.thetas.slow(), h); };
  return compose_flows<BasicMat2<Real>>(spec, fast, slow, dt);
}

Mat2 scheme_matrix(const LinearModel& m, const SchemeSpec& spec, double dt);

/// e^{-(N+1) c t} P_ex + Q_ex.
Mat2 exact_flow(const LinearModel& m, double t);

struct LambdaPair {
  double fast;  ///< lambda_f at dt / N
  double slow;  ///< lambda_s at dt
};

LambdaPair theta_lambdas(const LinearModel& m, const ThetaPair& thetas, double dt);

struct PropagatorAnalysis {
  double alpha;
  double beta;
  double mu;
  double slope;
  Mat2 q_matrix;
  Mat2 p_matrix;
};

PropagatorAnalysis analyze_propagator(const Mat2& g, double row_tol = 1e-10);

struct AsymptoticError {
  double eps_as_norm;
  double eps_relative;
};

AsymptoticError asymptotic_error(const PropagatorAnalysis& a, const LinearModel& m, double u0, double v0);

/// ||(Q(dt) - Q_ex) (u0, v0)||_2 evaluated from the projectors.
double projector_error_direct(const PropagatorAnalysis& a, const LinearModel& m, double u0, double v0);

struct AlphaBeta {
  double alpha;
  double beta;
};

/// Tabulated alpha, beta for schemes #1..#6 and the FSF variants of #3, #4.
AlphaBeta closed_form_alpha_beta(const LinearModel& m, const SchemeSpec& spec, double dt);

/// First-order coefficient of S(dt) = N + c1 dt + ... (requires spec.n_ratio == m.n_ratio).
double predicted_slope_coefficient(const LinearModel& m, const SchemeSpec& spec);

/// Second-order coefficient of rho(dt) = mu(dt) - exp(-c (N+1) dt).
double predicted_rate_coefficient(const LinearModel& m, const SchemeSpec& spec);

struct TaylorCheck {
  double empirical;
  double predicted;
};

TaylorCheck slope_taylor_check(const LinearModel& m, const SchemeSpec& spec);
TaylorCheck rate_taylor_check(const LinearModel& m, const SchemeSpec& spec);

/// Pi g Pi with Pi the row exchange: swaps the roles of u and v.
Mat2 conjugate_fs_sf(const Mat2& g);

}  // namespace subcycle
