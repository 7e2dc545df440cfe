#include "subcycle/linear_ode.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace subcycle {

namespace {

using Wide = boost::multiprecision::cpp_bin_float_50;

// Base step shrink applied on top of min(stability_h, 1/(cN)) / 8 before extrapolating.
constexpr double kTaylorStepScale = 1e-6;

void require_matching_ratio(const LinearModel& m, const SchemeSpec& spec) {
  if (m.n_ratio != spec.n_ratio)
    throw InvalidArgument("closed forms assume the subcycling count equals the model ratio N");
}

// Three-level Richardson extrapolation of a quantity f(h) = f0 + f1 h + f2 h^2 + ...
Wide richardson3(const std::function<Wide(const Wide&)>& f, const Wide& h) {
  const Wide f0 = f(h), f1 = f(h / 2), f2 = f(h / 4);
  const Wide r0 = 2 * f1 - f0;
  const Wide r1 = 2 * f2 - f1;
  return (4 * r1 - r0) / 3;
}

Wide taylor_base_step(const LinearModel& m, const SchemeSpec& spec) {
  const double stab = ode_stability_interval(spec, m.c);
  const double h = std::min(stab, 1.0 / (m.c * m.n_ratio)) / 8.0;
  return Wide(h) * Wide(kTaylorStepScale);
}

// 1 - (1 - x)^n without cancellation.
double one_minus_power(double x, int n) { return -std::expm1(n * std::log1p(-x)); }

AlphaBeta power_of_substep(double a, double b, int n) {
  const double shrink = one_minus_power(a + b, n) / (a + b);
  return {a * shrink, b * shrink};
}

}  // namespace

LinearModel::LinearModel(double c_, int n_ratio_) : c(c_), n_ratio(n_ratio_) {
  if (!(c > 0.0)) throw InvalidArgument("LinearModel: c must be positive");
  if (n_ratio < 1) throw InvalidArgument("LinearModel: n_ratio must be >= 1");
}

Mat2 scheme_matrix(const LinearModel& m, const SchemeSpec& spec, double dt) {
  return scheme_matrix_as<double>(m, spec, dt);
}

Mat2 exact_flow(const LinearModel& m, double t) {
  if (t < 0.0) throw InvalidArgument("exact_flow: t must be >= 0");
  const double n = m.n_ratio;
  const double e = std::exp(-(n + 1.0) * m.c * t);
  // P_ex = -A/(N+1) with A = [[-N, N], [1, -1]]; Q_ex = (1,1)^T (1, N)/(N+1).
  const Mat2 p{n / (n + 1.0), -n / (n + 1.0), -1.0 / (n + 1.0), 1.0 / (n + 1.0)};
  const Mat2 q{1.0 / (n + 1.0), n / (n + 1.0), 1.0 / (n + 1.0), n / (n + 1.0)};
  return e * p + q;
}

LambdaPair theta_lambdas(const LinearModel& m, const ThetaPair& thetas, double dt) {
  if (dt < 0.0) throw InvalidArgument("theta_lambdas: dt must be >= 0");
  const double x = m.c * dt;
  return {detail::checked_lambda(thetas.fast(), x, "fast"), detail::checked_lambda(thetas.slow(), x, "slow")};
}

PropagatorAnalysis analyze_propagator(const Mat2& g, double row_tol) {
  if (std::abs(g.a00 + g.a01 - 1.0) > row_tol || std::abs(g.a10 + g.a11 - 1.0) > row_tol)
    throw NotStochasticForm("propagator rows do not sum to one");
  PropagatorAnalysis a{};
  a.alpha = g.a01;
  a.beta = g.a10;
  if (!(a.beta > 0.0)) throw DegenerateSlope("beta <= 0: slope undefined");
  a.mu = 1.0 - a.alpha - a.beta;
  a.slope = a.alpha / a.beta;
  const double s = a.alpha + a.beta;
  a.q_matrix = {a.beta / s, a.alpha / s, a.beta / s, a.alpha / s};
  a.p_matrix = Mat2::identity() - a.q_matrix;
  return a;
}

AsymptoticError asymptotic_error(const PropagatorAnalysis& a, const LinearModel& m, double u0, double v0) {
  const double n = m.n_ratio;
  const double rel = std::abs(a.slope - n) / n;
  const double norm = std::sqrt(2.0) * (n / (n + 1.0)) * std::abs(u0 - v0) / (a.slope + 1.0) * rel;
  return {norm, rel};
}

double projector_error_direct(const PropagatorAnalysis& a, const LinearModel& m, double u0, double v0) {
  const double n = m.n_ratio;
  const Mat2 q_ex{1.0 / (n + 1.0), n / (n + 1.0), 1.0 / (n + 1.0), n / (n + 1.0)};
  const Vec2 d = (a.q_matrix - q_ex) * Vec2{u0, v0};
  return std::hypot(d.x, d.y);
}

AlphaBeta closed_form_alpha_beta(const LinearModel& m, const SchemeSpec& spec, double dt) {
  const int n = spec.n_ratio;
  const double tf = spec.thetas.fast(), ts = spec.thetas.slow();
  const double nc = m.n_ratio * m.c;
  // Amplifications and their complements 1 - lambda, the latter formed without subtraction.
  auto lf = [&](double h) { return theta_amplification(tf, nc * h); };
  auto ls = [&](double h) { return theta_amplification(ts, m.c * h); };
  auto kf = [&](double h) { return theta_complement(tf, nc * h); };
  auto ks = [&](double h) { return theta_complement(ts, m.c * h); };
  const bool fsf = spec.kind == Composition::StrangFSF;

  switch (scheme_number(spec)) {
    case 1: {
      const double p = std::pow(lf(dt / n), n);
      return {one_minus_power(kf(dt / n), n), ks(dt) * p};
    }
    case 2: return power_of_substep(kf(dt / n), ks(dt / n) * lf(dt / n), n);
    case 3: {
      if (fsf) {
        const double q = std::pow(lf(dt / (2.0 * n)), n), s = ls(dt);
        return {one_minus_power(kf(dt / (2.0 * n)), n) * (1.0 + q * s), ks(dt) * q};
      }
      const double a = ls(dt / 2.0), p = std::pow(lf(dt / n), n);
      return {one_minus_power(kf(dt / n), n) * a, ks(dt / 2.0) * (1.0 + a * p)};
    }
    case 4: {
      if (fsf) {
        const double q = lf(dt / (2.0 * n)), s = ls(dt / n);
        return power_of_substep(kf(dt / (2.0 * n)) * (1.0 + q * s), ks(dt / n) * q, n);
      }
      const double a = ls(dt / (2.0 * n)), p = lf(dt / n);
      return power_of_substep(kf(dt / n) * a, ks(dt / (2.0 * n)) * (1.0 + a * p), n);
    }
    case 5: {
      const double p = std::pow(lf(dt / n), n), s = ls(dt);
      return {one_minus_power(kf(dt / n), n) * (1.0 + s) / 2.0, ks(dt) * (1.0 + p) / 2.0};
    }
    case 6: {
      const double f = lf(dt / n), s = ls(dt / n);
      return power_of_substep(kf(dt / n) * (1.0 + s) / 2.0, ks(dt / n) * (1.0 + f) / 2.0, n);
    }
    default: break;
  }
  throw InvalidArgument("no tabulated alpha/beta for scheme " + scheme_label(spec));
}

double predicted_slope_coefficient(const LinearModel& m, const SchemeSpec& spec) {
  require_matching_ratio(m, spec);
  const double n = m.n_ratio, c = m.c;
  const double af = spec.thetas.fast(), as = spec.thetas.slow();
  const bool fsf = spec.kind == Composition::StrangFSF;
  switch (scheme_number(spec)) {
    case 1: return c * n * (as - af + (n + 1.0) / 2.0);
    case 2: return c * ((1.0 - af) * n + as);
    case 3:
      if (fsf) return n * c * (4.0 * as - 1.0 - 2.0 * af) / 4.0;
      return n * c * (2.0 * as - 1.0 + 2.0 - 4.0 * af) / 4.0;
    case 4:
      if (fsf) return c * (n * (1.0 - 2.0 * af) + 2.0 * (2.0 * as - 1.0)) / 4.0;
      return c * (n * (2.0 - 4.0 * af) + 2.0 * as - 1.0) / 4.0;
    case 5: return n * c * (as - af);
    case 6: return c * (n - 1.0 - 2.0 * n * af + 2.0 * as) / 2.0;
    default: break;
  }
  throw InvalidArgument("no closed-form slope coefficient for scheme " + scheme_label(spec));
}

double predicted_rate_coefficient(const LinearModel& m, const SchemeSpec& spec) {
  require_matching_ratio(m, spec);
  const double n = m.n_ratio, c2 = m.c * m.c;
  const double af = spec.thetas.fast(), as = spec.thetas.slow();
  const bool fsf = spec.kind == Composition::StrangFSF;
  switch (scheme_number(spec)) {
    case 1: return c2 * (n * (2.0 * af - 1.0) + 2.0 * as - 1.0) / 2.0;
    case 2:
    case 6: return c2 * (n * n * (2.0 * af - 1.0) + 2.0 * as - 1.0) / (2.0 * n);
    case 3:
      if (fsf) return c2 * (n * (2.0 * af - 1.0) + 2.0 * (2.0 * as - 1.0)) / 4.0;
      return c2 * (2.0 * n * (2.0 * af - 1.0) + 2.0 * as - 1.0) / 4.0;
    case 4:
      if (fsf) return c2 * (n * n * (2.0 * af - 1.0) + 2.0 * (2.0 * as - 1.0)) / (4.0 * n);
      return c2 * (2.0 * n * n * (2.0 * af - 1.0) + 2.0 * as - 1.0) / (4.0 * n);
    case 5: return c2 * (n * af + as - (n + 1.0) / 2.0);
    default: break;
  }
  throw InvalidArgument("no closed-form rate coefficient for scheme " + scheme_label(spec));
}

TaylorCheck slope_taylor_check(const LinearModel& m, const SchemeSpec& spec) {
  const double predicted = predicted_slope_coefficient(m, spec);
  const Wide n(m.n_ratio);
  auto f = [&](const Wide& h) {
    const auto g = scheme_matrix_as<Wide>(m, spec, h);
    return (g.a01 / g.a10 - n) / h;
  };
  return {static_cast<double>(richardson3(f, taylor_base_step(m, spec))), predicted};
}

TaylorCheck rate_taylor_check(const LinearModel& m, const SchemeSpec& spec) {
  const double predicted = predicted_rate_coefficient(m, spec);
  const Wide rate = Wide(m.c) * Wide(m.n_ratio + 1);
  auto f = [&](const Wide& h) {
    const auto g = scheme_matrix_as<Wide>(m, spec, h);
    const Wide mu = Wide(1) - g.a01 - g.a10;
    return (mu - boost::multiprecision::exp(-rate * h)) / (h * h);
  };
  return {static_cast<double>(richardson3(f, taylor_base_step(m, spec))), predicted};
}

Mat2 conjugate_fs_sf(const Mat2& g) { return {g.a11, g.a10, g.a01, g.a00}; }

}  // namespace subcycle
