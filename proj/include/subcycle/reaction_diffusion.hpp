#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "subcycle/analysis.hpp"
#include "subcycle/errors.hpp"
#include "subcycle/mat2.hpp"
#include "subcycle/splitting.hpp"

namespace subcycle {

/// Slow equation  v_t = nu v_xx + c (u - v),  fast equation  u_t = N nu u_xx + N c (v - u)  on (0, L).
struct PdeParams {
  PdeParams(double nu, double c, int n_ratio, double length, int J);

  double nu;
  double c;
  int n_ratio;
  double length;
  int J;

  double dx() const { return length / (J + 1); }
  /// 4 nu / dx^2, the top of the diffusion spectrum.
  double extra_stiffness() const { return 4.0 * nu / (dx() * dx()); }
  /// 1 / (c + 4 nu / dx^2).
  double cfl() const;
  PdeParams with_J(int j) const { return {nu, c, n_ratio, length, j}; }
};

struct DirichletData {
  double u_l = 0.0, u_r = 0.0, v_l = 0.0, v_r = 0.0;

  bool homogeneous() const { return u_l == 0.0 && u_r == 0.0 && v_l == 0.0 && v_r == 0.0; }
};

/// Interior values laid out as (U_1..U_J, V_1..V_J).
struct GridField {
  Eigen::VectorXd w;

  GridField() = default;
  explicit GridField(int J) : w(Eigen::VectorXd::Zero(2 * J)) {}
  explicit GridField(Eigen::VectorXd values);

  int J() const { return static_cast<int>(w.size() / 2); }
  auto u() { return w.head(J()); }
  auto v() { return w.tail(J()); }
  auto u() const { return w.head(J()); }
  auto v() const { return w.tail(J()); }

  /// sqrt(sum w_i^2 / (J+1)).
  double l2_norm() const;
  double sup_norm() const;

  friend GridField operator+(const GridField& a, const GridField& b) { return GridField(Eigen::VectorXd(a.w + b.w)); }
  friend GridField operator-(const GridField& a, const GridField& b) { return GridField(Eigen::VectorXd(a.w - b.w)); }
  friend GridField operator*(double k, const GridField& a) { return GridField(Eigen::VectorXd(k * a.w)); }
};

/// Operator diag*I + off*(shift up + shift down) on J points, i.e. a I + b A / dx^2
/// with A = toeplitz(-1, 2, -1).
class TriDiagOp {
 public:
  TriDiagOp(int J, double diag, double off);
  static TriDiagOp shifted_laplacian(int J, double a, double b, double dx);

  int J() const { return J_; }
  double diag() const { return diag_; }
  double off() const { return off_; }

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  /// Thomas algorithm.
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  Eigen::MatrixXd dense() const;

 private:
  int J_;
  double diag_;
  double off_;
};

/// lambda_j = 4 sin^2(j pi / (2 (J+1))), j = 1..J.
double grid_eigenvalue(int j, int J);
/// mu_j = c + nu lambda_j / dx^2.
double modal_rate(const PdeParams& p, int j);

/// Sine transform: xhat_j = 2/(J+1) sum_i x_i sin(i j pi / (J+1)).
Eigen::VectorXd sine_coefficients(const Eigen::VectorXd& x);
Eigen::VectorXd sine_synthesis(const Eigen::VectorXd& xhat);

GridField pde_fast_step(const PdeParams& p, double theta_f, double dt_sub, const GridField& w, const DirichletData& bc);
GridField pde_slow_step(const PdeParams& p, double theta_s, double dt, const GridField& w, const DirichletData& bc);

using PdeFlow = StateMap<GridField>;

/// One application of the recursion W -> M W + Upsilon. Subcycled schemes cover dt,
/// the others cover dt / N.
PdeFlow pde_scheme_flow(const PdeParams& p, const SchemeSpec& spec, double dt, const DirichletData& bc);
GridField pde_scheme_step(const PdeParams& p, const SchemeSpec& spec, double dt, const GridField& w,
                          const DirichletData& bc);

/// Time covered by one call of pde_scheme_step.
double pde_step_duration(const SchemeSpec& spec, double dt);

/// Affine map on the pair (uhat_j, vhat_j) of sine coefficients.
struct Affine2 {
  Mat2 m = Mat2::identity();
  Vec2 b{};
};

template <>
struct FlowAlgebra<Affine2> {
  static Affine2 compose(const Affine2& later, const Affine2& earlier) {
    return {later.m * earlier.m, later.m * earlier.b + later.b};
  }
  static Affine2 average(const Affine2& a, const Affine2& b) { return {0.5 * (a.m + b.m), 0.5 * (a.b + b.b)}; }
  static Affine2 power(const Affine2& f, int n) {
    Affine2 r;
    for (int i = 0; i < n; ++i) r = compose(f, r);
    return r;
  }
};

/// Reduced dynamics of mode j under the scheme recursion.
Affine2 modal_scheme_map(const PdeParams& p, const SchemeSpec& spec, double dt, const DirichletData& bc, int j);

/// Max over modes of the spectral radius of the reduced 2x2 maps.
double modal_spectral_radius(const PdeParams& p, const SchemeSpec& spec, double dt);

/// Dense (M, Upsilon) of the recursion, assembled column by column from pde_scheme_step.
struct DenseAffine {
  Eigen::MatrixXd m;
  Eigen::VectorXd b;
};
DenseAffine assemble_scheme(const PdeParams& p, const SchemeSpec& spec, double dt, const DirichletData& bc);

/// Dense M_f (fast substep of duration dt_sub) and M_s (slow step dt), homogeneous part.
Eigen::MatrixXd dense_fast_matrix(const PdeParams& p, double theta_f, double dt_sub);
Eigen::MatrixXd dense_slow_matrix(const PdeParams& p, double theta_s, double dt);

/// Fixed point of the recursion, solved mode by mode in the sine basis.
GridField pde_asymptotic_state(const PdeParams& p, const SchemeSpec& spec, double dt, const DirichletData& bc);
/// Same fixed point via dense LU of (I - M) W = Upsilon.
GridField pde_asymptotic_state_dense(const PdeParams& p, const SchemeSpec& spec, double dt, const DirichletData& bc);

/// Closed-form stationary solution sampled at x_i = i dx.
GridField pde_exact_stationary(const PdeParams& p, const DirichletData& bc);

struct Trinome {
  double P, Q, Sigma;
  double discriminant;
  double tau_plus, tau_minus;
};

/// Per-mode quadratic of the subcycled Lie SF scheme at modal rate mu.
Trinome decay_trinome(const PdeParams& p, const ThetaPair& thetas, double dt, double mu);

struct DecayRate {
  double mu1;
  double tau_plus_mu1;
  double gamma_hat;   ///< -ln(tau_plus) / (time per call)
  double gamma0_predicted;
  double lower_bound;  ///< N nu lambda_1 / ((N+1) dx^2)
  bool proved_scope;  ///< true for the subcycled Lie SF scheme only
};

DecayRate pde_decay_rate(const PdeParams& p, const SchemeSpec& spec, double dt);

/// Discrete L2 norms of the homogeneous iterates, sampled every `stride` calls.
std::vector<std::pair<double, double>> pde_norm_series(const PdeParams& p, const SchemeSpec& spec, double dt,
                                                       const GridField& w0, long n_calls, long stride);

GridField random_field(int J, std::uint64_t seed);

struct PowerIteration {
  double radius;
  int iterations;
  bool converged;
};

PowerIteration spectral_radius_power(const PdeParams& p, const SchemeSpec& spec, double dt, double tol = 1e-10,
                                     int max_iter = 10000, std::uint64_t seed = 1);

struct DtRule {
  enum class Kind { Fixed, DiffusiveFraction };
  Kind kind = Kind::Fixed;
  double value = 0.0;

  static DtRule fixed(double dt) { return {Kind::Fixed, dt}; }
  /// value * dx^2 / (N nu).
  static DtRule diffusive(double fraction) { return {Kind::DiffusiveFraction, fraction}; }
  double dt(const PdeParams& p) const;
};

struct StationaryErrorRow {
  int J;
  double dx;
  double dt;
  double err_sup;
  double err_l2;
};

struct StationaryOrder {
  std::vector<StationaryErrorRow> rows;
  OrderFit sup_fit;  ///< slope against 1/J
  OrderFit l2_fit;
};

StationaryOrder fit_stationary_errors(const std::vector<StationaryErrorRow>& rows);

StationaryOrder pde_asymptotic_error_order(const PdeParams& base, const SchemeSpec& spec, const DtRule& rule,
                                          const DirichletData& bc, const std::vector<int>& j_list);

struct AppendixBBounds {
  double norm_ms;
  double norm_mf;
  double c_lemma;
  double inv_norm;
  bool bound_c_over_dt_ok;  ///< both norms at most c_lemma
};

/// Dense diagnostics with M_s = M_s(dt), M_f = M_f(dt/N); J <= 64.
AppendixBBounds appendix_b_bounds(const PdeParams& p, const ThetaPair& thetas, double dt);

double appendix_b_constant(const PdeParams& p);

}  // namespace subcycle
