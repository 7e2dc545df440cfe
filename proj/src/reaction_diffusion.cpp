#include "subcycle/reaction_diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace subcycle {

namespace {

constexpr double kPi = std::numbers::pi;

// Steps above the CFL bound are only rejected when a substep has an explicit-leaning weight.
void check_cfl(const PdeParams& p, double theta, double h, const char* which) {
  if (theta >= 0.5) return;
  if (h > p.cfl() * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << which << " step " << h << " exceeds CFL(J=" << p.J << ") = " << p.cfl();
    throw CflViolation(os.str());
  }
}

void check_scheme_cfl(const PdeParams& p, const SchemeSpec& spec, double dt) {
  check_cfl(p, std::min(spec.thetas.fast(), spec.thetas.slow()), dt, "scheme");
}

void check_field(const PdeParams& p, const GridField& w) {
  if (w.J() != p.J || w.w.size() != 2 * p.J) throw InvalidArgument("grid field size does not match J");
}

double spectral_radius2(const Mat2& m) {
  const double tr = m.trace(), det = m.det();
  const double disc = tr * tr - 4.0 * det;
  if (disc < 0.0) return std::sqrt(std::abs(det));
  const double s = std::sqrt(disc);
  return std::max(std::abs(0.5 * (tr + s)), std::abs(0.5 * (tr - s)));
}

// sinh(a) / sinh(b) for 0 <= a <= b, without overflow.
double sinh_ratio(double a, double b) {
  if (b == 0.0) return 0.0;
  return std::exp(a - b) * (-std::expm1(-2.0 * a)) / (-std::expm1(-2.0 * b));
}

Eigen::VectorXd boundary_vector(int J, double left, double right) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(J);
  e(0) += left;
  e(J - 1) += right;
  return e;
}

}  // namespace

PdeParams::PdeParams(double nu_, double c_, int n_ratio_, double length_, int J_)
    : nu(nu_), c(c_), n_ratio(n_ratio_), length(length_), J(J_) {
  if (!(nu > 0.0) || !(c > 0.0) || !(length > 0.0)) throw InvalidArgument("PdeParams: nu, c, L must be positive");
  if (n_ratio < 1 || J < 1) throw InvalidArgument("PdeParams: N and J must be >= 1");
}

double PdeParams::cfl() const { return pde_stability_interval(c, extra_stiffness()); }

GridField::GridField(Eigen::VectorXd values) : w(std::move(values)) {
  if (w.size() % 2 != 0) throw InvalidArgument("grid field must hold 2J values");
}

double GridField::l2_norm() const { return std::sqrt(w.squaredNorm() / (J() + 1)); }

double GridField::sup_norm() const { return w.size() == 0 ? 0.0 : w.cwiseAbs().maxCoeff(); }

TriDiagOp::TriDiagOp(int J, double diag, double off) : J_(J), diag_(diag), off_(off) {
  if (J < 1) throw InvalidArgument("TriDiagOp: J must be >= 1");
}

TriDiagOp TriDiagOp::shifted_laplacian(int J, double a, double b, double dx) {
  const double k = b / (dx * dx);
  return {J, a + 2.0 * k, -k};
}

Eigen::VectorXd TriDiagOp::apply(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y = diag_ * x;
  for (int i = 0; i + 1 < J_; ++i) {
    y(i) += off_ * x(i + 1);
    y(i + 1) += off_ * x(i);
  }
  return y;
}

Eigen::VectorXd TriDiagOp::solve(const Eigen::VectorXd& rhs) const {
  std::vector<double> cp(J_);
  Eigen::VectorXd x(J_);
  double piv = diag_;
  if (piv == 0.0) throw SolveFailure("zero pivot in tridiagonal solve");
  cp[0] = off_ / piv;
  x(0) = rhs(0) / piv;
  for (int i = 1; i < J_; ++i) {
    piv = diag_ - off_ * cp[i - 1];
    if (piv == 0.0) throw SolveFailure("zero pivot in tridiagonal solve");
    cp[i] = off_ / piv;
    x(i) = (rhs(i) - off_ * x(i - 1)) / piv;
  }
  for (int i = J_ - 2; i >= 0; --i) x(i) -= cp[i] * x(i + 1);
  return x;
}

Eigen::MatrixXd TriDiagOp::dense() const {
  Eigen::MatrixXd m = diag_ * Eigen::MatrixXd::Identity(J_, J_);
  for (int i = 0; i + 1 < J_; ++i) m(i, i + 1) = m(i + 1, i) = off_;
  return m;
}

double grid_eigenvalue(int j, int J) {
  const double s = std::sin(j * kPi / (2.0 * (J + 1)));
  return 4.0 * s * s;
}

double modal_rate(const PdeParams& p, int j) { return p.c + p.nu * grid_eigenvalue(j, p.J) / (p.dx() * p.dx()); }

Eigen::VectorXd sine_coefficients(const Eigen::VectorXd& x) {
  const int J = static_cast<int>(x.size());
  Eigen::VectorXd out = Eigen::VectorXd::Zero(J);
  for (int j = 1; j <= J; ++j) {
    double acc = 0.0;
    for (int i = 1; i <= J; ++i) acc += x(i - 1) * std::sin(static_cast<double>(i) * j * kPi / (J + 1));
    out(j - 1) = 2.0 * acc / (J + 1);
  }
  return out;
}

Eigen::VectorXd sine_synthesis(const Eigen::VectorXd& xhat) {
  const int J = static_cast<int>(xhat.size());
  Eigen::VectorXd out = Eigen::VectorXd::Zero(J);
  for (int i = 1; i <= J; ++i) {
    double acc = 0.0;
    for (int j = 1; j <= J; ++j) acc += xhat(j - 1) * std::sin(static_cast<double>(i) * j * kPi / (J + 1));
    out(i - 1) = acc;
  }
  return out;
}

GridField pde_fast_step(const PdeParams& p, double theta_f, double dt_sub, const GridField& w,
                        const DirichletData& bc) {
  check_field(p, w);
  const double h = p.n_ratio * dt_sub;
  check_cfl(p, theta_f, h, "fast");
  const double k = p.nu / (p.dx() * p.dx());
  const TriDiagOp rate(p.J, p.c + 2.0 * k, -k);
  const TriDiagOp lhs(p.J, 1.0 + theta_f * h * rate.diag(), theta_f * h * rate.off());
  Eigen::VectorXd rhs = w.u() - (1.0 - theta_f) * h * rate.apply(w.u()) + p.c * h * w.v();
  rhs += k * h * boundary_vector(p.J, bc.u_l, bc.u_r);
  GridField out = w;
  out.u() = lhs.solve(rhs);
  return out;
}

GridField pde_slow_step(const PdeParams& p, double theta_s, double dt, const GridField& w, const DirichletData& bc) {
  check_field(p, w);
  check_cfl(p, theta_s, dt, "slow");
  const double k = p.nu / (p.dx() * p.dx());
  const TriDiagOp rate(p.J, p.c + 2.0 * k, -k);
  const TriDiagOp lhs(p.J, 1.0 + theta_s * dt * rate.diag(), theta_s * dt * rate.off());
  Eigen::VectorXd rhs = w.v() - (1.0 - theta_s) * dt * rate.apply(w.v()) + p.c * dt * w.u();
  rhs += k * dt * boundary_vector(p.J, bc.v_l, bc.v_r);
  GridField out = w;
  out.v() = lhs.solve(rhs);
  return out;
}

PdeFlow pde_scheme_flow(const PdeParams& p, const SchemeSpec& spec, double dt, const DirichletData& bc) {
  if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
  check_scheme_cfl(p, spec, dt);
  const double tf = spec.thetas.fast(), ts = spec.thetas.slow();
  auto fast = [&p, &bc, tf](double h) {
    return PdeFlow([p, bc, tf, h](const GridField& w) { return pde_fast_step(p, tf, h, w, bc); });
  };
  auto slow = [&p, &bc, ts](double h) {
    return PdeFlow([p, bc, ts, h](const GridField& w) { return pde_slow_step(p, ts, h, w, bc); });
  };
  return compose_substep<PdeFlow>(spec, fast, slow, dt);
}

GridField pde_scheme_step(const PdeParams& p, const SchemeSpec& spec, double dt, const GridField& w,
                          const DirichletData& bc) {
  return pde_scheme_flow(p, spec, dt, bc)(w);
}

double pde_step_duration(const SchemeSpec& spec, double dt) { return spec.subcycled ? dt : dt / spec.n_ratio; }

Affine2 modal_scheme_map(const PdeParams& p, const SchemeSpec& spec, double dt, const DirichletData& bc, int j) {
  if (j < 1 || j > p.J) throw InvalidArgument("mode index out of range");
  if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
  const double mu = modal_rate(p, j);
  const double k = p.nu / (p.dx() * p.dx());
  const double sj = 2.0 / (p.J + 1) * std::sin(j * kPi / (p.J + 1));
  const double sJ = 2.0 / (p.J + 1) * std::sin(static_cast<double>(p.J) * j * kPi / (p.J + 1));
  const double bu = bc.u_l * sj + bc.u_r * sJ;
  const double bv = bc.v_l * sj + bc.v_r * sJ;
  const double tf = spec.thetas.fast(), ts = spec.thetas.slow();

  auto fast = [&](double h_sub) {
    const double h = p.n_ratio * h_sub;
    const double phi = 1.0 + tf * h * mu, psi = 1.0 - (1.0 - tf) * h * mu;
    return Affine2{{psi / phi, p.c * h / phi, 0.0, 1.0}, {k * h * bu / phi, 0.0}};
  };
  auto slow = [&](double h) {
    const double phi = 1.0 + ts * h * mu, psi = 1.0 - (1.0 - ts) * h * mu;
    return Affine2{{1.0, 0.0, p.c * h / phi, psi / phi}, {0.0, k * h * bv / phi}};
  };
  return compose_substep<Affine2>(spec, fast, slow, dt);
}

double modal_spectral_radius(const PdeParams& p, const SchemeSpec& spec, double dt) {
  double r = 0.0;
  for (int j = 1; j <= p.J; ++j) r = std::max(r, spectral_radius2(modal_scheme_map(p, spec, dt, {}, j).m));
  return r;
}

DenseAffine assemble_scheme(const PdeParams& p, const SchemeSpec& spec, double dt, const DirichletData& bc) {
  const PdeFlow step = pde_scheme_flow(p, spec, dt, bc);
  const int n = 2 * p.J;
  DenseAffine out;
  out.b = step(GridField(p.J)).w;
  out.m.resize(n, n);
  for (int col = 0; col < n; ++col) {
    GridField e(p.J);
    e.w(col) = 1.0;
    out.m.col(col) = step(e).w - out.b;
  }
  return out;
}

Eigen::MatrixXd dense_fast_matrix(const PdeParams& p, double theta_f, double dt_sub) {
  const int J = p.J;
  const double h = p.n_ratio * dt_sub;
  const Eigen::MatrixXd K = TriDiagOp::shifted_laplacian(J, p.c, p.nu, p.dx()).dense();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(J, J);
  const Eigen::MatrixXd c_inv = (I + theta_f * h * K).inverse();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * J, 2 * J);
  m.topLeftCorner(J, J) = c_inv * (I - (1.0 - theta_f) * h * K);
  m.topRightCorner(J, J) = p.c * h * c_inv;
  m.bottomRightCorner(J, J) = I;
  return m;
}

Eigen::MatrixXd dense_slow_matrix(const PdeParams& p, double theta_s, double dt) {
  const int J = p.J;
  const Eigen::MatrixXd K = TriDiagOp::shifted_laplacian(J, p.c, p.nu, p.dx()).dense();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(J, J);
  const Eigen::MatrixXd c_inv = (I + theta_s * dt * K).inverse();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * J, 2 * J);
  m.topLeftCorner(J, J) = I;
  m.bottomLeftCorner(J, J) = p.c * dt * c_inv;
  m.bottomRightCorner(J, J) = c_inv * (I - (1.0 - theta_s) * dt * K);
  return m;
}

GridField pde_asymptotic_state(const PdeParams& p, const SchemeSpec& spec, double dt, const DirichletData& bc) {
  check_scheme_cfl(p, spec, dt);
  const int J = p.J;
  Eigen::VectorXd uhat(J), vhat(J);
  for (int j = 1; j <= J; ++j) {
    const Affine2 a = modal_scheme_map(p, spec, dt, bc, j);
    if (spectral_radius2(a.m) >= 1.0) {
      std::ostringstream os;
      os << "mode " << j << " of the recursion is not contracting";
      throw SingularSystem(os.str());
    }
    const Mat2 s = Mat2::identity() - a.m;
    const double det = s.det();
    uhat(j - 1) = (s.a11 * a.b.x - s.a01 * a.b.y) / det;
    vhat(j - 1) = (-s.a10 * a.b.x + s.a00 * a.b.y) / det;
  }
  GridField out(J);
  out.u() = sine_synthesis(uhat);
  out.v() = sine_synthesis(vhat);
  return out;
}

GridField pde_asymptotic_state_dense(const PdeParams& p, const SchemeSpec& spec, double dt, const DirichletData& bc) {
  const DenseAffine a = assemble_scheme(p, spec, dt, bc);
  const Eigen::MatrixXd s = Eigen::MatrixXd::Identity(a.m.rows(), a.m.cols()) - a.m;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(s);
  if (!lu.isInvertible()) throw SingularSystem("I - M is singular");
  return GridField(Eigen::VectorXd(lu.solve(a.b)));
}

GridField pde_exact_stationary(const PdeParams& p, const DirichletData& bc) {
  const double alpha = std::sqrt(p.nu / (2.0 * p.c));
  const double L = p.length;
  GridField out(p.J);
  for (int i = 1; i <= p.J; ++i) {
    const double x = i * p.dx();
    const double mean = 0.5 * (bc.u_l + bc.v_l) + (bc.u_r + bc.v_r - bc.u_l - bc.v_l) * x / (2.0 * L);
    const double diff = (bc.u_l - bc.v_l) * sinh_ratio((L - x) / alpha, L / alpha) +
                        (bc.u_r - bc.v_r) * sinh_ratio(x / alpha, L / alpha);
    out.w(i - 1) = mean + 0.5 * diff;
    out.w(p.J + i - 1) = mean - 0.5 * diff;
  }
  return out;
}

Trinome decay_trinome(const PdeParams& p, const ThetaPair& thetas, double dt, double mu) {
  const int n = p.n_ratio;
  const double phi_f = 1.0 + thetas.fast() * dt * mu, psi_f = 1.0 - (1.0 - thetas.fast()) * dt * mu;
  const double phi_s = 1.0 + thetas.slow() * dt * mu, psi_s = 1.0 - (1.0 - thetas.slow()) * dt * mu;
  const double r = psi_f / phi_f;
  double geometric = 0.0, rk = 1.0;
  for (int k = 0; k < n; ++k) {
    geometric += rk;
    rk *= r;
  }
  Trinome t{};
  t.P = rk;
  t.Q = psi_s / phi_s;
  t.Sigma = p.c * p.c * dt * dt / (phi_f * phi_s) * geometric;
  const double s = t.P + t.Q + t.Sigma;
  t.discriminant = s * s - 4.0 * t.P * t.Q;
  if (t.discriminant < 0.0) throw NegativeDiscriminant("decay trinome has a negative discriminant");
  const double root = std::sqrt(t.discriminant);
  t.tau_plus = 0.5 * (s + root);
  t.tau_minus = 0.5 * (s - root);
  return t;
}

DecayRate pde_decay_rate(const PdeParams& p, const SchemeSpec& spec, double dt) {
  check_scheme_cfl(p, spec, dt);
  DecayRate d{};
  const double n = p.n_ratio;
  const double lambda1 = grid_eigenvalue(1, p.J);
  d.mu1 = modal_rate(p, 1);
  d.proved_scope = spec.kind == Composition::LieSF && spec.subcycled && spec.n_ratio == p.n_ratio;
  if (d.proved_scope) {
    d.tau_plus_mu1 = decay_trinome(p, spec.thetas, dt, d.mu1).tau_plus;
  } else {
    d.tau_plus_mu1 = spectral_radius2(modal_scheme_map(p, spec, dt, {}, 1).m);
  }
  d.gamma_hat = -std::log(d.tau_plus_mu1) / pde_step_duration(spec, dt);
  d.gamma0_predicted =
      ((n + 1.0) * d.mu1 - std::sqrt((n - 1.0) * (n - 1.0) * d.mu1 * d.mu1 + 4.0 * n * p.c * p.c)) / 2.0;
  d.lower_bound = n * p.nu * lambda1 / ((n + 1.0) * p.dx() * p.dx());
  return d;
}

std::vector<std::pair<double, double>> pde_norm_series(const PdeParams& p, const SchemeSpec& spec, double dt,
                                                       const GridField& w0, long n_calls, long stride) {
  if (stride < 1) throw InvalidArgument("stride must be >= 1");
  const PdeFlow step = pde_scheme_flow(p, spec, dt, {});
  const double tau = pde_step_duration(spec, dt);
  std::vector<std::pair<double, double>> out;
  GridField w = w0;
  out.emplace_back(0.0, w.l2_norm());
  for (long n = 1; n <= n_calls; ++n) {
    w = step(w);
    if (n % stride == 0) out.emplace_back(n * tau, w.l2_norm());
  }
  return out;
}

GridField random_field(int J, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  GridField w(J);
  for (int i = 0; i < 2 * J; ++i) w.w(i) = dist(rng);
  return w;
}

PowerIteration spectral_radius_power(const PdeParams& p, const SchemeSpec& spec, double dt, double tol, int max_iter,
                                     std::uint64_t seed) {
  const PdeFlow step = pde_scheme_flow(p, spec, dt, {});
  GridField x = random_field(p.J, seed);
  x.w.normalize();
  double prev = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    GridField y = step(x);
    const double r = y.w.norm();
    if (r == 0.0) return {0.0, it, true};
    y.w /= r;
    x = std::move(y);
    if (it > 1 && std::abs(r - prev) <= tol * r) return {r, it, true};
    prev = r;
  }
  return {prev, max_iter, false};
}

double DtRule::dt(const PdeParams& p) const {
  if (kind == Kind::Fixed) return value;
  return value * p.dx() * p.dx() / (p.n_ratio * p.nu);
}

StationaryOrder fit_stationary_errors(const std::vector<StationaryErrorRow>& rows) {
  std::vector<std::pair<double, double>> sup, l2;
  for (const auto& r : rows) {
    sup.emplace_back(1.0 / r.J, r.err_sup);
    l2.emplace_back(1.0 / r.J, r.err_l2);
  }
  StationaryOrder out;
  out.rows = rows;
  out.sup_fit = fit_order(sup);
  out.l2_fit = fit_order(l2);
  return out;
}

StationaryOrder pde_asymptotic_error_order(const PdeParams& base, const SchemeSpec& spec, const DtRule& rule,
                                          const DirichletData& bc, const std::vector<int>& j_list) {
  std::vector<StationaryErrorRow> rows;
  for (int J : j_list) {
    const PdeParams p = base.with_J(J);
    const double dt = rule.dt(p);
    const GridField num = pde_asymptotic_state(p, spec, dt, bc);
    const GridField diff = num - pde_exact_stationary(p, bc);
    rows.push_back({J, p.dx(), dt, diff.sup_norm(), diff.l2_norm()});
  }
  return fit_stationary_errors(rows);
}

double appendix_b_constant(const PdeParams& p) {
  const double r = p.c / (p.c + 16.0 * p.nu / (p.length * p.length));
  return std::sqrt(2.0 * (2.0 + r * r));
}

AppendixBBounds appendix_b_bounds(const PdeParams& p, const ThetaPair& thetas, double dt) {
  if (p.J > 64) throw InvalidArgument("appendix_b_bounds: dense diagnostics limited to J <= 64");
  check_cfl(p, std::min(thetas.fast(), thetas.slow()), dt, "scheme");
  const Eigen::MatrixXd ms = dense_slow_matrix(p, thetas.slow(), dt);
  const Eigen::MatrixXd mf = dense_fast_matrix(p, thetas.fast(), dt / p.n_ratio);
  Eigen::MatrixXd prod = ms;
  for (int k = 0; k < p.n_ratio; ++k) prod = prod * mf;
  const Eigen::MatrixXd s = Eigen::MatrixXd::Identity(prod.rows(), prod.cols()) - prod;

  AppendixBBounds b{};
  b.norm_ms = Eigen::JacobiSVD<Eigen::MatrixXd>(ms).singularValues()(0);
  b.norm_mf = Eigen::JacobiSVD<Eigen::MatrixXd>(mf).singularValues()(0);
  const auto sv = Eigen::JacobiSVD<Eigen::MatrixXd>(s).singularValues();
  b.inv_norm = 1.0 / sv(sv.size() - 1);
  b.c_lemma = appendix_b_constant(p);
  b.bound_c_over_dt_ok = b.norm_ms <= b.c_lemma && b.norm_mf <= b.c_lemma;
  return b;
}

}  // namespace subcycle
