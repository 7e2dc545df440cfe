#include <catch_amalgamated.hpp>

#include <cmath>

#include "subcycle/analysis.hpp"
#include "subcycle/linear_ode.hpp"

using namespace subcycle;
using Catch::Approx;

namespace {

std::vector<ThetaPair> table_thetas(int n) {
  return {{1.0, 0.0}, {0.0, 0.0}, {0.0, 1.0}, {0.5, 0.5}, {0.0, 0.25}, {(n + 1.0) / (2.0 * n), 0.75}};
}

}  // namespace

TEST_CASE("exact flow") {
  SECTION("identity at t = 0") {
    CHECK(max_abs_diff(exact_flow(LinearModel(1.0, 10), 0.0), Mat2::identity()) < 1e-15);
  }
  SECTION("long-time limit projects onto u + N v") {
    const LinearModel m(1.0, 10);
    const Vec2 w = exact_flow(m, 1000.0 / 11.0) * Vec2{5.0, 1.0};
    CHECK(w.x == Approx(15.0 / 11.0).margin(1e-12));
    CHECK(w.y == Approx(15.0 / 11.0).margin(1e-12));
  }
  SECTION("half-decay point for N = 1") {
    const Mat2 f = exact_flow(LinearModel(1.0, 1), std::log(2.0) / 2.0);
    CHECK(max_abs_diff(f, Mat2{0.75, 0.25, 0.25, 0.75}) < 1e-15);
  }
}

TEST_CASE("theta_lambdas") {
  const LinearModel m(1.0, 10);
  CHECK(theta_lambdas(m, {0.0, 0.0}, 0.1).fast == Approx(0.9));
  const auto l = theta_lambdas(m, {1.0, 1.0}, 0.1);
  CHECK(l.fast == Approx(1.0 / 1.1));
  CHECK(l.slow == Approx(1.0 / 1.1));
  const auto z = theta_lambdas(m, {0.3, 0.8}, 0.0);
  CHECK(z.fast == 1.0);
  CHECK(z.slow == 1.0);
  CHECK_THROWS_AS(theta_lambdas(m, {0.0, 0.0}, 1.5), StabilityViolation);
}

TEST_CASE("scheme matrices") {
  const LinearModel m(1.0, 10);
  SECTION("zero step gives the identity") {
    CHECK(scheme_matrix(m, numbered_scheme(1, 10, {0.5, 0.5}), 0.0) == Mat2::identity());
  }
  SECTION("scheme 2 with (1, 0) keeps alpha = N beta") {
    for (double dt : {0.3, 0.05, 0.01, 1e-3}) {
      const auto a = analyze_propagator(scheme_matrix(m, numbered_scheme(2, 10, {1.0, 0.0}), dt));
      CHECK(a.alpha == Approx(10.0 * a.beta).epsilon(1e-13));
    }
  }
  SECTION("scheme 5 is the mean of scheme 1 and its FS mirror") {
    SchemeSpec fs = numbered_scheme(1, 10, {0.2, 0.6});
    fs.kind = Composition::LieFS;
    const Mat2 g5 = scheme_matrix(m, numbered_scheme(5, 10, {0.2, 0.6}), 0.02);
    const Mat2 g1 = scheme_matrix(m, numbered_scheme(1, 10, {0.2, 0.6}), 0.02);
    CHECK(max_abs_diff(g5, 0.5 * (g1 + scheme_matrix(m, fs, 0.02))) < 1e-14);
  }
  SECTION("explicit fast step beyond its bound is rejected") {
    CHECK_THROWS_AS(scheme_matrix(m, numbered_scheme(1, 10, {0.0, 1.0}), 1.5), StabilityViolation);
  }
}

TEST_CASE("tabulated alpha and beta agree with the matrix products") {
  for (int n : {2, 10}) {
    const LinearModel m(1.0, n);
    for (const auto& t : table_thetas(n)) {
      for (int k = 1; k <= 6; ++k) {
        for (auto order : {StrangOrder::SFS, StrangOrder::FSF}) {
          const auto spec = numbered_scheme(k, n, t, order);
          for (double dt : {0.05, 0.0125}) {
            const auto a = analyze_propagator(scheme_matrix(m, spec, dt));
            const auto cf = closed_form_alpha_beta(m, spec, dt);
            CHECK(cf.alpha == Approx(a.alpha).epsilon(1e-12));
            CHECK(cf.beta == Approx(a.beta).epsilon(1e-12));
          }
        }
      }
    }
  }
}

TEST_CASE("analyze_propagator") {
  SECTION("identity has no slope") { CHECK_THROWS_AS(analyze_propagator(Mat2::identity()), DegenerateSlope); }
  SECTION("rows must sum to one") { CHECK_THROWS_AS(analyze_propagator(Mat2{0.5, 0.2, 0.1, 0.9}), NotStochasticForm); }
  SECTION("hand example") {
    const auto a = analyze_propagator(Mat2{0.9, 0.1, 0.01, 0.99});
    CHECK(a.alpha == Approx(0.1));
    CHECK(a.beta == Approx(0.01));
    CHECK(a.mu == Approx(0.89));
    CHECK(a.slope == Approx(10.0));
    CHECK(max_abs_diff(a.q_matrix, Mat2{0.01 / 0.11, 0.1 / 0.11, 0.01 / 0.11, 0.1 / 0.11}) < 1e-15);
    CHECK(max_abs_diff(a.p_matrix + a.q_matrix, Mat2::identity()) < 1e-15);
    CHECK(max_abs_diff(a.p_matrix * a.q_matrix, Mat2::zero()) < 1e-15);
  }
  SECTION("exact flow has slope N") {
    const auto a = analyze_propagator(exact_flow(LinearModel(1.0, 10), 0.1));
    CHECK(a.slope == Approx(10.0).epsilon(1e-12));
  }
}

TEST_CASE("asymptotic error") {
  const LinearModel m(1.0, 10);
  SECTION("slope N gives zero") {
    const auto e = asymptotic_error(analyze_propagator(exact_flow(m, 0.1)), m, 5.0, 1.0);
    CHECK(e.eps_as_norm < 1e-12);
    CHECK(e.eps_relative < 1e-12);
  }
  SECTION("initial data on the diagonal") {
    const auto a = analyze_propagator(scheme_matrix(m, numbered_scheme(1, 10, {0.0, 0.0}), 0.05));
    CHECK(asymptotic_error(a, m, 3.0, 3.0).eps_as_norm == 0.0);
  }
  SECTION("slope 11 for N = 10") {
    // G[alpha, beta] with alpha / beta = 11
    const auto a = analyze_propagator(stochastic_matrix(0.11, 0.01));
    const auto e = asymptotic_error(a, m, 5.0, 1.0);
    CHECK(e.eps_relative == Approx(0.1).epsilon(1e-12));
    CHECK(e.eps_as_norm == Approx(std::sqrt(2.0) * (10.0 / 11.0) * (4.0 / 12.0) * 0.1).epsilon(1e-12));
    CHECK(e.eps_as_norm == Approx(0.042855).margin(1e-6));
    CHECK(projector_error_direct(a, m, 5.0, 1.0) == Approx(e.eps_as_norm).epsilon(1e-12));
  }
  SECTION("closed form equals the direct projector difference for real schemes") {
    for (int k = 1; k <= 6; ++k) {
      const auto a = analyze_propagator(scheme_matrix(m, numbered_scheme(k, 10, {0.0, 0.25}), 0.02));
      CHECK(projector_error_direct(a, m, 5.0, 1.0) == Approx(asymptotic_error(a, m, 5.0, 1.0).eps_as_norm).epsilon(1e-10));
    }
  }
}

TEST_CASE("Taylor coefficients") {
  const LinearModel m(1.0, 10);
  SECTION("scheme 5 with equal thetas has no first-order slope error") {
    const auto t = slope_taylor_check(m, numbered_scheme(5, 10, {0.3, 0.3}));
    CHECK(t.predicted == 0.0);
    CHECK(std::abs(t.empirical) < 1e-8);
  }
  SECTION("scheme 3 with (1/4, 0)") {
    const auto s = slope_taylor_check(m, numbered_scheme(3, 10, {0.25, 0.0}));
    CHECK(s.predicted == 0.0);
    CHECK(std::abs(s.empirical) < 1e-8);
    const auto r = rate_taylor_check(m, numbered_scheme(3, 10, {0.25, 0.0}));
    CHECK(r.predicted == Approx(-11.0 / 4.0));
    CHECK(r.empirical == Approx(-11.0 / 4.0).epsilon(1e-6));
  }
  SECTION("scheme 1 Crank-Nicolson") {
    const auto s = slope_taylor_check(m, numbered_scheme(1, 10, {0.5, 0.5}));
    CHECK(s.predicted == Approx(55.0));
    CHECK(s.empirical == Approx(55.0).epsilon(1e-6));
  }
  SECTION("Crank-Nicolson rates are second order") {
    for (int k : {1, 2, 3, 4, 6}) {
      const auto r = rate_taylor_check(m, numbered_scheme(k, 10, {0.5, 0.5}));
      CHECK(r.predicted == 0.0);
      CHECK(std::abs(r.empirical) < 1e-8);
    }
    CHECK(rate_taylor_check(m, numbered_scheme(5, 10, {0.5, 0.5})).predicted == 0.0);
  }
  SECTION("FSF scheme 4 carries the opposite of the SFS-labelled coefficient") {
    // c (N (2 A_f - 1) + 2 - 4 A_s) / 4 is what the FSF variant produces, with opposite sign.
    for (const auto& t : table_thetas(10)) {
      const double labelled = (10.0 * (2.0 * t.fast() - 1.0) + 2.0 - 4.0 * t.slow()) / 4.0;
      const auto s = slope_taylor_check(m, numbered_scheme(4, 10, t, StrangOrder::FSF));
      CHECK(s.empirical == Approx(-labelled).margin(1e-8));
    }
  }
  SECTION("mismatched subcycling count has no closed form") {
    CHECK_THROWS_AS(predicted_slope_coefficient(m, numbered_scheme(1, 5, {0.5, 0.5})), InvalidArgument);
  }
}

TEST_CASE("FS/SF conjugation") {
  CHECK(conjugate_fs_sf(Mat2::identity()) == Mat2::identity());
  const Mat2 g = conjugate_fs_sf(stochastic_matrix(0.1, 0.01));
  CHECK(max_abs_diff(g, stochastic_matrix(0.01, 0.1)) < 1e-16);
  CHECK(g.det() == Approx(0.89));
  for (double l : {0.1, 0.5, 0.93}) CHECK(conjugate_fs_sf(slow_matrix(l)) == fast_matrix(l));
}

TEST_CASE("classical order on the linear model") {
  const LinearModel m(1.0, 10);
  const Vec2 x0{5.0, 1.0};
  auto dist = [](const Vec2& a, const Vec2& b) { return std::hypot(a.x - b.x, a.y - b.y); };
  auto exact = [&](double h, const Vec2& x) { return exact_flow(m, h) * x; };
  const std::vector<double> hs{0.02, 0.01, 0.005, 0.0025};
  SECTION("Lie") {
    auto step = [&](double h, const Vec2& x) { return scheme_matrix(m, numbered_scheme(1, 10, {0.5, 0.5}), h) * x; };
    CHECK(classical_order(step, exact, x0, hs, dist).local.slope == Approx(2.0).margin(0.1));
  }
  SECTION("Strang") {
    auto step = [&](double h, const Vec2& x) { return scheme_matrix(m, numbered_scheme(3, 10, {0.5, 0.5}), h) * x; };
    CHECK(classical_order(step, exact, x0, hs, dist).local.slope == Approx(3.0).margin(0.1));
  }
  SECTION("exact flow sits at the rounding floor") {
    CHECK_THROWS_AS(classical_order(exact, exact, x0, hs, dist), DegenerateFit);
  }
}
