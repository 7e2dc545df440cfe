#include <catch_amalgamated.hpp>

#include <cmath>

#include "subcycle/analysis.hpp"
#include "subcycle/linear_ode.hpp"

using namespace subcycle;
using Catch::Approx;

TEST_CASE("fit_order on synthetic power laws") {
  SECTION("h^2") {
    const auto f = fit_order({{0.1, 0.01}, {0.05, 0.0025}, {0.025, 0.000625}});
    CHECK(f.slope == Approx(2.0).margin(1e-10));
    CHECK(f.residual_rms < 1e-12);
    CHECK(f.points.size() == 3);
    CHECK(f.excluded == 0);
  }
  SECTION("c h") {
    for (double c : {1e-3, 0.5, 7.0}) {
      std::vector<std::pair<double, double>> s;
      for (double h : {0.2, 0.1, 0.05, 0.02}) s.emplace_back(h, c * h);
      const auto f = fit_order(s);
      CHECK(f.slope == Approx(1.0).margin(1e-12));
      CHECK(f.intercept == Approx(std::log10(c)).margin(1e-12));
    }
  }
  SECTION("scaling errors shifts only the intercept") {
    std::vector<std::pair<double, double>> a, b;
    for (double h : {0.1, 0.05, 0.025, 0.0125}) {
      const double e = h * h * (1.0 + h);
      a.emplace_back(h, e);
      b.emplace_back(h, 1000.0 * e);
    }
    const auto fa = fit_order(a), fb = fit_order(b);
    CHECK(fb.slope == Approx(fa.slope).margin(1e-12));
    CHECK(fb.intercept - fa.intercept == Approx(3.0).margin(1e-12));
  }
  SECTION("points are ordered by decreasing h with pair slopes") {
    const auto f = fit_order({{0.025, 0.025 * 0.025}, {0.1, 0.01}, {0.05, 0.0025}});
    REQUIRE(f.points.size() == 3);
    CHECK(f.points[0].first > f.points[1].first);
    CHECK(f.points[1].first > f.points[2].first);
    REQUIRE(f.pair_slopes.size() == 2);
    CHECK(f.min_pair_slope() == Approx(2.0));
    CHECK(f.max_pair_slope() == Approx(2.0));
  }
  SECTION("errors under the floor are excluded and counted") {
    const auto f = fit_order({{0.1, 0.01}, {0.05, 0.0025}, {0.025, 0.000625}, {0.001, 1e-16}});
    CHECK(f.excluded == 1);
    CHECK(f.slope == Approx(2.0).margin(1e-10));
  }
  SECTION("degenerate inputs") {
    CHECK_THROWS_AS(fit_order({{0.1, 0.01}, {0.05, 0.0025}}), DegenerateFit);
    CHECK_THROWS_AS(fit_order({{0.1, 0.0}, {0.05, 1e-15}, {0.025, 0.0}}), ZeroErrorDegenerate);
    CHECK_THROWS_AS(fit_order({{0.1, 0.01}, {0.1, 0.02}, {0.1, 0.03}}), DegenerateFit);
    CHECK_THROWS_AS(fit_order({{0.1, 0.01}, {0.0, 0.02}, {0.05, 0.03}}), DegenerateFit);
  }
}

TEST_CASE("fit_decay_rate") {
  SECTION("pure exponential on any grid") {
    for (double dt : {0.01, 0.137}) {
      std::vector<std::pair<double, double>> s;
      for (int i = 0; i < 50; ++i) s.emplace_back(i * dt, 2.5 * std::exp(-3.0 * i * dt));
      const auto d = fit_decay_rate(s);
      CHECK(d.gamma_hat == Approx(3.0).epsilon(1e-8));
      CHECK(d.used == 40);
      CHECK(d.r2 == Approx(1.0).margin(1e-12));
    }
  }
  SECTION("too few points past the cutoff") {
    std::vector<std::pair<double, double>> s;
    for (int i = 0; i < 11; ++i) s.emplace_back(i, std::exp(-i));
    CHECK_THROWS_AS(fit_decay_rate(s), DegenerateFit);
    CHECK_NOTHROW(fit_decay_rate(s, 0.0));
    CHECK_THROWS_AS(fit_decay_rate(s, 1.0), InvalidArgument);
  }
  SECTION("linear scheme 1 iterates decay at -ln(mu)/dt") {
    const LinearModel m(1.0, 10);
    const double dt = 1e-3;
    const Mat2 g = scheme_matrix(m, numbered_scheme(1, 10, {0.5, 0.5}), dt);
    const auto a = analyze_propagator(g);
    Vec2 w{5.0, 1.0};
    std::vector<std::pair<double, double>> s;
    for (int n = 0; n <= 1000; ++n) {
      const Vec2 d = w - a.q_matrix * w;
      s.emplace_back(n * dt, std::hypot(d.x, d.y));
      w = g * w;
    }
    const auto d = fit_decay_rate(s);
    CHECK(d.gamma_hat == Approx(-std::log(a.mu) / dt).epsilon(1e-6));
    CHECK(d.gamma_hat == Approx(11.0).epsilon(0.01));
  }
}
