#include <catch_amalgamated.hpp>

#include <cmath>
#include <functional>

#include "subcycle/analysis.hpp"
#include "subcycle/linear_ode.hpp"
#include "subcycle/nonlinear_ode.hpp"

using namespace subcycle;
using Catch::Approx;

namespace {

double bisect(const std::function<double(double)>& g, double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if ((g(lo) < 0) == (g(mid) < 0)) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("exact nonlinear solution") {
  const NonlinearModel m(1.0, 10);
  SECTION("diagonal data is constant") {
    const NLState s = nl_exact_solution(m, {2.0, 2.0}, 3.0);
    CHECK(s.u == 2.0);
    CHECK(s.v == 2.0);
  }
  SECTION("u0 + c = v0 is constant") {
    const NLState s = nl_exact_solution(m, {1.0, 2.0}, 3.0);
    CHECK(s.u == Approx(1.0).epsilon(1e-14));
    CHECK(s.v == Approx(2.0).epsilon(1e-14));
  }
  SECTION("reaches 15/11 by t = 5") {
    const NLState s = nl_exact_solution(m, {5.0, 1.0}, 5.0);
    CHECK(s.u == Approx(15.0 / 11.0).margin(1e-12));
    CHECK(s.v == Approx(15.0 / 11.0).margin(1e-12));
  }
  SECTION("u + N v is conserved") {
    for (double t : {0.01, 0.1, 1.0}) {
      const NLState s = nl_exact_solution(m, {5.0, 1.0}, t);
      CHECK(s.u + 10.0 * s.v == Approx(15.0).epsilon(1e-14));
    }
  }
  SECTION("blow-up branch") { CHECK_THROWS_AS(nl_exact_solution(m, {0.0, 2.0}, 5.0), BlowUp); }
  SECTION("matches the ODE through finite differences") {
    const double t = 0.05, h = 1e-6;
    const NLState a = nl_exact_solution(m, {5.0, 1.0}, t + h), b = nl_exact_solution(m, {5.0, 1.0}, t - h);
    const NLState s = nl_exact_solution(m, {5.0, 1.0}, t);
    const double y = s.u - s.v;
    CHECK((a.u - b.u) / (2 * h) == Approx(-10.0 * y * (1.0 + y)).epsilon(1e-7));
    CHECK((a.v - b.v) / (2 * h) == Approx(y * (1.0 + y)).epsilon(1e-7));
  }
}

TEST_CASE("nonlinear fast step") {
  SECTION("explicit update") {
    const NonlinearModel m(1.0, 10);
    const NLState s = nl_fast_step(m, 0.0, 0.001, {2.0, 1.0});
    CHECK(s.u == Approx(2.0 + 10 * 0.001 * (1.0 * (1.0 - 2.0) - 1.0)));
    CHECK(s.v == 1.0);
  }
  SECTION("fixed point on the diagonal") {
    const NonlinearModel m(1.0, 10);
    for (double th : {0.0, 0.5, 1.0}) {
      const NLState s = nl_fast_step(m, th, 0.3, {1.5, 1.5});
      CHECK(s.u == 1.5);
      CHECK(s.v == 1.5);
    }
  }
  SECTION("implicit root") {
    const NLState s = nl_fast_step(NonlinearModel(1.0, 1), 1.0, 0.1, {1.0, 0.0});
    CHECK(s.u == Approx((-1.1 + std::sqrt(1.21 + 0.4)) / 0.2).epsilon(1e-14));
    CHECK(s.u == Approx(0.844289).margin(1e-6));
  }
  SECTION("no real root") {
    // 10 W^2 + 11 W + 5 = 0 has no real solution
    const NonlinearModel m(1.0, 1);
    CHECK_THROWS_AS(nl_fast_step(m, 1.0, 10.0, {-5.0, 0.0}), NoRealRoot);
  }
}

TEST_CASE("nonlinear slow step") {
  SECTION("explicit update") {
    const NonlinearModel m(1.0, 10);
    const NLState s = nl_slow_step(m, 0.0, 0.01, {2.0, 1.0});
    CHECK(s.v == Approx(1.0 + 0.01 * (1.0 + 1.0)));
    CHECK(s.u == 2.0);
  }
  SECTION("fixed point on the diagonal") {
    const NonlinearModel m(1.0, 10);
    CHECK(nl_slow_step(m, 0.7, 0.3, {0.4, 0.4}).v == 0.4);
  }
  SECTION("implicit root against bisection") {
    const NLState s = nl_slow_step(NonlinearModel(1.0, 3), 1.0, 0.1, {1.0, 0.0});
    const double oracle = bisect([](double v) { return v - 0.1 * ((1.0 - v) + (1.0 - v) * (1.0 - v)); }, 0.0, 1.0);
    CHECK(s.v == Approx(oracle).epsilon(1e-13));
    CHECK(s.v == Approx(0.155711).margin(1e-6));
  }
  SECTION("implicit fast root against bisection, mixed theta") {
    const NonlinearModel m(0.7, 4);
    const NLState s0{2.0, -0.5};
    const double th = 0.3, h = 0.02, a = 4 * h;
    auto rhs = [&](double u) { const double y = u - s0.v; return -y * (0.7 + y); };
    const NLState s = nl_fast_step(m, th, h, s0);
    const double oracle = bisect([&](double x) { return x - s0.u - a * ((1 - th) * rhs(s0.u) + th * rhs(x)); }, s0.v, s0.u);
    CHECK(s.u == Approx(oracle).epsilon(1e-13));
  }
}

TEST_CASE("substeps move O(dt)") {
  const NonlinearModel m(1.0, 10);
  for (double u : {-0.5, 0.5, 2.0, 5.0}) {
    for (double v : {-0.3, 1.0, 3.0}) {
      for (double th : {0.0, 0.5, 1.0}) {
        for (double h : {1e-3, 1e-4}) {
          const NLState f = nl_fast_step(m, th, h, {u, v});
          const NLState s = nl_slow_step(m, th, h, {u, v});
          const double y = u - v;
          CHECK(std::abs(f.u - u) <= 1.2 * 10 * h * std::abs(y * (1 + y)) + 1e-15);
          CHECK(std::abs(s.v - v) <= 1.2 * h * std::abs(y * (1 + y)) + 1e-15);
        }
      }
    }
  }
}

TEST_CASE("linear vector field reproduces the matrix iteration") {
  const NonlinearModel nm(1.0, 10, 0.0);
  const LinearModel lm(1.0, 10);
  for (int k = 1; k <= 6; ++k) {
    const auto spec = numbered_scheme(k, 10, {0.25, 0.75});
    const NLState s = nl_scheme_step(nm, spec, 0.05, {5.0, 1.0});
    const Vec2 w = scheme_matrix(lm, spec, 0.05) * Vec2{5.0, 1.0};
    CHECK(s.u == Approx(w.x).epsilon(1e-13));
    CHECK(s.v == Approx(w.y).epsilon(1e-13));
  }
}

TEST_CASE("runs to equilibrium") {
  const NonlinearModel m(1.0, 10);
  SECTION("diagonal start has zero error") {
    const auto r = nl_run_to_equilibrium(m, numbered_scheme(1, 10, {0.5, 0.5}), {2.0, 2.0}, 0.05, 5.0);
    CHECK(r.eps_as == 0.0);
    CHECK(r.steps == 100);
  }
  SECTION("trajectory settles on the diagonal") {
    for (int k = 1; k <= 6; ++k) {
      const auto r = nl_run_to_equilibrium(m, numbered_scheme(k, 10, {0.5, 0.5}), {5.0, 1.0}, 0.01, 20.0);
      CHECK(std::abs(r.state_final.u - r.state_final.v) < 1e-8);
      CHECK(std::isfinite(r.state_final.u));
    }
  }
  SECTION("t_final must be a multiple of dt") {
    CHECK_THROWS_AS(nl_run_to_equilibrium(m, numbered_scheme(1, 10, {0.5, 0.5}), {5.0, 1.0}, 0.03, 1.0),
                    InvalidArgument);
  }
  SECTION("scheme 3 FSF with (0, 1/4)") {
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < 7; ++i) {
      const double dt = 0.05 / std::pow(2.0, i);
      pts.emplace_back(dt, nl_run_to_equilibrium(m, numbered_scheme(3, 10, {0.0, 0.25}, StrangOrder::FSF), {5.0, 1.0},
                                                 dt, 5.0).eps_as);
    }
    CHECK(fit_order(pts).slope == Approx(1.8674).margin(0.01));
  }
  SECTION("scheme 2 Crank-Nicolson is first order") {
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < 7; ++i) {
      const double dt = 0.05 / std::pow(2.0, i);
      pts.emplace_back(dt, nl_run_to_equilibrium(m, numbered_scheme(2, 10, {0.5, 0.5}), {5.0, 1.0}, dt, 5.0).eps_as);
    }
    CHECK(fit_order(pts).slope == Approx(1.0).margin(0.01));
  }
  SECTION("step index is reported on failure") {
    try {
      nl_run_to_equilibrium(NonlinearModel(1.0, 1), numbered_scheme(1, 1, {1.0, 1.0}), {-5.0, 0.0}, 10.0, 20.0);
      FAIL("expected NoRealRoot");
    } catch (const NoRealRoot& e) {
      CHECK(e.step() == 0);
      CHECK(e.dt() == 10.0);
    }
  }
}
