#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "subcycle/errors.hpp"

namespace subcycle {

/// Errors below this value are treated as rounding noise and left out of order fits.
inline constexpr double kErrorFloor = 1e-13;

struct OrderFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;
  std::vector<std::pair<double, double>> points;  ///< (log10 h, log10 err), h decreasing
  int excluded = 0;
  std::vector<double> pair_slopes;  ///< consecutive-point slopes, same order as points

  double min_pair_slope() const;
  double max_pair_slope() const;
};

/// OLS of log10(err) against log10(h). Input pairs are (h, err).
OrderFit fit_order(const std::vector<std::pair<double, double>>& samples, double floor = kErrorFloor);

struct ClassicalOrder {
  OrderFit local;
  double global_order;
};

/// Fits the one-step error of step(h, x0) against exact(h, x0).
template <class State, class Step, class Exact, class Distance>
ClassicalOrder classical_order(const Step& step, const Exact& exact, const State& x0,
                               const std::vector<double>& h_grid, const Distance& distance) {
  std::vector<std::pair<double, double>> samples;
  samples.reserve(h_grid.size());
  for (double h : h_grid) samples.emplace_back(h, distance(step(h, x0), exact(h, x0)));
  OrderFit f = fit_order(samples);
  return {f, f.slope - 1.0};
}

struct DecayFit {
  double gamma_hat;
  double r2;
  int used;
};

/// Negated least-squares slope of ln(norm) against t, after dropping the leading transient fraction.
DecayFit fit_decay_rate(const std::vector<std::pair<double, double>>& series, double transient_fraction = 0.2);

}  // namespace subcycle
