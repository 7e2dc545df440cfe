#include "subcycle/analysis.hpp"

#include <algorithm>
#include <numeric>

namespace subcycle {

namespace {

struct LineFit {
  double slope, intercept, rms, r2;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0) throw DegenerateFit("abscissae are all equal");
  LineFit f{};
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss += r * r;
  }
  f.rms = std::sqrt(ss / n);
  f.r2 = syy > 0.0 ? 1.0 - ss / syy : 1.0;
  return f;
}

}  // namespace

double OrderFit::min_pair_slope() const {
  return pair_slopes.empty() ? slope : *std::min_element(pair_slopes.begin(), pair_slopes.end());
}

double OrderFit::max_pair_slope() const {
  return pair_slopes.empty() ? slope : *std::max_element(pair_slopes.begin(), pair_slopes.end());
}

OrderFit fit_order(const std::vector<std::pair<double, double>>& samples, double floor) {
  std::vector<std::pair<double, double>> usable;
  int excluded = 0;
  for (const auto& [h, err] : samples) {
    if (!(h > 0.0)) throw DegenerateFit("step sizes must be positive");
    if (!(err >= floor) || !std::isfinite(err)) {
      ++excluded;
      continue;
    }
    usable.emplace_back(h, err);
  }
  if (usable.size() < 3) {
    if (!samples.empty() && excluded == static_cast<int>(samples.size()))
      throw ZeroErrorDegenerate("all errors below the rounding floor");
    throw DegenerateFit("fewer than three usable points");
  }
  std::sort(usable.begin(), usable.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

  OrderFit fit;
  fit.excluded = excluded;
  std::vector<double> x, y;
  for (const auto& [h, err] : usable) {
    x.push_back(std::log10(h));
    y.push_back(std::log10(err));
    fit.points.emplace_back(x.back(), y.back());
  }
  const LineFit lf = least_squares(x, y);
  fit.slope = lf.slope;
  fit.intercept = lf.intercept;
  fit.residual_rms = lf.rms;
  for (size_t i = 1; i < x.size(); ++i) fit.pair_slopes.push_back((y[i] - y[i - 1]) / (x[i] - x[i - 1]));
  return fit;
}

DecayFit fit_decay_rate(const std::vector<std::pair<double, double>>& series, double transient_fraction) {
  if (transient_fraction < 0.0 || transient_fraction >= 1.0)
    throw InvalidArgument("transient fraction must lie in [0,1)");
  const size_t skip = static_cast<size_t>(transient_fraction * static_cast<double>(series.size()));
  std::vector<double> t, y;
  for (size_t i = skip; i < series.size(); ++i) {
    if (!(series[i].second > 0.0)) throw DegenerateFit("decay series must stay positive");
    t.push_back(series[i].first);
    y.push_back(std::log(series[i].second));
  }
  if (t.size() < 10) throw DegenerateFit("fewer than ten points past the transient cutoff");
  const LineFit lf = least_squares(t, y);
  return {-lf.slope, lf.r2, static_cast<int>(t.size())};
}

}  // namespace subcycle
