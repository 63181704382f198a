// Small statistics helpers shared by the Monte Carlo experiments: binomial
// interval estimates and least-squares line fits.
#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace perclab {

struct Estimate {
  double value = 0;
  double ci_half_width = 0;  // 95% interval half-width
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

// Wilson score interval at 95%; well-behaved at frequencies 0 and 1.
inline Estimate binomial_estimate(std::uint64_t successes, std::uint64_t samples, std::uint64_t seed) {
  if (samples == 0) throw std::invalid_argument("binomial estimate needs at least one sample");
  const double z = 1.959963984540054;  // 97.5% normal quantile
  const double n = static_cast<double>(samples);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (phat + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
  Estimate e;
  e.value = phat;
  e.ci_half_width = half + std::abs(phat - centre);  // cover the asymmetry
  e.samples = samples;
  e.seed = seed;
  return e;
}

struct LineFit {
  double slope = 0;
  double intercept = 0;
  double slope_stderr = 0;
  double sse = 0;  // residual sum of squares
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 2) throw std::invalid_argument("line fit needs >= 2 matched points");
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / static_cast<double>(n);
  const double my = sy / static_cast<double>(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0) throw std::invalid_argument("line fit needs non-degenerate abscissae");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    f.sse += r * r;
  }
  f.slope_stderr = n > 2 ? std::sqrt(f.sse / (static_cast<double>(n) - 2.0) / sxx) : 0.0;
  return f;
}

}  // namespace perclab
