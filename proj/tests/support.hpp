#pragma once

// Test-side oracles and helpers, independent of the library implementation
// paths they are used to check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

namespace testsup {

inline double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Black-Scholes call, zero rate.
inline double bs_call(double s0, double k, double maturity, double vol) {
  const double sd = vol * std::sqrt(maturity);
  const double d1 = (std::log(s0 / k) + 0.5 * vol * vol * maturity) / sd;
  const double d2 = d1 - sd;
  return s0 * norm_cdf(d1) - k * norm_cdf(d2);
}

// Spearman rank correlation (no tie handling; inputs are distinct in use).
inline double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  auto ranks = [n](const std::vector<double>& v) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&v](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) r[idx[i]] = static_cast<double>(i + 1);
    return r;
  };
  const auto rx = ranks(xs);
  const auto ry = ranks(ys);
  double d2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) d2 += (rx[i] - ry[i]) * (rx[i] - ry[i]);
  const double nn = static_cast<double>(n);
  return 1.0 - 6.0 * d2 / (nn * (nn * nn - 1.0));
}

// Dense-grid Legendre transform; brute-force oracle for the golden-section
// implementation.
template <class F>
double legendre_grid(F&& gamma, double lo, double hi, double x, std::size_t n = 1000001) {
  double best = -1e300;
  const double a = lo + 1e-9 * (hi - lo);
  const double b = hi - 1e-9 * (hi - lo);
  for (std::size_t i = 0; i < n; ++i) {
    const double p = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    best = std::max(best, p * x - gamma(p));
  }
  return best;
}

}  // namespace testsup
