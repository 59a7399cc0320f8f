#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "hestonis/errors.hpp"
#include "hestonis/model.hpp"

namespace hestonis {

// Characteristic function E[exp(i z (X_T - X_0))] for the zero-rate Heston
// model, in the branch-stable form (D- convention).  (xi - d) is carried as
// -sigma^2 A / (xi + d) so the sigma -> 0 limit stays finite.
inline std::complex<double> heston_cf(std::complex<double> z, double maturity,
                                      const HestonParams& p) {
  using cd = std::complex<double>;
  const cd i(0.0, 1.0);
  const cd a = i * z + z * z;
  const cd xi = cd(p.kappa, 0.0) - i * p.rho * p.sigma * z;
  const cd d = std::sqrt(xi * xi + p.sigma * p.sigma * a);
  const cd xpd = xi + d;
  const cd g = -p.sigma * p.sigma * a / (xpd * xpd);
  const cd e = std::exp(-d * maturity);

  const cd big_d = (-a / xpd) * (1.0 - e) / (1.0 - g * e);
  cd log_ratio_over_s2;  // (2/sigma^2) log((1 - g e)/(1 - g)), g = O(sigma^2)
  if (std::abs(g) < 1e-7) {
    const cd gs = g / (p.sigma * p.sigma);  // finite as sigma -> 0
    log_ratio_over_s2 = 2.0 * gs * (1.0 - e) + p.sigma * p.sigma * gs * gs * (1.0 - e * e);
  } else {
    log_ratio_over_s2 =
        2.0 / (p.sigma * p.sigma) * (std::log(1.0 - g * e) - std::log(1.0 - g));
  }
  const cd big_c = p.kappa * p.theta * ((-a / xpd) * maturity - log_ratio_over_s2);
  return std::exp(big_c + big_d * p.v0);
}

struct QuadratureSpec {
  double tail_tol_per_spot = 1e-8;  // doubling the truncation moves C by < this * S0
  double panel_rel_tol = 1e-11;
  double u_initial = 64.0;
  int max_doublings = 18;
  int max_depth = 48;
};

namespace detail {

template <class F>
double adaptive_simpson(F&& f, double a, double b, double fa, double fm, double fb, double tol,
                        int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0) throw NumericFailure("reference_price: quadrature recursion limit hit");
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, 0.5 * tol, depth - 1);
}

template <class F>
double integrate(F&& f, double a, double b, double tol, int max_depth) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  return adaptive_simpson(f, a, b, fa, fm, fb, tol, max_depth);
}

}  // namespace detail

// Deterministic call price via the Lewis single-integral representation,
//   C = S0 - sqrt(S0 K)/pi * int_0^inf Re[e^{iux} phi(u - i/2)] / (u^2 + 1/4) du
// with x = log(S0/K).  The truncation bound doubles until the added tail is
// below tail_tol_per_spot * S0.
inline double reference_price(const HestonParams& p, const MarketSpec& m,
                              const QuadratureSpec& quad = {}) {
  if (!(m.maturity > 0.0) || !(m.s0 > 0.0)) {
    throw InvalidInput("reference_price: needs s0 > 0 and maturity > 0");
  }
  if (m.strike <= 0.0) return m.s0;  // zero strike: the call is the forward

  const double x = std::log(m.s0 / m.strike);
  auto integrand = [&](double u) {
    const std::complex<double> z(u, -0.5);
    const std::complex<double> val =
        std::exp(std::complex<double>(0.0, u * x)) * heston_cf(z, m.maturity, p);
    return val.real() / (u * u + 0.25);
  };

  const double tol = quad.panel_rel_tol;
  double lo = 0.0;
  double hi = quad.u_initial;
  double total = detail::integrate(integrand, lo, hi, tol, quad.max_depth);
  bool converged = false;
  for (int i = 0; i < quad.max_doublings; ++i) {
    const double tail = detail::integrate(integrand, hi, 2.0 * hi, tol, quad.max_depth);
    total += tail;
    hi *= 2.0;
    const double price_move = std::abs(std::sqrt(m.s0 * m.strike) / std::numbers::pi * tail);
    if (price_move < quad.tail_tol_per_spot * m.s0) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw NumericFailure("reference_price: truncation did not converge below tolerance (u_max " +
                         std::to_string(hi) + ")");
  }

  double price = m.s0 - std::sqrt(m.s0 * m.strike) / std::numbers::pi * total;
  if (!std::isfinite(price)) throw NumericFailure("reference_price: non-finite result");
  if (price < 0.0) price = 0.0;  // deep-OTM round-off floor
  return price;
}

}  // namespace hestonis
