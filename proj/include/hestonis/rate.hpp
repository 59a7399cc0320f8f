#pragma once

#include <cmath>
#include <numbers>

#include "hestonis/errors.hpp"
#include "hestonis/scgf.hpp"

namespace hestonis {

struct GoldenResult {
  double x;
  double fx;
  int iterations;
  bool converged;
};

// Derivative-free 1-D maximisation.  A coarse scan first brackets the best
// local maximum (the Legendre objectives are not always unimodal near the
// piecewise-SCGF kinks), then golden-section contracts the bracket.
template <class F>
GoldenResult golden_section_max(F&& f, double lo, double hi, double x_tol = 1e-10,
                                int max_iter = 200, int scan_points = 129) {
  if (!(hi > lo)) throw InvalidInput("golden_section_max: empty bracket");
  double best_x = lo;
  double best_f = f(lo);
  for (int i = 1; i < scan_points; ++i) {
    const double x = lo + (hi - lo) * i / (scan_points - 1);
    const double fx = f(x);
    if (fx > best_f) {
      best_f = fx;
      best_x = x;
    }
  }
  const double cell = (hi - lo) / (scan_points - 1);
  double a = std::max(lo, best_x - cell);
  double b = std::min(hi, best_x + cell);

  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  int it = 0;
  while (b - a > x_tol && it < max_iter) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    }
    ++it;
  }
  const double xm = 0.5 * (a + b);
  return {xm, f(xm), it, b - a <= x_tol};
}

struct RateEval {
  double x;
  double lambda;
  double p_star;
  bool converged;
};

// Fenchel-Legendre transform sup_p { p x - Gamma(p) } over an open domain.
template <class F>
RateEval legendre_transform(F&& gamma, const ScgfDomain& dom, double x) {
  const double inset = 1e-9 * dom.width();
  const double lo = dom.p_minus + inset;
  const double hi = dom.p_plus - inset;
  auto objective = [&](double p) { return p * x - gamma(p); };
  const auto res = golden_section_max(objective, lo, hi, 1e-10, 200);
  if (!res.converged) {
    throw NumericFailure("legendre: no convergence after 200 iterations; best bracket around p = " +
                         std::to_string(res.x));
  }
  // Steepness failure: the maximiser pinned to an endpoint means x exceeds
  // the range of Gamma'; report the boundary value un-converged.
  const bool at_edge = res.x - lo < 16.0 * inset || hi - res.x < 16.0 * inset;
  return {x, res.fx, res.x, !at_edge};
}

inline RateEval legendre(const ScgfFunction& scgf, double x) {
  if (!(scgf.domain.width() > 0.0)) throw InvalidInput("legendre: degenerate domain");
  return legendre_transform([&scgf](double p) { return scgf(p); }, scgf.domain, x);
}

// ---------------------------------------------------------------------------
// Hoelder bound G(q) and its minimisation (optimality gap report).
// ---------------------------------------------------------------------------

enum class Regime { Short, Deep };

// G(q) = Term-I limit(q) - (1 - 1/q) Lambda_II.  context is k (Short) or the
// maturity T (Deep).
inline double g_short(double q, const HestonParams& par, double k) {
  const auto gII = ScgfFunction::make(ScgfKind::ShortGammaII, par, k);
  const double lambda_II = legendre(gII, k).lambda;
  return term1_limit_short(q, par, k) - (1.0 - 1.0 / q) * lambda_II;
}

inline double g_deep(double q, const HestonParams& par, double maturity) {
  const auto gII = ScgfFunction::make(ScgfKind::DeepGammaII, par, maturity);
  const double lambda_II = legendre(gII, 1.0).lambda;
  return term1_limit_deep(q, par, maturity) - (1.0 - 1.0 / q) * lambda_II;
}

struct OptimalityReport {
  double q_star;
  double g_at_qstar;
  double minus_two_lambda1;
  double relative_gap;  // |G(q*) + 2 Lambda_1| / |2 Lambda_1|
  double lambda1;
  double lambda_II;
  double q_singular;
  bool interior;  // q* strictly inside (1, q_singular)
};

// q where the Term-I tangent argument reaches pi/2.
inline double q_singular(Regime regime, const HestonParams& par, double context) {
  const double t = par.theta * par.rho_bar;
  const double pi_half = 0.5 * std::numbers::pi;
  if (regime == Regime::Short) {
    const double c = par.sigma * context / (2.0 * t);  // context = k
    return pi_half * pi_half / (2.0 * c * c);
  }
  const double c = par.sigma / (2.0 * t);
  return pi_half * pi_half / (2.0 * c * c);
}

inline OptimalityReport minimize_g(Regime regime, const HestonParams& par, double context) {
  const double q_sing = q_singular(regime, par, context);
  if (!(q_sing > 1.0)) {
    throw RegimeError("minimize_g: tangent pole q_sing = " + std::to_string(q_sing) +
                      " <= 1; the Hoelder bound is vacuous for these parameters");
  }

  const double lambda_II =
      regime == Regime::Short
          ? legendre(ScgfFunction::make(ScgfKind::ShortGammaII, par, context), context).lambda
          : legendre(ScgfFunction::make(ScgfKind::DeepGammaII, par, context), 1.0).lambda;
  auto g = [&](double q) {
    const double term1 = regime == Regime::Short ? term1_limit_short(q, par, context)
                                                 : term1_limit_deep(q, par, context);
    return term1 - (1.0 - 1.0 / q) * lambda_II;
  };

  const double inset = 1e-9 * (q_sing - 1.0);
  const double lo = 1.0 + inset;
  const double hi = q_sing - inset;
  const auto res = golden_section_max([&](double q) { return -g(q); }, lo, hi, 1e-10, 200);

  const double lambda1 =
      regime == Regime::Short
          ? legendre(ScgfFunction::make(ScgfKind::ShortGamma1, par), context).lambda
          : legendre(ScgfFunction::make(ScgfKind::DeepGamma1, par, context), 1.0).lambda;

  OptimalityReport rep;
  rep.q_star = res.x;
  rep.g_at_qstar = -res.fx;
  rep.lambda1 = lambda1;
  rep.lambda_II = lambda_II;
  rep.minus_two_lambda1 = -2.0 * lambda1;
  rep.relative_gap = std::abs(rep.g_at_qstar + 2.0 * lambda1) / std::abs(2.0 * lambda1);
  rep.q_singular = q_sing;
  rep.interior = res.x - lo > 16.0 * inset && hi - res.x > 16.0 * inset;
  return rep;
}

}  // namespace hestonis
