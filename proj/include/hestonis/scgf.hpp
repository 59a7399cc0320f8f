#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "hestonis/errors.hpp"
#include "hestonis/model.hpp"
#include "hestonis/riccati.hpp"

namespace hestonis {

// Open effective domain of a limiting SCGF; 0 is always interior.
struct ScgfDomain {
  double p_minus;
  double p_plus;

  double width() const { return p_plus - p_minus; }
  bool contains(double p) const { return p > p_minus && p < p_plus; }
};

inline void require_inside(const ScgfDomain& d, double p, const char* who) {
  if (!d.contains(p)) {
    throw DomainError(std::string(who) + ": p = " + std::to_string(p) +
                      " outside effective domain (" + std::to_string(d.p_minus) + ", " +
                      std::to_string(d.p_plus) + ")");
  }
}

// Sign regime of the scaled discriminant; |value| < 1e-12 counts as Linear to
// stop floating-point flapping at the branch boundaries.
struct Discriminant {
  enum class Regime { Exponential, Linear, Oscillatory };

  double value;
  Regime regime;
  double omega;  // 0.5 * sqrt(|value|)

  static Discriminant classify(double value, double tol = 1e-12) {
    Regime r = Regime::Linear;
    if (value > tol) r = Regime::Exponential;
    if (value < -tol) r = Regime::Oscillatory;
    return {value, r, 0.5 * std::sqrt(std::abs(value))};
  }
};

// ---------------------------------------------------------------------------
// Short-maturity limiting SCGF of the log-price.
// ---------------------------------------------------------------------------

inline ScgfDomain domain_gamma1_short(const HestonParams& p) {
  const double s = p.sigma, r = p.rho, rb = p.rho_bar;
  if (r == 0.0) return {-std::numbers::pi / s, std::numbers::pi / s};
  const double a = std::atan(rb / r);
  if (r < 0.0) return {2.0 / (s * rb) * a, 2.0 / (s * rb) * (std::numbers::pi + a)};
  return {2.0 / (s * rb) * (a - std::numbers::pi), 2.0 / (s * rb) * a};
}

inline double gamma1_short(double p, const HestonParams& par) {
  require_inside(domain_gamma1_short(par), p, "gamma1_short");
  if (std::abs(p) < 1e-6) return 0.5 * par.v0 * p * p;  // removable 0/0 in cot
  const double x = 0.5 * par.sigma * par.rho_bar * p;
  const double den = par.sigma * (-par.rho + par.rho_bar / std::tan(x));
  return par.v0 * p / den;
}

// ---------------------------------------------------------------------------
// Deep-OTM limiting SCGF under the slow mean-reversion scaling.  Identical to
// the short-maturity form with sigma*T in place of sigma, so the domain is
// the short-maturity domain divided by T.
// ---------------------------------------------------------------------------

inline ScgfDomain domain_gamma1_deep(const HestonParams& p, double maturity) {
  if (!(maturity > 0.0)) throw InvalidInput("domain_gamma1_deep: maturity must be > 0");
  const ScgfDomain d = domain_gamma1_short(p);
  return {d.p_minus / maturity, d.p_plus / maturity};
}

inline double gamma1_deep(double p, const HestonParams& par, double maturity) {
  require_inside(domain_gamma1_deep(par, maturity), p, "gamma1_deep");
  if (std::abs(p) < 1e-6) return 0.5 * par.v0 * p * p * maturity;
  const double x = 0.5 * p * par.rho_bar * par.sigma * maturity;
  const double den = -par.rho * par.sigma + par.rho_bar * par.sigma / std::tan(x);
  return par.v0 * p / den;
}

// ---------------------------------------------------------------------------
// Auxiliary SCGFs (second-moment analysis).  Piecewise in the sign of the
// scaled discriminant; the tan-branch endpoints are located numerically at
// the first tangent pole of the closed form itself.
// ---------------------------------------------------------------------------

namespace detail {

// Ascending bisection for g(p) = target with g increasing along `dir`.
template <class F>
double bisect_to_level(F&& g, double start, double dir, double target) {
  double lo = start;
  double stride = dir;
  double hi = start + stride;
  int guard = 0;
  while (g(hi) < target) {
    stride *= 2.0;
    hi += stride;
    if (++guard > 200) throw NumericFailure("bisect_to_level: bracket expansion failed");
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) < target) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

inline double gammaII_short_discriminant(double p, const HestonParams& par, double k) {
  const double s2 = par.sigma * par.sigma;
  return s2 * (p * p * (2.0 * par.rho * par.rho - 1.0) + 2.0 * p * k / par.theta);
}

inline ScgfDomain domain_gammaII_short(const HestonParams& par, double k) {
  if (2.0 * par.rho * par.rho >= 1.0) {
    throw RegimeError("gammaII_short: requires 2 rho^2 < 1");
  }
  if (!(k > 0.0)) throw InvalidInput("gammaII_short: requires log-moneyness k > 0");
  const double pstar = 2.0 * k / (par.theta * (1.0 - 2.0 * par.rho * par.rho));
  auto neg_disc = [&](double p) { return -gammaII_short_discriminant(p, par, k); };
  const double target = std::numbers::pi * std::numbers::pi;
  const double scale = std::max(1.0, pstar);
  const double p_plus = detail::bisect_to_level(neg_disc, pstar, scale, target);
  const double p_minus = detail::bisect_to_level(neg_disc, 0.0, -scale, target);
  return {p_minus, p_plus};
}

inline double gammaII_short(double p, const HestonParams& par, double k) {
  const ScgfDomain dom = domain_gammaII_short(par, k);  // also checks the rho regime
  require_inside(dom, p, "gammaII_short");
  const auto disc = Discriminant::classify(gammaII_short_discriminant(p, par, k));
  const double v0 = par.v0, s = par.sigma, r = par.rho;
  switch (disc.regime) {
    case Discriminant::Regime::Linear:
      return -v0 * p * r / s;
    case Discriminant::Regime::Exponential: {
      const double rt = std::sqrt(disc.value);
      return v0 / (s * s) * (-p * r * s + rt * std::tanh(0.5 * rt));
    }
    case Discriminant::Regime::Oscillatory:
    default: {
      const double rt = std::sqrt(-disc.value);
      return v0 / (s * s) * (-p * r * s + rt * std::tan(0.5 * rt));
    }
  }
}

inline double gammaII_deep_discriminant(double p, const HestonParams& par, double maturity) {
  const double s2 = par.sigma * par.sigma;
  return s2 * (-p * p * par.rho_bar * par.rho_bar + 2.0 * p / (par.theta * maturity));
}

inline ScgfDomain domain_gammaII_deep(const HestonParams& par, double maturity) {
  if (!(maturity > 0.0)) throw InvalidInput("gammaII_deep: maturity must be > 0");
  const double pstar = 2.0 / (par.theta * maturity * par.rho_bar * par.rho_bar);
  auto neg_disc = [&](double p) { return -gammaII_deep_discriminant(p, par, maturity); };
  // first tangent pole: sqrt(-disc) * T / 2 = pi / 2
  const double target = std::numbers::pi * std::numbers::pi / (maturity * maturity);
  const double scale = std::max(1.0, pstar);
  const double p_plus = detail::bisect_to_level(neg_disc, pstar, scale, target);
  const double p_minus = detail::bisect_to_level(neg_disc, 0.0, -scale, target);
  return {p_minus, p_plus};
}

inline double gammaII_deep(double p, const HestonParams& par, double maturity) {
  const ScgfDomain dom = domain_gammaII_deep(par, maturity);
  require_inside(dom, p, "gammaII_deep");
  const auto disc = Discriminant::classify(gammaII_deep_discriminant(p, par, maturity));
  const double v0 = par.v0, s = par.sigma, r = par.rho;
  switch (disc.regime) {
    case Discriminant::Regime::Linear:
      return -v0 * p * r / s;
    case Discriminant::Regime::Exponential: {
      const double rt = std::sqrt(disc.value);
      return v0 / (s * s) * (-p * r * s + rt * std::tanh(0.5 * rt * maturity));
    }
    case Discriminant::Regime::Oscillatory:
    default: {
      const double rt = std::sqrt(-disc.value);
      return v0 / (s * s) * (-p * r * s + rt * std::tan(0.5 * rt * maturity));
    }
  }
}

// ---------------------------------------------------------------------------
// Limits of the Hoelder Term I (integrated-variance moment).
// ---------------------------------------------------------------------------

inline double term1_limit_short(double q, const HestonParams& par, double k) {
  if (!(q > 1.0)) throw InvalidInput("term1_limit_short: requires q > 1");
  const double arg = par.sigma * k * std::sqrt(2.0 * q) / (2.0 * par.theta * par.rho_bar);
  if (!(arg < 0.5 * std::numbers::pi)) {
    throw DomainError("term1_limit_short: tangent argument " + std::to_string(arg) +
                      " at or past pi/2");
  }
  return (1.0 / q) * (par.v0 * k * std::sqrt(2.0 * q) / (par.sigma * par.theta * par.rho_bar)) *
         std::tan(arg);
}

inline double term1_limit_deep(double q, const HestonParams& par, double maturity) {
  if (!(q > 1.0)) throw InvalidInput("term1_limit_deep: requires q > 1");
  if (!(maturity > 0.0)) throw InvalidInput("term1_limit_deep: maturity must be > 0");
  const double arg = par.sigma * std::sqrt(2.0 * q) / (2.0 * par.theta * par.rho_bar);
  if (!(arg < 0.5 * std::numbers::pi)) {
    throw DomainError("term1_limit_deep: tangent argument " + std::to_string(arg) +
                      " at or past pi/2");
  }
  return (1.0 / q) *
         (par.v0 * std::sqrt(2.0 * q) / (par.sigma * par.theta * par.rho_bar * maturity)) *
         std::tan(arg);
}

// ---------------------------------------------------------------------------
// The four limiting SCGFs behind one callable.
// ---------------------------------------------------------------------------

enum class ScgfKind { ShortGamma1, ShortGammaII, DeepGamma1, DeepGammaII };

// context: log-moneyness k for ShortGammaII, maturity T for the deep kinds,
// unused for ShortGamma1.
struct ScgfFunction {
  ScgfKind kind;
  HestonParams params;
  double context;
  ScgfDomain domain;

  static ScgfFunction make(ScgfKind kind, const HestonParams& params, double context = 0.0) {
    ScgfDomain d{};
    switch (kind) {
      case ScgfKind::ShortGamma1: d = domain_gamma1_short(params); break;
      case ScgfKind::ShortGammaII: d = domain_gammaII_short(params, context); break;
      case ScgfKind::DeepGamma1: d = domain_gamma1_deep(params, context); break;
      case ScgfKind::DeepGammaII: d = domain_gammaII_deep(params, context); break;
    }
    if (!(d.p_minus < 0.0 && 0.0 < d.p_plus)) {
      throw NumericFailure("ScgfFunction: domain does not contain 0");
    }
    return {kind, params, context, d};
  }

  double operator()(double p) const {
    switch (kind) {
      case ScgfKind::ShortGamma1: return gamma1_short(p, params);
      case ScgfKind::ShortGammaII: return gammaII_short(p, params, context);
      case ScgfKind::DeepGamma1: return gamma1_deep(p, params, context);
      case ScgfKind::DeepGammaII:
      default: return gammaII_deep(p, params, context);
    }
  }
};

// ---------------------------------------------------------------------------
// Finite-horizon log moment generating functions (the ODE oracle).  Each kind
// assembles the Riccati coefficients for one measure; the scaled
// quantities converge to the limiting SCGFs / Term-I limits as the small
// parameter decreases.
// ---------------------------------------------------------------------------

enum class CgfMeasure {
  ShortGamma1,   // E[exp(u (X_T - X_0))] under the pricing measure
  ShortGammaII,  // the same exponent under the short-maturity auxiliary measure
  ShortTermI,    // E[exp(q C(hbar) int V dt)] under the auxiliary measure
  DeepGamma1,    // rescaled deep-OTM family, exponent u = p / eps^2
  DeepGammaII,   // deep-OTM auxiliary measure
  DeepTermI,     // deep-OTM integrated-variance moment
};

// First argument is the raw exponent (u = p/T or p/eps^2) for the Gamma
// kinds and the Hoelder exponent q for the TermI kinds.  `horizon` is the
// integration horizon (the maturity).  Deep kinds additionally need the
// small parameter `eps`; their Riccati is integrated in the scaled variable
// psi_hat = eps^3 psi so the guard band is only hit at true blow-ups.
inline double finite_T_cgf(double u, double horizon, const HestonParams& par, double hbar,
                           CgfMeasure kind, double eps = 0.0, int n_steps = 10000) {
  const double s2 = par.sigma * par.sigma;
  const double rb2 = par.rho_bar * par.rho_bar;
  switch (kind) {
    case CgfMeasure::ShortGamma1: {
      const RiccatiProblem prob{0.5 * u * (u - 1.0), par.kappa - u * par.rho * par.sigma,
                                0.5 * s2, horizon};
      const auto sol = solve_riccati(prob, n_steps);
      return par.kappa * par.theta * sol.psi_integral + par.v0 * sol.psi;
    }
    case CgfMeasure::ShortGammaII: {
      const double c0 = u * (1.5 + hbar) + 0.5 * u * u * rb2;
      const double c1 = (par.kappa - 2.0 * par.rho * par.sigma) - u * par.rho * par.sigma;
      const auto sol = solve_riccati({c0, c1, 0.5 * s2, horizon}, n_steps);
      return par.kappa * par.theta * sol.psi_integral + par.v0 * sol.psi;
    }
    case CgfMeasure::ShortTermI: {
      const double big_c = 1.0 + 2.0 * hbar + hbar * hbar / rb2;
      const double c0 = u * big_c;  // u plays the role of q
      const double c1 = par.kappa - 2.0 * par.rho * par.sigma;
      const auto sol = solve_riccati({c0, c1, 0.5 * s2, horizon}, n_steps);
      return par.kappa * par.theta * sol.psi_integral + par.v0 * sol.psi;
    }
    case CgfMeasure::DeepGamma1: {
      if (!(eps > 0.0)) throw InvalidInput("finite_T_cgf: deep kinds need eps > 0");
      const double p = u * eps * eps;
      // eps^3 * J^eps with J^eps = p^2/(2 eps^3) - p/(2 eps^2)
      const double c0 = 0.5 * p * p - 0.5 * p * eps;
      const double c1 = par.kappa * eps * eps - p * par.rho * par.sigma;
      const auto sol = solve_riccati({c0, c1, 0.5 * s2, horizon}, n_steps);
      return par.kappa * par.theta * sol.psi_integral + par.v0 * sol.psi / (eps * eps);
    }
    case CgfMeasure::DeepGammaII: {
      if (!(eps > 0.0)) throw InvalidInput("finite_T_cgf: deep kinds need eps > 0");
      const double p = u * eps * eps;
      // eps^3 * J^eps_II with J^eps_II = p^2/(2 eps^3) + p hbar / eps^2
      const double c0 = 0.5 * p * p + p * hbar * eps;
      const double c1 = par.kappa * eps * eps - p * par.rho * par.sigma;
      const auto sol = solve_riccati({c0, c1, 0.5 * s2, horizon}, n_steps);
      return par.kappa * par.theta * sol.psi_integral + par.v0 * sol.psi / (eps * eps);
    }
    case CgfMeasure::DeepTermI:
    default: {
      if (!(eps > 0.0)) throw InvalidInput("finite_T_cgf: deep kinds need eps > 0");
      const double big_c = 1.0 + 2.0 * hbar + hbar * hbar / rb2;
      // eps^3 * (q C(hbar) / eps)
      const double c0 = u * big_c * eps * eps;
      const double c1 = par.kappa * eps * eps - 2.0 * par.rho * par.sigma * eps;
      const auto sol = solve_riccati({c0, c1, 0.5 * s2, horizon}, n_steps);
      return par.kappa * par.theta * sol.psi_integral + par.v0 * sol.psi / (eps * eps);
    }
  }
}

// Finite-parameter approximation of Gamma(p), directly comparable to the
// closed forms: T log E[...] for the short kinds, eps^2 log E[...] deep.
inline double scgf_oracle(const ScgfFunction& f, double p, double small, int n_steps = 10000) {
  switch (f.kind) {
    case ScgfKind::ShortGamma1:
      return small * finite_T_cgf(p / small, small, f.params, 0.0, CgfMeasure::ShortGamma1, 0.0,
                                  n_steps);
    case ScgfKind::ShortGammaII: {
      const double hbar = -f.context / (f.params.theta * small);
      return small * finite_T_cgf(p / small, small, f.params, hbar, CgfMeasure::ShortGammaII,
                                  0.0, n_steps);
    }
    case ScgfKind::DeepGamma1: {
      const double eps = small;
      return eps * eps * finite_T_cgf(p / (eps * eps), f.context, f.params, 0.0,
                                      CgfMeasure::DeepGamma1, eps, n_steps);
    }
    case ScgfKind::DeepGammaII:
    default: {
      const double eps = small;
      const double hbar = -1.0 / (eps * f.params.theta * f.context);
      return eps * eps * finite_T_cgf(p / (eps * eps), f.context, f.params, hbar,
                                      CgfMeasure::DeepGammaII, eps, n_steps);
    }
  }
}

inline double term1_oracle_short(double q, const HestonParams& par, double k, double maturity,
                                 int n_steps = 10000) {
  const double hbar = -k / (par.theta * maturity);
  return (maturity / q) *
         finite_T_cgf(q, maturity, par, hbar, CgfMeasure::ShortTermI, 0.0, n_steps);
}

inline double term1_oracle_deep(double q, const HestonParams& par, double maturity, double eps,
                                int n_steps = 10000) {
  const double hbar = -1.0 / (eps * par.theta * maturity);
  return (eps * eps / q) *
         finite_T_cgf(q, maturity, par, hbar, CgfMeasure::DeepTermI, eps, n_steps);
}

// ---------------------------------------------------------------------------
// Closed form of the limiting auxiliary Riccati itself (u'' + beta u' +
// gamma u = 0 with u(0)=1, u'(0)=0).  This is what the ODE oracle converges
// to; exposed for diagnostics so oracle deviations can be attributed.
// ---------------------------------------------------------------------------

namespace detail {

inline double limit_riccati_value(double alpha, double beta, const HestonParams& par,
                                  double tau) {
  const double s2 = par.sigma * par.sigma;
  const double gamma = 0.5 * alpha * s2;
  const double disc = beta * beta - 4.0 * gamma;
  if (std::abs(disc) < 1e-14) {
    return par.v0 * (0.5 * beta * beta * tau / s2) / (1.0 + 0.5 * beta * tau);
  }
  double w, sn, cs;
  if (disc < 0.0) {
    w = 0.5 * std::sqrt(-disc);
    sn = std::sin(w * tau);
    cs = std::cos(w * tau);
  } else {
    w = 0.5 * std::sqrt(disc);
    sn = std::sinh(w * tau);
    cs = std::cosh(w * tau);
  }
  return par.v0 * 4.0 * gamma * sn / (s2 * (2.0 * w * cs + beta * sn));
}

}  // namespace detail

inline double gammaII_short_riccati_limit(double p, const HestonParams& par, double k) {
  const double alpha = 0.5 * p * p * par.rho_bar * par.rho_bar - p * k / par.theta;
  const double beta = -p * par.rho * par.sigma;
  return detail::limit_riccati_value(alpha, beta, par, 1.0);
}

inline double gammaII_deep_riccati_limit(double p, const HestonParams& par, double maturity) {
  const double alpha = 0.5 * p * p - p / (par.theta * maturity);
  const double beta = -p * par.rho * par.sigma;
  return detail::limit_riccati_value(alpha, beta, par, maturity);
}

}  // namespace hestonis
