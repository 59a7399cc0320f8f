#pragma once

#include <cmath>

#include "hestonis/errors.hpp"
#include "hestonis/model.hpp"

namespace hestonis {

// State-dependent change of measure: the tilt acts on W2 only, with drift
// h2(t) = -(hbar/rho_bar) sqrt(V_t); the W1 component is identically zero.
struct ISDrift {
  double hbar = 0.0;

  static constexpr double w1_drift = 0.0;
  double w2_drift(double v, double rho_bar) const {
    return -(hbar / rho_bar) * std::sqrt(v > 0.0 ? v : 0.0);
  }
  bool is_identity() const { return hbar == 0.0; }
};

// Short-maturity tilt: log(S0/K) / (theta T).
inline double hbar_short_maturity(const MarketSpec& m, double theta) {
  if (!(theta > 0.0)) throw InvalidInput("hbar_short_maturity: theta must be > 0");
  if (!(m.maturity > 0.0)) throw InvalidInput("hbar_short_maturity: maturity must be > 0");
  if (!(m.strike > 0.0) || !(m.s0 > 0.0)) {
    throw InvalidInput("hbar_short_maturity: s0 and strike must be > 0");
  }
  return std::log(m.s0 / m.strike) / (theta * m.maturity);
}

// Deep-OTM tilt: -1 / (epsilon theta T), only defined for K > S0.
inline double hbar_deep_otm(const MarketSpec& m, double theta) {
  if (!(theta > 0.0)) throw InvalidInput("hbar_deep_otm: theta must be > 0");
  if (!(m.maturity > 0.0)) throw InvalidInput("hbar_deep_otm: maturity must be > 0");
  if (!m.epsilon.has_value()) {
    throw RegimeError("hbar_deep_otm: requires K > S0 (epsilon undefined)");
  }
  return -1.0 / (*m.epsilon * theta * m.maturity);
}

// log L_T = log(dP/dPbar) expressed in simulation-measure increments:
//   +(hbar/rho_bar) * int sqrt(V) dW2bar - 1/2 (hbar/rho_bar)^2 * int V dt.
// The IS payoff weight is exp(log_weight).
inline double log_weight(const PathAccumulators& acc, double hbar, double rho_bar) {
  if (!std::isfinite(acc.int_v_dt) || !std::isfinite(acc.int_sqrtv_dw2)) {
    throw NumericFailure("log_weight: non-finite path accumulators");
  }
  const double a = hbar / rho_bar;
  return a * acc.int_sqrtv_dw2 - 0.5 * a * a * acc.int_v_dt;
}

}  // namespace hestonis
