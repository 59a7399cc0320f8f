#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hestonis/errors.hpp"

namespace hestonis {

// Heston coefficients.  rho_bar = sqrt(1 - rho^2) is stored because it shows
// up in every drift/weight formula.
struct HestonParams {
  double kappa;
  double theta;
  double sigma;
  double rho;
  double v0;
  double rho_bar;
  bool feller_satisfied;

  HestonParams(double kappa_, double theta_, double sigma_, double rho_, double v0_)
      : kappa(kappa_), theta(theta_), sigma(sigma_), rho(rho_), v0(v0_) {
    if (!std::isfinite(rho) || std::abs(rho) >= 1.0) {
      throw InvalidInput("HestonParams: |rho| must be < 1, got " + std::to_string(rho));
    }
    rho_bar = std::sqrt(1.0 - rho * rho);
    feller_satisfied = 2.0 * kappa * theta >= sigma * sigma;
  }
};

// Market data for one European call.  Zero risk-free rate throughout.
// epsilon = 1/log(K/S0) is the deep-OTM small parameter; only defined for
// strikes above spot.
struct MarketSpec {
  double s0;
  double strike;
  double maturity;
  static constexpr double rate = 0.0;
  double log_moneyness;
  std::optional<double> epsilon;

  MarketSpec(double s0_, double strike_, double maturity_)
      : s0(s0_), strike(strike_), maturity(maturity_) {
    if (s0 > 0.0 && strike > 0.0) {
      log_moneyness = std::log(strike / s0);
    } else {
      log_moneyness = -std::numeric_limits<double>::infinity();
    }
    if (strike > s0 && s0 > 0.0) {
      epsilon = 1.0 / log_moneyness;
    }
  }
};

struct ValidationIssue {
  std::string field;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> errors;
  bool feller_ok = true;

  bool passed() const { return errors.empty(); }
  bool feller_warning() const { return !feller_ok; }
};

inline ValidationReport validate(const HestonParams& p, const MarketSpec& m) {
  ValidationReport rep;
  auto positive = [&rep](double value, const char* field) {
    if (!std::isfinite(value)) {
      rep.errors.push_back({field, "must be finite"});
    } else if (!(value > 0.0)) {
      rep.errors.push_back({field, "must be > 0"});
    }
  };
  positive(p.kappa, "kappa");
  positive(p.theta, "theta");
  positive(p.sigma, "sigma");
  positive(p.v0, "v0");
  if (!std::isfinite(p.rho) || std::abs(p.rho) >= 1.0) {
    rep.errors.push_back({"rho", "must satisfy |rho| < 1"});
  }
  positive(m.s0, "s0");
  positive(m.strike, "strike");
  positive(m.maturity, "maturity");
  rep.feller_ok = p.feller_satisfied;
  return rep;
}

enum class Scheme {
  EulerFullTruncation,
  MilsteinVariance,
};

struct SimGrid {
  int n_steps;
  double dt;

  SimGrid(double maturity, int n_steps_) : n_steps(n_steps_) {
    if (n_steps < 1) throw InvalidInput("SimGrid: n_steps must be >= 1");
    if (!(maturity > 0.0)) throw InvalidInput("SimGrid: maturity must be > 0");
    dt = maturity / n_steps;
  }
};

// Log-price drift selector.  Tilted adds the IS drift -hbar*v to the
// log-price; the variance dynamics are identical under both measures.
struct DriftMode {
  enum class Kind { Original, Tilted } kind = Kind::Original;
  double hbar = 0.0;

  static DriftMode original() { return {Kind::Original, 0.0}; }
  static DriftMode tilted(double hbar_) { return {Kind::Tilted, hbar_}; }

  double effective_hbar() const { return kind == Kind::Tilted ? hbar : 0.0; }
};

struct PathState {
  double x;
  double v;
  double t;
};

// Discrete integrals accumulated along a path under the simulation measure.
// int_sqrtv_dw2 uses the same truncated sqrt(v+) as the scheme so the
// discrete Girsanov identity is exact.
struct PathAccumulators {
  double int_v_dt = 0.0;
  double int_sqrtv_dw2 = 0.0;
  double x_T = 0.0;
};

// One discretisation step.  Full truncation: every v and sqrt(v) coefficient
// is evaluated at v+ = max(v, 0) and the updated variance is clamped at zero.
inline PathState step(const PathState& s, const HestonParams& p, double dt, double dw1,
                      double dw2, const DriftMode& mode, Scheme scheme) {
  const double vp = s.v > 0.0 ? s.v : 0.0;
  const double sq = std::sqrt(vp);
  const double hbar = mode.effective_hbar();

  PathState out;
  out.x = s.x + (-0.5 - hbar) * vp * dt + sq * (p.rho * dw1 + p.rho_bar * dw2);
  double v_next = s.v + p.kappa * (p.theta - vp) * dt + p.sigma * sq * dw1;
  if (scheme == Scheme::MilsteinVariance) {
    v_next += 0.25 * p.sigma * p.sigma * (dw1 * dw1 - dt);
  }
  out.v = v_next > 0.0 ? v_next : 0.0;
  out.t = s.t + dt;
  return out;
}

// Simulates one path on the grid, consuming 2*n_steps standard normals from
// `normals` (W1 draw first, then W2).  Accumulators use the left-point rule.
template <class NormalSource>
std::pair<PathState, PathAccumulators> simulate_path(const HestonParams& p, const MarketSpec& m,
                                                     const SimGrid& grid, Scheme scheme,
                                                     const DriftMode& mode,
                                                     NormalSource&& normals) {
  const double sqdt = std::sqrt(grid.dt);
  PathState s{std::log(m.s0), p.v0, 0.0};
  PathAccumulators acc;
  for (int i = 0; i < grid.n_steps; ++i) {
    const double dw1 = normals() * sqdt;
    const double dw2 = normals() * sqdt;
    const double vp = s.v > 0.0 ? s.v : 0.0;
    acc.int_v_dt += vp * grid.dt;
    acc.int_sqrtv_dw2 += std::sqrt(vp) * dw2;
    s = step(s, p, grid.dt, dw1, dw2, mode, scheme);
  }
  acc.x_T = s.x;
  return {s, acc};
}

// Default step-count rule; below one month of bias headroom is plenty at
// M = 2^18, one year needs the finer grid.
inline int default_n_steps(double maturity) { return maturity <= 21.0 / 252.0 ? 256 : 512; }

}  // namespace hestonis
