#pragma once

#include <cmath>
#include <string>

#include "hestonis/errors.hpp"

namespace hestonis {

// psi' = c0 - c1 psi + c2 psi^2, psi(0) = 0.
struct RiccatiProblem {
  double c0;
  double c1;
  double c2;
  double horizon;
};

struct RiccatiSolution {
  double psi;           // psi(horizon)
  double psi_integral;  // int_0^horizon psi dt (feeds the phi term)
};

// Classical fixed-step RK4.  Refuses to continue past |psi| > 1e12 and
// reports the blow-up time: an explosion locates an SCGF domain endpoint.
inline RiccatiSolution solve_riccati(const RiccatiProblem& prob, int n_steps = 10000) {
  if (n_steps < 100) throw InvalidInput("solve_riccati: n_steps must be >= 100");
  if (!(prob.horizon > 0.0)) throw InvalidInput("solve_riccati: horizon must be > 0");
  constexpr double kGuard = 1e12;
  const double h = prob.horizon / n_steps;
  auto f = [&prob](double y) { return prob.c0 - prob.c1 * y + prob.c2 * y * y; };
  double psi = 0.0;
  double integral = 0.0;
  // RK4 on the augmented system (psi, int psi); the integral update uses the
  // same stage slopes, keeping fourth order for both components.
  for (int i = 0; i < n_steps; ++i) {
    const double k1 = f(psi);
    const double k2 = f(psi + 0.5 * h * k1);
    const double k3 = f(psi + 0.5 * h * k2);
    const double k4 = f(psi + h * k3);
    integral += h * psi + (h * h / 6.0) * (k1 + k2 + k3);
    psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!(std::abs(psi) <= kGuard)) {
      const double t = (i + 1) * h;
      throw ExplosionError("solve_riccati: blow-up at t = " + std::to_string(t), t);
    }
  }
  return {psi, integral};
}

inline double riccati_psi_ode(const RiccatiProblem& prob, int n_steps = 10000) {
  return solve_riccati(prob, n_steps).psi;
}

}  // namespace hestonis
