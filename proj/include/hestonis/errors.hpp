#pragma once

#include <stdexcept>
#include <string>

namespace hestonis {

// Bad user-supplied values (non-finite fields, |rho| >= 1, empty grids, ...).
struct InvalidInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Argument outside the effective domain of an SCGF / past a tangent pole.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Operation undefined in the requested regime (deep-OTM tilt at K <= S0,
// vacuous Hoelder bound, 2 rho^2 >= 1, ...).
struct RegimeError : std::domain_error {
  using std::domain_error::domain_error;
};

// Riccati solution left the guard band before the horizon.  Meaningful:
// the blow-up time locates an effective-domain boundary.
struct ExplosionError : std::runtime_error {
  ExplosionError(const std::string& what, double t) : std::runtime_error(what), blow_up_time(t) {}
  double blow_up_time;
};

// Quadrature failure, non-finite accumulators and similar.
struct NumericFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad experiment configuration (bench front end).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace hestonis
