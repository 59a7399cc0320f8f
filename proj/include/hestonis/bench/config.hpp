#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hestonis/errors.hpp"
#include "hestonis/estimator.hpp"
#include "hestonis/model.hpp"
#include "hestonis/rate.hpp"

namespace hestonis::bench {

enum class ExperimentKind { Table1, VrrSweep, ScgfCheck, OptimalityReport, Price };

enum class RegimeChoice { Short, Deep, Both };

// Flat sectioned key-value experiment description.  Doubles are serialised
// with max_digits10 so a parse/serialise round trip is exact.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Price;
  // [model]
  double kappa = 60.0, theta = 0.36, sigma = 3.0, rho = -0.1, v0 = 0.36;
  bool model_overridden = false;
  // [market]
  double s0 = 2000.0, strike = 2200.0, maturity = 1.0 / 252.0;
  // [grid]
  std::vector<double> strikes;
  std::vector<double> maturities;
  // [sim]
  SimConfig sim;
  // [experiment]
  RegimeChoice regime = RegimeChoice::Short;
  std::string out = "";

  HestonParams params() const { return HestonParams(kappa, theta, sigma, rho, v0); }
  MarketSpec market() const { return MarketSpec(s0, strike, maturity); }
};

inline const char* kind_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Table1: return "table1";
    case ExperimentKind::VrrSweep: return "vrr-sweep";
    case ExperimentKind::ScgfCheck: return "scgf-check";
    case ExperimentKind::OptimalityReport: return "optimality-report";
    case ExperimentKind::Price:
    default: return "price";
  }
}

inline ExperimentKind kind_from_name(const std::string& s) {
  if (s == "table1") return ExperimentKind::Table1;
  if (s == "vrr-sweep") return ExperimentKind::VrrSweep;
  if (s == "scgf-check") return ExperimentKind::ScgfCheck;
  if (s == "optimality-report") return ExperimentKind::OptimalityReport;
  if (s == "price") return ExperimentKind::Price;
  throw ConfigError("unknown experiment kind: " + s);
}

inline const char* regime_name(RegimeChoice r) {
  switch (r) {
    case RegimeChoice::Short: return "short";
    case RegimeChoice::Deep: return "deep";
    default: return "both";
  }
}

inline RegimeChoice regime_from_name(const std::string& s) {
  if (s == "short") return RegimeChoice::Short;
  if (s == "deep") return RegimeChoice::Deep;
  if (s == "both") return RegimeChoice::Both;
  throw ConfigError("unknown regime: " + s + " (expected short|deep|both)");
}

inline const char* scheme_name(Scheme s) {
  return s == Scheme::EulerFullTruncation ? "euler" : "milstein";
}

inline Scheme scheme_from_name(const std::string& s) {
  if (s == "euler") return Scheme::EulerFullTruncation;
  if (s == "milstein") return Scheme::MilsteinVariance;
  throw ConfigError("unknown scheme: " + s + " (expected euler|milstein)");
}

// Experiment defaults mirror the benchmark parameter sets: the table-1
// experiment uses the high-volatility set, the sweep the slow-reversion set.
inline ExperimentConfig default_config(ExperimentKind kind) {
  ExperimentConfig c;
  c.kind = kind;
  switch (kind) {
    case ExperimentKind::Table1:
      c.maturities = {1.0 / 252.0, 21.0 / 252.0};
      c.out = "table1.csv";
      break;
    case ExperimentKind::VrrSweep:
      c.kappa = 15.0; c.theta = 0.5; c.sigma = 1.0; c.rho = -0.1; c.v0 = 0.5;
      c.strikes.clear();
      for (int i = 0; i <= 10; ++i) c.strikes.push_back(2000.0 + 200.0 * i);
      c.maturities = {1.0 / 252.0, 21.0 / 252.0, 1.0};
      c.regime = RegimeChoice::Deep;
      c.out = "vrr_sweep.csv";
      break;
    case ExperimentKind::ScgfCheck:
      c.kappa = 15.0; c.theta = 0.5; c.sigma = 1.0; c.rho = -0.1; c.v0 = 0.5;
      c.maturity = 1.0;  // horizon for the deep kinds; k = log(strike/s0) for the short
      c.out = "scgf_check.csv";
      break;
    case ExperimentKind::OptimalityReport:
      c.maturity = 1.0;
      c.regime = RegimeChoice::Both;
      c.out = "optimality.csv";
      break;
    case ExperimentKind::Price:
      c.out = "";
      break;
  }
  return c;
}

namespace detail {

inline std::string fmt17(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

inline double parse_double(const std::string& s, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: bad numeric value for '" + key + "': " + s);
  }
}

inline std::vector<double> parse_list(const std::string& s, const std::string& key) {
  std::vector<double> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(parse_double(tok, key));
  return out;
}

}  // namespace detail

inline std::string serialize(const ExperimentConfig& c) {
  using detail::fmt17;
  std::ostringstream os;
  os << "[model]\n";
  os << "kappa = " << fmt17(c.kappa) << "\n";
  os << "theta = " << fmt17(c.theta) << "\n";
  os << "sigma = " << fmt17(c.sigma) << "\n";
  os << "rho = " << fmt17(c.rho) << "\n";
  os << "v0 = " << fmt17(c.v0) << "\n";
  os << "[market]\n";
  os << "s0 = " << fmt17(c.s0) << "\n";
  os << "strike = " << fmt17(c.strike) << "\n";
  os << "maturity = " << fmt17(c.maturity) << "\n";
  os << "[grid]\n";
  os << "strikes =";
  for (double k : c.strikes) os << ' ' << fmt17(k);
  os << "\n";
  os << "maturities =";
  for (double t : c.maturities) os << ' ' << fmt17(t);
  os << "\n";
  os << "[sim]\n";
  os << "paths = " << c.sim.n_paths << "\n";
  os << "steps = " << c.sim.n_steps << "\n";
  os << "seed = " << c.sim.seed << "\n";
  os << "scheme = " << scheme_name(c.sim.scheme) << "\n";
  os << "chunk = " << c.sim.chunk_size << "\n";
  os << "threads = " << c.sim.n_threads << "\n";
  os << "[experiment]\n";
  os << "kind = " << kind_name(c.kind) << "\n";
  os << "regime = " << regime_name(c.regime) << "\n";
  os << "out = " << c.out << "\n";
  return os.str();
}

// Parses the sectioned key = value format on top of `base` (missing keys keep
// their base values).
inline ExperimentConfig parse_config(const std::string& text, ExperimentConfig base) {
  std::istringstream is(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("config line " + std::to_string(lineno) +
                                                ": malformed section header");
      section = line.substr(1, line.size() - 2);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    using detail::parse_double;
    using detail::parse_list;
    if (section == "model") {
      base.model_overridden = true;
      if (key == "kappa") base.kappa = parse_double(val, key);
      else if (key == "theta") base.theta = parse_double(val, key);
      else if (key == "sigma") base.sigma = parse_double(val, key);
      else if (key == "rho") base.rho = parse_double(val, key);
      else if (key == "v0") base.v0 = parse_double(val, key);
      else throw ConfigError("config: unknown model key '" + key + "'");
    } else if (section == "market") {
      if (key == "s0") base.s0 = parse_double(val, key);
      else if (key == "strike") base.strike = parse_double(val, key);
      else if (key == "maturity") base.maturity = parse_double(val, key);
      else throw ConfigError("config: unknown market key '" + key + "'");
    } else if (section == "grid") {
      if (key == "strikes") base.strikes = parse_list(val, key);
      else if (key == "maturities") base.maturities = parse_list(val, key);
      else throw ConfigError("config: unknown grid key '" + key + "'");
    } else if (section == "sim") {
      if (key == "paths") base.sim.n_paths = static_cast<std::size_t>(parse_double(val, key));
      else if (key == "steps") base.sim.n_steps = static_cast<int>(parse_double(val, key));
      else if (key == "seed") base.sim.seed = static_cast<std::uint64_t>(parse_double(val, key));
      else if (key == "scheme") base.sim.scheme = scheme_from_name(val);
      else if (key == "chunk") base.sim.chunk_size = static_cast<std::size_t>(parse_double(val, key));
      else if (key == "threads") base.sim.n_threads = static_cast<int>(parse_double(val, key));
      else throw ConfigError("config: unknown sim key '" + key + "'");
    } else if (section == "experiment") {
      if (key == "kind") base.kind = kind_from_name(val);
      else if (key == "regime") base.regime = regime_from_name(val);
      else if (key == "out") base.out = val;
      else throw ConfigError("config: unknown experiment key '" + key + "'");
    } else {
      throw ConfigError("config: unknown section '" + section + "'");
    }
  }
  return base;
}

inline void check_config(const ExperimentConfig& c) {
  if (!c.strikes.empty()) {
    for (std::size_t i = 1; i < c.strikes.size(); ++i) {
      if (!(c.strikes[i] > c.strikes[i - 1])) {
        throw ConfigError("config: strike grid must be strictly increasing");
      }
    }
  }
  const auto rep = validate(c.params(), c.market());
  std::string msg;
  for (const auto& e : rep.errors) {
    if (e.field == "strike" && c.strike == 0.0) continue;  // degenerate strike allowed
    msg += " " + e.field + " (" + e.message + ");";
  }
  if (!msg.empty()) throw ConfigError("config: invalid parameters:" + msg);
  if (c.sim.n_paths < 2) throw ConfigError("config: paths must be >= 2");
}

}  // namespace hestonis::bench
