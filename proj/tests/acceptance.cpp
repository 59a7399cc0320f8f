// Acceptance suite: one test case per criterion, each printing the measured
// quantities next to its thresholds.  Run a single criterion with
//   ./acceptance "AC03*"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <vector>

#include "hestonis/bench/config.hpp"
#include "hestonis/bench/experiments.hpp"
#include "hestonis/estimator.hpp"
#include "hestonis/fourier.hpp"
#include "hestonis/measure.hpp"
#include "hestonis/rate.hpp"
#include "hestonis/scgf.hpp"
#include "support.hpp"

using namespace hestonis;
using namespace hestonis::bench;

namespace {

const HestonParams kHighVol(60.0, 0.36, 3.0, -0.1, 0.36);  // high-volatility set
const HestonParams kSlowRev(15.0, 0.5, 1.0, -0.1, 0.5);    // slow-reversion set
constexpr double kS0 = 2000.0;
constexpr double kOneDay = 1.0 / 252.0;
constexpr double kOneMonth = 21.0 / 252.0;

SimConfig paper_sim() {
  SimConfig s;
  s.n_paths = std::size_t{1} << 18;
  s.seed = 42;
  return s;
}

struct TableRun {
  VrrReport rep;
  double reference;
};

TableRun run_table_point(double maturity) {
  MarketSpec m(kS0, 2200.0, maturity);
  const double hbar = hbar_short_maturity(m, kHighVol.theta);
  TableRun out{vrr_report(kHighVol, m, paper_sim(), hbar), reference_price(kHighVol, m)};
  return out;
}

ExperimentConfig sweep_config(double maturity, std::vector<double> strikes) {
  ExperimentConfig c = default_config(ExperimentKind::VrrSweep);
  c.maturities = {maturity};
  c.strikes = std::move(strikes);
  c.sim = paper_sim();
  return c;
}

std::vector<double> default_strikes() {
  std::vector<double> ks;
  for (int i = 0; i <= 10; ++i) ks.push_back(kS0 * (1.0 + 0.1 * i));
  return ks;
}

double grid_point(const ScgfDomain& d, int i, int n, double inset) {
  const double lo = d.p_minus + inset * d.width();
  const double hi = d.p_plus - inset * d.width();
  return lo + (hi - lo) * i / (n - 1);
}

}  // namespace

TEST_CASE("AC01 table1 short maturity: prices vs reference, IS error, VRR band",
          "[acceptance]") {
  const auto r = run_table_point(kOneDay);
  std::printf("[AC01] ref=%.6f bmc=%.6f(se %.6f) is=%.6f(se %.6f) relerr=%.4f%% vrr=%.1f\n",
              r.reference, r.rep.bmc.mean, r.rep.bmc.std_error, r.rep.is_est.mean,
              r.rep.is_est.std_error, 100.0 * r.rep.is_est.rel_error, r.rep.vrr);
  REQUIRE(std::abs(r.rep.bmc.mean - r.reference) <= 3.0 * r.rep.bmc.std_error);
  REQUIRE(std::abs(r.rep.is_est.mean - r.reference) <= 3.0 * r.rep.is_est.std_error);
  REQUIRE(r.rep.is_est.rel_error < 0.01);
  REQUIRE(r.rep.vrr_defined);
  REQUIRE(r.rep.vrr >= 50.0);
  REQUIRE(r.rep.vrr <= 400.0);
}

TEST_CASE("AC02 table1 one month: prices vs reference, VRR band", "[acceptance]") {
  const auto r = run_table_point(kOneMonth);
  std::printf("[AC02] ref=%.4f bmc=%.4f(se %.4f) is=%.4f(se %.4f) vrr=%.2f\n", r.reference,
              r.rep.bmc.mean, r.rep.bmc.std_error, r.rep.is_est.mean, r.rep.is_est.std_error,
              r.rep.vrr);
  REQUIRE(std::abs(r.rep.bmc.mean - r.reference) <= 3.0 * r.rep.bmc.std_error);
  REQUIRE(std::abs(r.rep.is_est.mean - r.reference) <= 3.0 * r.rep.is_est.std_error);
  REQUIRE(r.rep.vrr_defined);
  REQUIRE(r.rep.vrr >= 1.5);
  REQUIRE(r.rep.vrr <= 8.0);
}

TEST_CASE("AC03 VRR sweep at one day: increasing trend, floor at K/S0 = 1.5",
          "[acceptance]") {
  const auto rows = vrr_sweep_rows(sweep_config(kOneDay, default_strikes()));
  std::vector<double> moneyness, vrr;
  double vrr_at_15 = 0.0;
  for (const auto& r : rows) {
    moneyness.push_back(r.moneyness);
    vrr.push_back(r.vrr);
    if (std::abs(r.moneyness - 1.5) < 1e-12) vrr_at_15 = r.vrr;
    std::printf("[AC03] K/S0=%.1f vrr=%.6g (%s)\n", r.moneyness, r.vrr,
                r.vrr_estimator.c_str());
    REQUIRE(std::isfinite(r.vrr));
  }
  const double rho_s = testsup::spearman(moneyness, vrr);
  std::printf("[AC03] spearman=%.4f vrr(1.5)=%.6g\n", rho_s, vrr_at_15);
  REQUIRE(rho_s > 0.9);
  REQUIRE(vrr_at_15 >= 100.0);
}

TEST_CASE("AC04 VRR sweep at one year: floor and ordering against one day",
          "[acceptance]") {
  const auto year = vrr_sweep_rows(sweep_config(1.0, default_strikes()));
  std::vector<double> deep_strikes;
  for (double k : default_strikes()) {
    if (k >= 1.5 * kS0) deep_strikes.push_back(k);
  }
  const auto day = vrr_sweep_rows(sweep_config(kOneDay, deep_strikes));
  for (const auto& r : year) {
    std::printf("[AC04] T=1 K/S0=%.1f vrr=%.4g (%s)\n", r.moneyness, r.vrr,
                r.vrr_estimator.c_str());
    REQUIRE(r.vrr >= 0.8);
  }
  for (const auto& d : day) {
    for (const auto& y : year) {
      if (y.strike == d.strike) {
        std::printf("[AC04] K/S0=%.1f: T=1 vrr=%.4g <= T=1/252 vrr=%.4g\n", y.moneyness, y.vrr,
                    d.vrr);
        REQUIRE(y.vrr <= d.vrr);
      }
    }
  }
}

TEST_CASE("AC05 SCGF oracle equivalence on interior grids", "[acceptance]") {
  struct Item {
    const char* name;
    ScgfFunction fn;
  };
  const double k = std::log(1.1);
  const std::vector<Item> items = {
      {"gamma1_short", ScgfFunction::make(ScgfKind::ShortGamma1, kSlowRev)},
      {"gammaII_short", ScgfFunction::make(ScgfKind::ShortGammaII, kSlowRev, k)},
      {"gamma1_deep", ScgfFunction::make(ScgfKind::DeepGamma1, kSlowRev, 1.0)},
      {"gammaII_deep", ScgfFunction::make(ScgfKind::DeepGammaII, kSlowRev, 1.0)},
  };
  for (const auto& item : items) {
    double errs[3];
    int idx = 0;
    for (double small : {1e-2, 1e-3, 1e-4}) {
      double max_err = 0.0;
      for (int i = 0; i < 9; ++i) {
        const double p = grid_point(item.fn.domain, i, 9, kScgfCheckInset);
        max_err = std::max(max_err, std::abs(item.fn(p) - scgf_oracle(item.fn, p, small)));
      }
      errs[idx++] = max_err;
    }
    std::printf("[AC05] %s: err(1e-2)=%.3e err(1e-3)=%.3e err(1e-4)=%.3e\n", item.name,
                errs[0], errs[1], errs[2]);
    INFO(item.name << ": closed form vs ODE-oracle limit");
    CHECK(errs[1] < errs[0]);
    CHECK(errs[2] < errs[1]);
    CHECK(errs[2] <= 1e-3);
  }
}

TEST_CASE("AC06 gamma1_short domain endpoints vs bisection", "[acceptance]") {
  for (double rho : {-0.1, 0.0, 0.3}) {
    HestonParams p(15.0, 0.5, 1.0, rho, 0.5);
    const auto d = domain_gamma1_short(p);
    auto denom = [&](double q) {
      return p.sigma * (-p.rho + p.rho_bar / std::tan(0.5 * p.sigma * p.rho_bar * q));
    };
    for (double endpoint : {d.p_minus, d.p_plus}) {
      double lo = endpoint - 1e-3, hi = endpoint + 1e-3;
      for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (denom(mid) > 0.0) lo = mid; else hi = mid;
      }
      const double located = 0.5 * (lo + hi);
      std::printf("[AC06] rho=%+.1f endpoint=%.9f bisection=%.9f |diff|=%.2e\n", rho, endpoint,
                  located, std::abs(located - endpoint));
      REQUIRE(std::abs(located - endpoint) <= 1e-6);
    }
  }
}

TEST_CASE("AC07 Legendre duality suite", "[acceptance]") {
  SECTION("quadratic self-test") {
    const ScgfDomain dom{-10.0, 10.0};
    auto quad = [](double p) { return 0.5 * p * p; };
    for (double x : {-2.0, 0.0, 0.7, 3.0}) {
      const auto r = legendre_transform(quad, dom, x);
      REQUIRE(std::abs(r.lambda - 0.5 * x * x) <= 1e-10);
    }
    std::printf("[AC07] quadratic self-test ok\n");
  }

  const double k = std::log(1.1);
  struct Item {
    const char* name;
    ScgfFunction fn;
  };
  const std::vector<Item> items = {
      {"gamma1_short", ScgfFunction::make(ScgfKind::ShortGamma1, kSlowRev)},
      {"gammaII_short", ScgfFunction::make(ScgfKind::ShortGammaII, kSlowRev, k)},
      {"gamma1_deep", ScgfFunction::make(ScgfKind::DeepGamma1, kSlowRev, 1.0)},
      {"gammaII_deep", ScgfFunction::make(ScgfKind::DeepGammaII, kSlowRev, 1.0)},
  };

  SECTION("lambda(0) = 0 and lambda convex for all four rate functions") {
    for (const auto& item : items) {
      const double l0 = legendre(item.fn, 0.0).lambda;
      std::printf("[AC07] %s lambda(0)=%.2e\n", item.name, l0);
      REQUIRE(std::abs(l0) <= 1e-8);
      std::vector<double> vals;
      for (int i = 0; i <= 12; ++i) {
        vals.push_back(legendre(item.fn, -0.5 + i / 12.0).lambda);
      }
      for (std::size_t i = 1; i + 1 < vals.size(); ++i) {
        REQUIRE(vals[i + 1] - 2.0 * vals[i] + vals[i - 1] >= -1e-8);
      }
    }
  }

  SECTION("duality residual on interior grids") {
    for (const auto& item : items) {
      double max_res = 0.0;
      const double h = 1e-6 * item.fn.domain.width();
      for (int i = 0; i < 9; ++i) {
        const double p = grid_point(item.fn.domain, i, 9, 0.25);
        const double slope = (item.fn(p + h) - item.fn(p - h)) / (2.0 * h);
        const double res = legendre(item.fn, slope).lambda + item.fn(p) - p * slope;
        max_res = std::max(max_res, std::abs(res));
      }
      std::printf("[AC07] %s max duality residual=%.3e\n", item.name, max_res);
      INFO(item.name);
      CHECK(max_res <= 1e-6);
    }
  }
}

TEST_CASE("AC08 measure-change unbiasedness at two grid corners", "[acceptance]") {
  struct Spot {
    const char* label;
    HestonParams params;
    double strike_ratio;
    double maturity;
  };
  const std::vector<Spot> spots = {
      {"K/S0=1.1 T=1/252", kHighVol, 1.1, kOneDay},
      {"K/S0=1.5 T=1", kSlowRev, 1.5, 1.0},
  };
  const std::size_t n_paths = 100000;
  for (const auto& s : spots) {
    MarketSpec m(kS0, kS0 * s.strike_ratio, s.maturity);
    SimGrid grid(m.maturity, default_n_steps(m.maturity));
    for (bool deep : {false, true}) {
      const double hbar =
          deep ? hbar_deep_otm(m, s.params.theta) : hbar_short_maturity(m, s.params.theta);
      NormalStream gen(2024, deep ? 1 : 0);
      double sum = 0.0, sum_sq = 0.0;
      for (std::size_t i = 0; i < n_paths; ++i) {
        const auto [state, acc] = simulate_path(s.params, m, grid, Scheme::MilsteinVariance,
                                                DriftMode::tilted(hbar), gen);
        (void)state;
        const double w = std::exp(log_weight(acc, hbar, s.params.rho_bar));
        sum += w;
        sum_sq += w * w;
      }
      const double mean = sum / n_paths;
      const double se = std::sqrt((sum_sq / n_paths - mean * mean) / (n_paths - 1.0));
      std::printf("[AC08] %s %s tilt: mean(exp(logW))=%.4f se=%.4f dev=%.2f se units\n",
                  s.label, deep ? "deep" : "short", mean, se, std::abs(mean - 1.0) / se);
      REQUIRE(std::abs(mean - 1.0) <= 3.0 * se);
    }
  }
}

TEST_CASE("AC09 optimality gap report for both parameter sets", "[acceptance]") {
  const auto short_rep = minimize_g(Regime::Short, kHighVol, std::log(1.1));
  std::printf("[AC09] short: q*=%.4f G(q*)=%.6f -2L1=%.6f gap=%.1f%%%s interior=%s\n",
              short_rep.q_star, short_rep.g_at_qstar, short_rep.minus_two_lambda1,
              100.0 * short_rep.relative_gap,
              short_rep.relative_gap > 0.05 ? " [FLAG gap > 5%]" : "",
              short_rep.interior ? "yes" : "no");
  const auto deep_rep = minimize_g(Regime::Deep, kSlowRev, 1.0);
  std::printf("[AC09] deep:  q*=%.6f G(q*)=%.6f -2L1=%.6f gap=%.1f%%%s interior=%s\n",
              deep_rep.q_star, deep_rep.g_at_qstar, deep_rep.minus_two_lambda1,
              100.0 * deep_rep.relative_gap,
              deep_rep.relative_gap > 0.05 ? " [FLAG gap > 5%]" : "",
              deep_rep.interior ? "yes" : "no");

  auto check_stationary = [](const OptimalityReport& rep, Regime regime,
                             const HestonParams& par, double context) {
    const double h = 1e-5 * (rep.q_singular - 1.0);
    if (rep.q_star - h <= 1.0 || rep.q_star + h >= rep.q_singular) {
      return false;  // pinned to the bracket edge: not an interior optimum
    }
    auto g = [&](double q) {
      return regime == Regime::Short ? g_short(q, par, context) : g_deep(q, par, context);
    };
    const double left = (g(rep.q_star) - g(rep.q_star - h)) / h;
    const double right = (g(rep.q_star + h) - g(rep.q_star)) / h;
    return (left <= 0.0 && right >= 0.0) ||
           (std::abs(left) < 1e-6 && std::abs(right) < 1e-6);
  };

  REQUIRE(std::isfinite(short_rep.relative_gap));
  REQUIRE(std::isfinite(deep_rep.relative_gap));
  {
    INFO("short-maturity set: interior stationary q*");
    CHECK(short_rep.interior);
    CHECK(check_stationary(short_rep, Regime::Short, kHighVol, std::log(1.1)));
  }
  {
    INFO("deep-OTM set: interior stationary q*");
    CHECK(deep_rep.interior);
    CHECK(check_stationary(deep_rep, Regime::Deep, kSlowRev, 1.0));
  }
}

TEST_CASE("AC10 determinism: byte-identical CSV across runs and thread counts",
          "[acceptance]") {
  ExperimentConfig c = default_config(ExperimentKind::Table1);
  c.sim.n_paths = std::size_t{1} << 14;  // determinism is independent of M
  c.sim.seed = 42;
  c.sim.n_threads = 1;
  const std::string first = run_table1(c).to_string();
  const std::string second = run_table1(c).to_string();
  REQUIRE(first == second);
  for (int threads : {2, 4}) {
    c.sim.n_threads = threads;
    const std::string other = run_table1(c).to_string();
    REQUIRE(other == first);
  }
  std::printf("[AC10] %zu bytes of CSV identical across repeats and thread counts 1/2/4\n",
              first.size());
}
