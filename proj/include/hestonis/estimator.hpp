#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <thread>
#include <vector>

#include "hestonis/errors.hpp"
#include "hestonis/measure.hpp"
#include "hestonis/model.hpp"
#include "hestonis/rng.hpp"

namespace hestonis {

struct SimConfig {
  std::size_t n_paths = std::size_t{1} << 18;
  int n_steps = 0;  // 0 = default_n_steps(maturity)
  Scheme scheme = Scheme::MilsteinVariance;
  std::uint64_t seed = 42;
  std::size_t chunk_size = 4096;
  int n_threads = 0;  // 0 = hardware concurrency; never affects results
};

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  double rel_error = std::numeric_limits<double>::quiet_NaN();
  std::size_t n_paths = 0;
};

// One Monte Carlo run with enough accumulated moments for both the plain
// standard error and the weighted estimate of the brute-force variance.
struct McRunStats {
  Estimate estimate;
  std::size_t positive_payoffs = 0;
  // IS runs: mean of payoff^2 * weight, an unbiased estimate of the
  // brute-force second moment E_P[Y^2] from the tilted sample.
  double weighted_second_moment = 0.0;
};

namespace detail {

// Welford accumulator per chunk; chunks combine in index order so the result
// is independent of thread scheduling and free of sum-of-squares cancellation.
struct ChunkAccum {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;
  double sum_y2w = 0.0;
  std::size_t positive = 0;

  void push(double y) {
    ++n;
    const double delta = y - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (y - mean);
  }

  void combine(const ChunkAccum& other) {
    if (other.n == 0) return;
    if (n == 0) {
      *this = other;
      return;
    }
    const double na = static_cast<double>(n);
    const double nb = static_cast<double>(other.n);
    const double delta = other.mean - mean;
    mean += delta * nb / (na + nb);
    m2 += other.m2 + delta * delta * na * nb / (na + nb);
    sum_y2w += other.sum_y2w;
    positive += other.positive;
    n += other.n;
  }
};

// Chunk index c draws from substream c of the master seed; paths inside a
// chunk consume the substream sequentially.  The reduction runs in chunk
// order, so results are independent of the thread count.
template <class PathEval>
McRunStats run_chunked(std::size_t n_paths, std::size_t chunk_size, std::uint64_t seed,
                       int n_threads, PathEval&& eval) {
  if (n_paths < 2) throw InvalidInput("run_chunked: need at least 2 paths");
  if (chunk_size == 0) throw InvalidInput("run_chunked: chunk_size must be positive");
  const std::size_t n_chunks = (n_paths + chunk_size - 1) / chunk_size;
  std::vector<ChunkAccum> chunks(n_chunks);

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= n_chunks) return;
      const std::size_t begin = c * chunk_size;
      const std::size_t end = std::min(begin + chunk_size, n_paths);
      NormalStream normals(seed, c);
      ChunkAccum acc;
      for (std::size_t i = begin; i < end; ++i) {
        const auto [y, y2w] = eval(normals);
        acc.push(y);
        acc.sum_y2w += y2w;
        if (y > 0.0) ++acc.positive;
      }
      chunks[c] = acc;
    }
  };

  int hw = n_threads > 0 ? n_threads : static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (static_cast<std::size_t>(hw) > n_chunks) hw = static_cast<int>(n_chunks);
  if (hw == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(hw);
    for (int t = 0; t < hw; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  ChunkAccum total;
  for (const auto& c : chunks) total.combine(c);
  const double n = static_cast<double>(n_paths);
  const double var = std::max(0.0, total.m2 / (n - 1.0));
  McRunStats out;
  out.estimate.mean = total.mean;
  out.estimate.std_error = std::sqrt(var / n);
  out.estimate.rel_error = total.mean > 0.0 ? out.estimate.std_error / total.mean
                                            : std::numeric_limits<double>::quiet_NaN();
  out.estimate.n_paths = n_paths;
  out.positive_payoffs = total.positive;
  out.weighted_second_moment = total.sum_y2w / n;
  return out;
}

inline int resolve_steps(const SimConfig& sim, const MarketSpec& m) {
  return sim.n_steps > 0 ? sim.n_steps : default_n_steps(m.maturity);
}

}  // namespace detail

// Brute-force Monte Carlo price of (S_T - K)^+ under the pricing measure.
inline McRunStats bmc_run(const HestonParams& p, const MarketSpec& m, const SimConfig& sim,
                          std::uint64_t seed_override) {
  const SimGrid grid(m.maturity, detail::resolve_steps(sim, m));
  const DriftMode mode = DriftMode::original();
  return detail::run_chunked(
      sim.n_paths, sim.chunk_size, seed_override, sim.n_threads, [&](NormalStream& g) {
        const auto [state, acc] = simulate_path(p, m, grid, sim.scheme, mode, g);
        (void)acc;
        const double y = std::max(std::exp(state.x) - m.strike, 0.0);
        return std::pair<double, double>(y, y * y);
      });
}

// Importance-sampling run: paths under the tilted measure, payoffs weighted
// by exp(log_weight).
inline McRunStats is_run(const HestonParams& p, const MarketSpec& m, const SimConfig& sim,
                         double hbar, std::uint64_t seed_override) {
  const SimGrid grid(m.maturity, detail::resolve_steps(sim, m));
  const DriftMode mode = DriftMode::tilted(hbar);
  return detail::run_chunked(
      sim.n_paths, sim.chunk_size, seed_override, sim.n_threads, [&](NormalStream& g) {
        const auto [state, acc] = simulate_path(p, m, grid, sim.scheme, mode, g);
        const double w = std::exp(log_weight(acc, hbar, p.rho_bar));
        const double payoff = std::max(std::exp(state.x) - m.strike, 0.0);
        return std::pair<double, double>(payoff * w, payoff * payoff * w);
      });
}

inline Estimate bmc_price(const HestonParams& p, const MarketSpec& m, const SimConfig& sim) {
  return bmc_run(p, m, sim, sim.seed).estimate;
}

inline Estimate is_price(const HestonParams& p, const MarketSpec& m, const SimConfig& sim,
                         double hbar) {
  return is_run(p, m, sim, hbar, sim.seed).estimate;
}

struct VrrReport {
  Estimate bmc;
  Estimate is_est;
  double vrr = std::numeric_limits<double>::quiet_NaN();
  bool vrr_defined = false;
};

// Paired runs on independent substream families (seed, seed + 1); the ratio
// stays undefined when either sample standard error degenerates to zero.
inline VrrReport vrr_report(const HestonParams& p, const MarketSpec& m, const SimConfig& sim,
                            double hbar) {
  VrrReport rep;
  rep.bmc = bmc_run(p, m, sim, sim.seed).estimate;
  rep.is_est = is_run(p, m, sim, hbar, sim.seed + 1).estimate;
  if (rep.bmc.std_error > 0.0 && rep.is_est.std_error > 0.0) {
    const double ratio = rep.bmc.std_error / rep.is_est.std_error;
    rep.vrr = ratio * ratio;
    rep.vrr_defined = true;
  }
  return rep;
}

}  // namespace hestonis
