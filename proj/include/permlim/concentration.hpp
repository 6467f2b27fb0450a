#pragma once

// Large-sample distance between a permutation and a permuton, and the
// concentration experiment built on it.
//
// Exact corner enumeration is O(k³) for a length-k permutation, so at
// k ~ 10⁶ the distance is bounded through a coarse lattice instead. With
// lattice points a_0 = 0 < ... < a_m = k, a_i = ⌊ik/m⌋, both CDFs are
// compared at (a_i/k, a_j/k), where F_k is an exact count. For (x,y) in a
// lattice cell with lower corner p and upper corner q, monotonicity gives
//
//   F(x,y) − F_k(x,y) <= F(q) − F_k(p) <= (F − F_k)(q) + F_k(q) − F_k(p),
//
// and F_k(q) − F_k(p) is at most the two strip masses, each bounded by the
// cell width <= 1/m + 1/k. Hence d_∞ <= grid max + 2/m + 4/k, and
// d_□ <= 4·d_∞ by the sandwich inequality.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "permlim/errors.hpp"
#include "permlim/permutation.hpp"
#include "permlim/permuton.hpp"
#include "permlim/random.hpp"
#include "permlim/sampling.hpp"

namespace permlim {

struct GridApproximation {
  std::size_t resolution = 0;
  double d_infty_grid = 0.0;  // max |F − F_k| over lattice points
  double envelope = 0.0;      // 2/m + 4/k
  double d_infty_upper = 0.0;
  double d_square_upper = 0.0;  // 4 · d_infty_upper
};

/// Upper bounds on d_∞(Z_σ, Z) and d_□(Z_σ, Z) from an (m+1)×(m+1) lattice.
inline GridApproximation approximate_distance(const Permutation& sigma, const Permuton& z, std::size_t m) {
  const std::size_t k = sigma.size();
  if (m == 0) throw InputError("lattice resolution must be at least 1");
  m = std::min(m, k);
  std::vector<std::size_t> lattice(m + 1);
  for (std::size_t i = 0; i <= m; ++i) lattice[i] = static_cast<std::size_t>((static_cast<unsigned __int128>(i) * k) / m);

  // bucket[v] = smallest j with lattice[j] >= v.
  std::vector<std::uint32_t> bucket(k + 1, 0);
  for (std::size_t j = 1, v = 1; j <= m; ++j)
    for (; v <= lattice[j]; ++v) bucket[v] = static_cast<std::uint32_t>(j);

  std::vector<double> coords(m + 1);
  for (std::size_t i = 0; i <= m; ++i) coords[i] = static_cast<double>(lattice[i]) / static_cast<double>(k);

  std::vector<std::uint64_t> per_bucket(m + 1, 0);
  double worst = 0.0;
  const double kd = static_cast<double>(k);
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t pos = lattice[i - 1] + 1; pos <= lattice[i]; ++pos) ++per_bucket[bucket[sigma(pos)]];
    std::uint64_t running = 0;
    for (std::size_t j = 1; j <= m; ++j) {
      running += per_bucket[j];
      const double empirical = static_cast<double>(running) / kd;
      worst = std::max(worst, std::abs(joint_cdf(z, coords[i], coords[j]) - empirical));
    }
  }

  GridApproximation out;
  out.resolution = m;
  out.d_infty_grid = worst;
  out.envelope = 2.0 / static_cast<double>(m) + 4.0 / kd;
  out.d_infty_upper = worst + out.envelope;
  out.d_square_upper = 4.0 * out.d_infty_upper;
  return out;
}

/// 16·k^{-1/4}, the high-probability bound on d_□(Z, σ(k,Z)).
inline double concentration_bound(std::size_t k) { return 16.0 / std::pow(static_cast<double>(k), 0.25); }

struct ConcentrationTrial {
  std::uint64_t seed = 0;
  GridApproximation distance;
  bool within_bound = false;
};

struct ConcentrationReport {
  std::size_t k = 0;
  std::uint64_t master_seed = 0;
  double bound = 0.0;
  bool vacuous = false;  // bound >= 1, so every trial succeeds trivially
  std::vector<ConcentrationTrial> trials;
  std::size_t successes = 0;

  double frequency() const {
    return trials.empty() ? 0.0 : static_cast<double>(successes) / static_cast<double>(trials.size());
  }
};

/**
 * Draws `trials` independent σ(k,Z), trial t seeded with
 * derive_seed(master_seed, t), and counts how often the lattice upper
 * bound on d_□(Z, σ(k,Z)) is within 16·k^{-1/4}. Results do not depend on
 * `threads`.
 */
inline ConcentrationReport concentration_experiment(const Permuton& z, std::size_t k, std::size_t trials,
                                                    std::uint64_t master_seed, std::size_t resolution = 1024,
                                                    std::size_t threads = 1) {
  if (k == 0) throw InputError("k must be at least 1");
  if (trials == 0) throw InputError("trials must be at least 1");
  ConcentrationReport report;
  report.k = k;
  report.master_seed = master_seed;
  report.bound = concentration_bound(k);
  report.vacuous = report.bound >= 1.0;
  report.trials.resize(trials);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < trials; t = next++) {
      ConcentrationTrial& trial = report.trials[t];
      trial.seed = derive_seed(master_seed, t);
      Rng rng(trial.seed);
      const Permutation sigma = z_random_permutation(z, k, rng);
      trial.distance = approximate_distance(sigma, z, resolution);
      trial.within_bound = trial.distance.d_square_upper <= report.bound;
    }
  };
  threads = std::clamp<std::size_t>(threads, 1, trials);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(worker);
  }
  for (const auto& t : report.trials) report.successes += t.within_bound ? 1 : 0;
  return report;
}

}  // namespace permlim
