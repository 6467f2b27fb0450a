#pragma once

/**
 * @file density.hpp
 * @brief Pattern densities t(τ,Z) = P(σ(k,Z) = τ) inside permutons.
 *
 * Two routes are provided. The Monte Carlo estimator samples σ(k,Z)
 * repeatedly. The exact evaluator handles grid permutons in closed form:
 *
 * By exchangeability of the k iid points,
 *
 *   t(τ,Z) = k! · P(X_1 < ... < X_k  and  Y_{q_1} < ... < Y_{q_k}),   q = τ⁻¹.
 *
 * Condition on the cells the points fall in. Point i lands in cell (r_i, c_i)
 * with probability M[r_i][c_i]/m, and within a cell its coordinates are
 * independent uniforms. The horizontal chain has probability zero unless
 * r_1 <= ... <= r_k, and then equals Π 1/g! over the groups g of equal r
 * (points sharing a band are in uniformly random order). The vertical chain
 * is handled the same way along q. Both chains are conditionally
 * independent, so the evaluator sums
 *
 *   k! · Π_i M[r_i][c_i]/m · Π_groups(r) 1/g! · Π_groups(c along q) 1/g!
 *
 * over nondecreasing r and nondecreasing c∘q; C(m+k-1,k)² terms at most.
 */

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "permlim/counting.hpp"
#include "permlim/errors.hpp"
#include "permlim/permutation.hpp"
#include "permlim/permuton.hpp"
#include "permlim/rational.hpp"
#include "permlim/sampling.hpp"

namespace permlim {

inline constexpr std::size_t kMaxExactPatternLength = 4;
inline constexpr std::size_t kMaxExactResolution = 8;

enum class DensityMethod { monte_carlo, exact };

inline const char* to_string(DensityMethod m) { return m == DensityMethod::exact ? "exact" : "monte_carlo"; }

struct DensityEstimate {
  double estimate = 0.0;
  double std_error = 0.0;  // Wald: sqrt(p(1-p)/trials); 0 for exact
  std::uint64_t trials = 0;
  DensityMethod method = DensityMethod::monte_carlo;
  std::optional<Rational> exact;
};

/// Fraction of `trials` independent draws of σ(k,Z) equal to τ.
template <Rng64 G>
DensityEstimate density_in_permuton_mc(const Permuton& z, const Permutation& tau, std::uint64_t trials, G& rng) {
  if (trials == 0) throw InputError("trials must be at least 1");
  std::uint64_t hits = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    if (z_random_permutation(z, tau.size(), rng) == tau) ++hits;
  }
  DensityEstimate out;
  out.trials = trials;
  out.estimate = static_cast<double>(hits) / static_cast<double>(trials);
  out.std_error = std::sqrt(out.estimate * (1.0 - out.estimate) / static_cast<double>(trials));
  out.method = DensityMethod::monte_carlo;
  return out;
}

namespace detail {

// All nondecreasing sequences of length k over 1..m, each with its
// Π 1/g! tie weight.
struct ChainTerm {
  std::vector<std::size_t> cells;
  Rational tie_weight;
};

inline void nondecreasing_chains(std::size_t k, std::size_t m, std::vector<std::size_t>& current,
                                 std::vector<ChainTerm>& out) {
  if (current.size() == k) {
    Rational weight = 1;
    std::size_t run = 1;
    for (std::size_t i = 1; i <= k; ++i) {
      if (i < k && current[i] == current[i - 1]) {
        ++run;
      } else {
        weight /= Rational(factorial(run));
        run = 1;
      }
    }
    out.push_back({current, weight});
    return;
  }
  const std::size_t start = current.empty() ? 1 : current.back();
  for (std::size_t c = start; c <= m; ++c) {
    current.push_back(c);
    nondecreasing_chains(k, m, current, out);
    current.pop_back();
  }
}

inline std::vector<ChainTerm> nondecreasing_chains(std::size_t k, std::size_t m) {
  std::vector<ChainTerm> out;
  std::vector<std::size_t> current;
  nondecreasing_chains(k, m, current, out);
  return out;
}

inline GridPermuton as_grid(const Permuton& z) {
  if (std::holds_alternative<UniformPermuton>(z)) return GridPermuton::from_matrix({{Rational(1)}});
  return std::get<GridPermuton>(z);
}

}  // namespace detail

/// Exact t(τ,Z) for a grid permuton; |τ| <= 4 and m <= 8.
inline Rational density_in_permuton_exact(const GridPermuton& z, const Permutation& tau) {
  const std::size_t k = tau.size();
  const std::size_t m = z.resolution();
  if (k > kMaxExactPatternLength) {
    throw GuardError("exact density supports pattern length <= " + std::to_string(kMaxExactPatternLength) +
                     ", got " + std::to_string(k));
  }
  if (m > kMaxExactResolution) {
    throw GuardError("exact density supports grid resolution <= " + std::to_string(kMaxExactResolution) +
                     ", got " + std::to_string(m));
  }
  const Permutation q = tau.inverse();
  const auto chains = detail::nondecreasing_chains(k, m);
  const Rational cell_scale = Rational(1) / Rational(m);

  Rational total = 0;
  std::vector<std::size_t> columns(k);
  for (const auto& rows : chains) {
    for (const auto& ys : chains) {
      // ys.cells[j] is the column of the point with the (j+1)-th smallest Y.
      for (std::size_t j = 0; j < k; ++j) columns[q(j + 1) - 1] = ys.cells[j];
      Rational term = rows.tie_weight * ys.tie_weight;
      for (std::size_t i = 0; i < k && term != 0; ++i) term *= z.entry(rows.cells[i], columns[i]) * cell_scale;
      total += term;
    }
  }
  return total * Rational(factorial(k));
}

inline Rational density_in_permuton_exact(const Permuton& z, const Permutation& tau) {
  return density_in_permuton_exact(detail::as_grid(z), tau);
}

struct DensityGap {
  Rational gap;
  Rational bound;
  bool ok = false;
};

/// |t(τ,σ) − t(τ,Z_σ)| against the bound C(k,2)/n, exactly.
inline DensityGap density_gap(const Permutation& tau, const Permutation& sigma) {
  if (tau.size() > sigma.size()) throw InputError("pattern is longer than the permutation");
  const Rational in_perm = density(tau, sigma);
  const Rational in_permuton = density_in_permuton_exact(from_permutation(sigma), tau);
  DensityGap out;
  out.gap = abs(in_perm - in_permuton);
  out.bound = Rational(binomial(tau.size(), 2), BigInt(sigma.size()));
  out.ok = out.gap <= out.bound;
  return out;
}

}  // namespace permlim
