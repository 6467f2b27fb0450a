#pragma once

// Pattern occurrences Λ(τ,π), subpermutation densities t(τ,π) and random
// subpermutations σ(k,π).

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "permlim/errors.hpp"
#include "permlim/fenwick.hpp"
#include "permlim/permutation.hpp"
#include "permlim/random.hpp"
#include "permlim/rational.hpp"

namespace permlim {

inline constexpr std::size_t kMaxDistributionPatternLength = 6;

/// Exact distribution of length-k patterns in a permutation.
struct PatternDistribution {
  std::size_t k = 0;
  std::size_t n = 0;
  // Occurrence counts indexed by lexicographic rank in S_k. Empty when k > n.
  std::vector<BigInt> counts;

  BigInt denominator() const { return k <= n ? binomial(n, k) : BigInt(1); }

  Rational density(const Permutation& tau) const {
    if (counts.empty()) return 0;
    return Rational(counts.at(lexicographic_rank(tau.values())), denominator());
  }

  std::map<Permutation, Rational> entries() const {
    std::map<Permutation, Rational> out;
    const auto patterns = all_permutations(k);
    for (std::size_t r = 0; r < patterns.size(); ++r) {
      out.emplace(patterns[r], counts.empty() ? Rational(0) : Rational(counts[r], denominator()));
    }
    return out;
  }
};

namespace detail {

// Left/right smaller counts for every position, O(n log n).
struct RankCounts {
  std::vector<std::uint64_t> left_smaller, left_greater, right_smaller, right_greater;
};

inline RankCounts rank_counts(const Permutation& pi) {
  const std::size_t n = pi.size();
  RankCounts rc;
  rc.left_smaller.resize(n);
  rc.left_greater.resize(n);
  rc.right_smaller.resize(n);
  rc.right_greater.resize(n);
  FenwickTree<std::uint64_t> seen(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t v = pi(i + 1);
    const std::uint64_t ls = seen.prefix(v - 1);
    rc.left_smaller[i] = ls;
    rc.left_greater[i] = i - ls;
    // Values below v: v-1 in total, ls of them on the left.
    rc.right_smaller[i] = (v - 1) - ls;
    rc.right_greater[i] = (n - v) - rc.left_greater[i];
    seen.add(v, 1);
  }
  return rc;
}

inline std::uint64_t choose2(std::uint64_t a) { return a < 2 ? 0 : a * (a - 1) / 2; }

// Counts of the six length-3 patterns in lexicographic order
// (123, 132, 213, 231, 312, 321), from the per-position rank counts.
inline std::array<std::uint64_t, 6> length3_counts(const Permutation& pi) {
  const RankCounts rc = rank_counts(pi);
  std::uint64_t p123 = 0, p321 = 0, middle_max = 0, middle_min = 0, first_min = 0, first_max = 0;
  for (std::size_t i = 0; i < pi.size(); ++i) {
    p123 += rc.left_smaller[i] * rc.right_greater[i];
    p321 += rc.left_greater[i] * rc.right_smaller[i];
    middle_max += rc.left_smaller[i] * rc.right_smaller[i];  // 132 + 231
    middle_min += rc.left_greater[i] * rc.right_greater[i];  // 213 + 312
    first_min += choose2(rc.right_greater[i]);                // 123 + 132
    first_max += choose2(rc.right_smaller[i]);                // 321 + 312
  }
  const std::uint64_t p132 = first_min - p123;
  const std::uint64_t p312 = first_max - p321;
  const std::uint64_t p231 = middle_max - p132;
  const std::uint64_t p213 = middle_min - p312;
  return {p123, p132, p213, p231, p312, p321};
}

// Depth-first enumeration of increasing index tuples, pruning a branch as soon
// as the chosen prefix stops matching the pattern's prefix order.
inline void count_by_enumeration(const Permutation& tau, const Permutation& pi, std::size_t depth,
                                 std::size_t next_index, std::vector<std::uint32_t>& chosen, BigInt& count) {
  const std::size_t k = tau.size();
  const std::size_t n = pi.size();
  if (depth == k) {
    ++count;
    return;
  }
  for (std::size_t idx = next_index; idx + (k - depth) <= n + 1; ++idx) {
    const std::uint32_t value = pi(idx);
    bool consistent = true;
    for (std::size_t j = 0; j < depth; ++j) {
      if ((chosen[j] < value) != (tau(j + 1) < tau(depth + 1))) {
        consistent = false;
        break;
      }
    }
    if (!consistent) continue;
    chosen[depth] = value;
    count_by_enumeration(tau, pi, depth + 1, idx + 1, chosen, count);
  }
}

inline void visit_subsets(const Permutation& pi, std::size_t k, std::size_t depth, std::size_t next_index,
                          std::vector<std::uint32_t>& chosen, std::vector<std::uint64_t>& counts) {
  if (depth == k) {
    Permutation pattern = standardize(std::span<const std::uint32_t>(chosen));
    ++counts[lexicographic_rank(pattern.values())];
    return;
  }
  for (std::size_t idx = next_index; idx + (k - depth) <= pi.size() + 1; ++idx) {
    chosen[depth] = pi(idx);
    visit_subsets(pi, k, depth + 1, idx + 1, chosen, counts);
  }
}

}  // namespace detail

/// Number of inversions of pi, i.e. Λ((2,1), pi), in O(n log n).
inline std::uint64_t inversions(const Permutation& pi) {
  FenwickTree<std::uint64_t> seen(pi.size());
  std::uint64_t inv = 0;
  for (std::size_t i = 1; i <= pi.size(); ++i) {
    inv += (i - 1) - seen.prefix(pi(i));
    seen.add(pi(i), 1);
  }
  return inv;
}

/**
 * Λ(τ,π): the number of increasing index tuples whose π-images are ordered as τ.
 * Zero when |τ| > |π|. Lengths 2 and 3 use Fenwick-tree counting; longer
 * patterns fall back to pruned enumeration.
 */
inline BigInt occurrences(const Permutation& tau, const Permutation& pi) {
  const std::size_t k = tau.size();
  const std::size_t n = pi.size();
  if (k > n) return 0;
  if (k == 1) return n;
  if (k == 2) {
    const std::uint64_t inv = inversions(pi);
    const std::uint64_t pairs = static_cast<std::uint64_t>(n) * (n - 1) / 2;
    return tau(1) == 2 ? inv : pairs - inv;
  }
  if (k == 3) return detail::length3_counts(pi)[lexicographic_rank(tau.values())];
  BigInt count = 0;
  std::vector<std::uint32_t> chosen(k);
  detail::count_by_enumeration(tau, pi, 0, 1, chosen, count);
  return count;
}

/// t(τ,π) = Λ(τ,π)/C(n,k), or 0 when k > n.
inline Rational density(const Permutation& tau, const Permutation& pi) {
  if (tau.size() > pi.size()) return 0;
  return Rational(occurrences(tau, pi), binomial(pi.size(), tau.size()));
}

/**
 * Exact t(τ,π) for every τ in S_k, 1 <= k <= 6.
 *
 * k = 2 and k = 3 use the Fenwick counts; k >= 4 makes one pass over all
 * C(n,k) index subsets.
 */
inline PatternDistribution pattern_distribution(const Permutation& pi, std::size_t k) {
  if (k < 1 || k > kMaxDistributionPatternLength) {
    throw GuardError("pattern length " + std::to_string(k) + " outside supported range 1.." +
                     std::to_string(kMaxDistributionPatternLength));
  }
  PatternDistribution dist{k, pi.size(), {}};
  if (k > pi.size()) return dist;
  if (k == 1) {
    dist.counts = {BigInt(pi.size())};
  } else if (k == 2) {
    const std::uint64_t inv = inversions(pi);
    const std::uint64_t pairs = static_cast<std::uint64_t>(pi.size()) * (pi.size() - 1) / 2;
    dist.counts = {BigInt(pairs - inv), BigInt(inv)};
  } else if (k == 3) {
    for (std::uint64_t c : detail::length3_counts(pi)) dist.counts.emplace_back(c);
  } else {
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(factorial(k)), 0);
    std::vector<std::uint32_t> chosen(k);
    detail::visit_subsets(pi, k, 0, 1, chosen, counts);
    for (std::uint64_t c : counts) dist.counts.emplace_back(c);
  }
  return dist;
}

/// σ(k,π): the pattern of π restricted to a uniformly random k-subset of positions.
template <Rng64 G>
Permutation random_subpermutation(const Permutation& pi, std::size_t k, G& rng) {
  const std::size_t n = pi.size();
  if (k > n || k == 0) {
    throw InputError("subpermutation length " + std::to_string(k) + " must be in 1.." + std::to_string(n));
  }
  // Floyd's algorithm: k distinct indices from [n] with k draws.
  std::vector<std::uint32_t> picked;
  picked.reserve(k);
  std::vector<bool> taken(n + 1, false);
  for (std::size_t j = n - k + 1; j <= n; ++j) {
    std::size_t t = 1 + uniform_below(rng, j);
    if (taken[t]) t = j;
    taken[t] = true;
  }
  for (std::size_t idx = 1; idx <= n; ++idx) {
    if (taken[idx]) picked.push_back(pi(idx));
  }
  return standardize(std::span<const std::uint32_t>(picked));
}

}  // namespace permlim
