#pragma once

// Brute-force reference implementations used only by the tests. None of these
// call into the code paths they check: they enumerate definitions directly.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "permlim/permutation.hpp"
#include "permlim/permuton.hpp"
#include "permlim/rational.hpp"
#include "permlim/random.hpp"

namespace oracle {

using permlim::Permutation;
using permlim::Rational;

// Calls `visit` with every increasing k-tuple of 1-based indices from [n].
template <class F>
void for_each_subset(std::size_t n, std::size_t k, F&& visit) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), std::size_t{1});
  for (;;) {
    visit(idx);
    std::size_t pos = k;
    while (pos > 0 && idx[pos - 1] == n - k + pos) --pos;
    if (pos == 0) return;
    ++idx[pos - 1];
    for (std::size_t j = pos; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// Λ(τ,π) straight from the definition: every k-subset, every pair compared.
inline std::uint64_t occurrences(const Permutation& tau, const Permutation& pi) {
  const std::size_t k = tau.size();
  std::uint64_t count = 0;
  for_each_subset(pi.size(), k, [&](const std::vector<std::size_t>& idx) {
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b)
        if ((pi(idx[a]) < pi(idx[b])) != (tau(a + 1) < tau(b + 1))) return;
    ++count;
  });
  return count;
}

inline std::uint64_t inversions(const Permutation& pi) {
  std::uint64_t inv = 0;
  for (std::size_t i = 1; i <= pi.size(); ++i)
    for (std::size_t j = i + 1; j <= pi.size(); ++j) inv += pi(i) > pi(j) ? 1 : 0;
  return inv;
}

// |σ(S) ∩ T| for S = {a..b-1}, T = {c..d-1}.
inline long long image_count(const Permutation& s, std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
  long long count = 0;
  for (std::size_t x = a; x < b; ++x) count += (s(x) >= c && s(x) < d) ? 1 : 0;
  return count;
}

// (1/n) max over all interval pairs, enumerated directly.
inline Rational d_square_perms(const Permutation& s1, const Permutation& s2) {
  const std::size_t n = s1.size();
  long long best = 0;
  for (std::size_t a = 1; a <= n + 1; ++a)
    for (std::size_t b = a; b <= n + 1; ++b)
      for (std::size_t c = 1; c <= n + 1; ++c)
        for (std::size_t d = c; d <= n + 1; ++d)
          best = std::max(best, std::llabs(image_count(s1, a, b, c, d) - image_count(s2, a, b, c, d)));
  return Rational(best, static_cast<long long>(n));
}

// max over interval pairs of | |σ(S)∩T| − |S||T|/n |.
inline Rational discrepancy(const Permutation& s) {
  const std::size_t n = s.size();
  Rational best = 0;
  for (std::size_t a = 1; a <= n + 1; ++a)
    for (std::size_t b = a; b <= n + 1; ++b)
      for (std::size_t c = 1; c <= n + 1; ++c)
        for (std::size_t d = c; d <= n + 1; ++d) {
          Rational v = Rational(image_count(s, a, b, c, d)) -
                       Rational(static_cast<long long>((b - a) * (d - c)), static_cast<long long>(n));
          if (v < 0) v = -v;
          if (v > best) best = v;
        }
  return best;
}

/**
 * t(τ,Z) for a grid permuton by labeled enumeration: each of the k points is
 * assigned a cell with probability M/m; given the cells, every horizontal
 * order consistent with the row bands and every vertical order consistent
 * with the column bands is equally likely. Count the (x-order, y-order)
 * pairs producing τ.
 */
inline Rational grid_density(const permlim::GridPermuton& z, const Permutation& tau) {
  const std::size_t k = tau.size();
  const std::size_t m = z.resolution();
  const std::size_t cells = m * m;
  std::vector<std::size_t> assign(k, 0);
  std::vector<std::size_t> order(k);
  Rational total = 0;
  for (;;) {
    Rational weight = 1;
    for (std::size_t p = 0; p < k; ++p) weight *= z.entry(assign[p] / m + 1, assign[p] % m + 1) / Rational(m);
    if (weight != 0) {
      std::uint64_t consistent_x = 0, consistent_y = 0, hits = 0;
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::vector<std::vector<std::size_t>> y_orders;
      do {
        bool ok = true;
        for (std::size_t i = 0; i + 1 < k; ++i) ok = ok && assign[order[i]] % m <= assign[order[i + 1]] % m;
        if (ok) y_orders.push_back(order);
      } while (std::next_permutation(order.begin(), order.end()));
      consistent_y = y_orders.size();
      std::iota(order.begin(), order.end(), std::size_t{0});
      do {
        bool ok = true;
        for (std::size_t i = 0; i + 1 < k; ++i) ok = ok && assign[order[i]] / m <= assign[order[i + 1]] / m;
        if (!ok) continue;
        ++consistent_x;
        for (const auto& yo : y_orders) {
          // yo lists points by increasing y; pattern(i) = y-rank of the i-th point by x.
          std::vector<std::size_t> yrank(k);
          for (std::size_t r = 0; r < k; ++r) yrank[yo[r]] = r + 1;
          bool match = true;
          for (std::size_t i = 0; i < k && match; ++i) match = yrank[order[i]] == tau(i + 1);
          hits += match ? 1 : 0;
        }
      } while (std::next_permutation(order.begin(), order.end()));
      total += weight * Rational(static_cast<long long>(hits), static_cast<long long>(consistent_x * consistent_y));
    }
    std::size_t p = 0;
    while (p < k && ++assign[p] == cells) assign[p++] = 0;
    if (p == k) break;
  }
  return total;
}

// Max of |μ1(R) − μ2(R)| over rectangles with corners on the 1/res lattice,
// evaluated through joint_cdf. A lower bound on d_□.
inline double lattice_d_square(const permlim::Permuton& a, const permlim::Permuton& b, std::size_t res) {
  std::vector<double> g((res + 1) * (res + 1));
  for (std::size_t i = 0; i <= res; ++i)
    for (std::size_t j = 0; j <= res; ++j) {
      const double x = static_cast<double>(i) / static_cast<double>(res);
      const double y = static_cast<double>(j) / static_cast<double>(res);
      g[i * (res + 1) + j] = permlim::joint_cdf(a, x, y) - permlim::joint_cdf(b, x, y);
    }
  double best = 0.0;
  auto at = [&](std::size_t i, std::size_t j) { return g[i * (res + 1) + j]; };
  for (std::size_t x1 = 0; x1 <= res; ++x1)
    for (std::size_t x2 = x1; x2 <= res; ++x2)
      for (std::size_t y1 = 0; y1 <= res; ++y1)
        for (std::size_t y2 = y1; y2 <= res; ++y2)
          best = std::max(best, std::abs(at(x2, y2) - at(x1, y2) - at(x2, y1) + at(x1, y1)));
  return best;
}

inline double lattice_d_infty(const permlim::Permuton& a, const permlim::Permuton& b, std::size_t res) {
  double best = 0.0;
  for (std::size_t i = 0; i <= res; ++i)
    for (std::size_t j = 0; j <= res; ++j) {
      const double x = static_cast<double>(i) / static_cast<double>(res);
      const double y = static_cast<double>(j) / static_cast<double>(res);
      best = std::max(best, std::abs(permlim::joint_cdf(a, x, y) - permlim::joint_cdf(b, x, y)));
    }
  return best;
}

// Upper-tail p-value of Pearson's statistic against equal expected counts.
inline double chi_square_uniform_pvalue(const std::vector<std::uint64_t>& counts) {
  double total = 0.0;
  for (auto c : counts) total += static_cast<double>(c);
  const double expected = total / static_cast<double>(counts.size());
  double stat = 0.0;
  for (auto c : counts) stat += (static_cast<double>(c) - expected) * (static_cast<double>(c) - expected) / expected;
  boost::math::chi_squared dist(static_cast<double>(counts.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

// Pearson p-value against arbitrary expected probabilities (cells with p = 0 must have no hits).
inline double chi_square_pvalue(const std::vector<std::uint64_t>& counts, const std::vector<double>& probs) {
  double total = 0.0;
  for (auto c : counts) total += static_cast<double>(c);
  double stat = 0.0;
  std::size_t cells = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (probs[i] <= 0.0) {
      if (counts[i] != 0) return 0.0;
      continue;
    }
    const double expected = total * probs[i];
    stat += (static_cast<double>(counts[i]) - expected) * (static_cast<double>(counts[i]) - expected) / expected;
    ++cells;
  }
  boost::math::chi_squared dist(static_cast<double>(cells - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

// Fisher–Yates with the library's portable index draw.
inline Permutation random_permutation(std::size_t n, permlim::Rng& rng) {
  std::vector<Permutation::value_type> v(n);
  std::iota(v.begin(), v.end(), Permutation::value_type{1});
  for (std::size_t i = n; i > 1; --i) std::swap(v[i - 1], v[permlim::uniform_below(rng, i)]);
  return Permutation(std::move(v));
}

// Random doubly stochastic m×m matrix with small-denominator rational
// entries: a convex combination of random permutation matrices.
inline permlim::GridPermuton random_grid(std::size_t m, permlim::Rng& rng, std::size_t parts = 3) {
  std::vector<std::vector<Rational>> rows(m, std::vector<Rational>(m, Rational(0)));
  std::vector<long long> weights(parts);
  long long total = 0;
  for (auto& w : weights) {
    w = 1 + static_cast<long long>(permlim::uniform_below(rng, 5));
    total += w;
  }
  for (std::size_t p = 0; p < parts; ++p) {
    const Permutation s = random_permutation(m, rng);
    for (std::size_t i = 1; i <= m; ++i) rows[i - 1][s(i) - 1] += Rational(weights[p], total);
  }
  return permlim::GridPermuton::from_matrix(rows);
}

}  // namespace oracle
