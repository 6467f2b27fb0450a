#pragma once

// Z-random permutations σ(n,Z) and the point clouds behind them.
//
// Every point consumes exactly two engine calls, X then U, and its vertical
// coordinate is Y = inverse_conditional_cdf(Z, X, U). Exact coordinate ties
// (possible only through finite precision) are broken by point index.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "permlim/permutation.hpp"
#include "permlim/permuton.hpp"
#include "permlim/random.hpp"

namespace permlim {

struct PointSample {
  std::vector<double> x;
  std::vector<double> y;
  std::optional<std::uint64_t> seed;

  std::size_t size() const noexcept { return x.size(); }
};

template <Rng64 G>
void append_points(const Permuton& z, std::size_t count, G& rng, PointSample& sample) {
  sample.x.reserve(sample.x.size() + count);
  sample.y.reserve(sample.y.size() + count);
  for (std::size_t i = 0; i < count; ++i) {
    const double x = uniform01(rng);
    const double u = uniform01(rng);
    sample.x.push_back(x);
    sample.y.push_back(inverse_conditional_cdf(z, x, u));
  }
}

template <Rng64 G>
PointSample sample_points(const Permuton& z, std::size_t n, G& rng) {
  if (n == 0) throw InputError("sample size must be at least 1");
  PointSample sample;
  append_points(z, n, rng, sample);
  return sample;
}

inline PointSample sample_points(const Permuton& z, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  PointSample sample = sample_points(z, n, rng);
  sample.seed = seed;
  return sample;
}

namespace detail {

// Indices 0..n-1 ordered by (key, index).
inline std::vector<std::uint32_t> order_by(std::span<const double> key) {
  std::vector<std::uint32_t> order(key.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return key[a] < key[b] || (key[a] == key[b] && a < b);
  });
  return order;
}

}  // namespace detail

/// Pattern of the first `n` points read as: sort by horizontal coordinate,
/// then rank the vertical coordinates in that order.
inline Permutation pattern_by_sorting(const PointSample& sample, std::size_t n) {
  std::span<const double> xs(sample.x.data(), n);
  std::span<const double> ys(sample.y.data(), n);
  const auto by_x = detail::order_by(xs);
  // Vertical coordinates in horizontal order, tie-broken by original index.
  std::vector<std::pair<double, std::uint32_t>> column(n);
  for (std::size_t i = 0; i < n; ++i) column[i] = {ys[by_x[i]], by_x[i]};
  return standardize(std::span<const std::pair<double, std::uint32_t>>(column));
}

/// The same pattern as S ∘ R⁻¹, with R and S the rank maps of the
/// horizontal and vertical coordinates.
inline Permutation pattern_by_ranks(const PointSample& sample, std::size_t n) {
  std::span<const double> xs(sample.x.data(), n);
  std::span<const double> ys(sample.y.data(), n);
  std::vector<Permutation::value_type> r(n), s(n);
  const auto by_x = detail::order_by(xs);
  const auto by_y = detail::order_by(ys);
  for (std::size_t rank = 0; rank < n; ++rank) {
    r[by_x[rank]] = static_cast<Permutation::value_type>(rank + 1);
    s[by_y[rank]] = static_cast<Permutation::value_type>(rank + 1);
  }
  const Permutation big_r(std::move(r));
  const Permutation big_s(std::move(s));
  return big_s.compose(big_r.inverse());
}

inline Permutation pattern_by_sorting(const PointSample& sample) { return pattern_by_sorting(sample, sample.size()); }
inline Permutation pattern_by_ranks(const PointSample& sample) { return pattern_by_ranks(sample, sample.size()); }

/// σ(n,Z).
template <Rng64 G>
Permutation z_random_permutation(const Permuton& z, std::size_t n, G& rng) {
  return pattern_by_ranks(sample_points(z, n, rng));
}

/**
 * Coupled sequence σ_1, σ_2, ... drawn from one point stream: σ_n is the
 * pattern of the first n points, so σ_n is always a subpermutation of σ_{n+1}.
 * Points are drawn lazily; at(n) costs O(n log n).
 */
class NestedSequence {
 public:
  NestedSequence(Permuton z, std::uint64_t seed) : z_(std::move(z)), rng_(seed) { sample_.seed = seed; }

  Permutation at(std::size_t n) {
    if (n == 0) throw InputError("sequence indices start at 1");
    if (n > sample_.size()) append_points(z_, n - sample_.size(), rng_, sample_);
    return pattern_by_ranks(sample_, n);
  }

  const PointSample& points() const noexcept { return sample_; }

 private:
  Permuton z_;
  Rng rng_;
  PointSample sample_;
};

template <Rng64 G>
std::vector<Permutation> nested_sequence(const Permuton& z, std::size_t n_max, G& rng) {
  if (n_max == 0) throw InputError("n_max must be at least 1");
  const PointSample sample = sample_points(z, n_max, rng);
  std::vector<Permutation> out;
  out.reserve(n_max);
  for (std::size_t n = 1; n <= n_max; ++n) out.push_back(pattern_by_ranks(sample, n));
  return out;
}

}  // namespace permlim
