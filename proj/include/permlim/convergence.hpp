#pragma once

// Finite-prefix diagnostics for permutation sequences. Convergence,
// Cauchy-ness and eventual constancy are statements about infinite
// sequences; everything here inspects a finite prefix and reports windows and
// indices, never verdicts about the limit.

#include <algorithm>
#include <cstdint>
#include <istream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "permlim/counting.hpp"
#include "permlim/errors.hpp"
#include "permlim/metrics.hpp"
#include "permlim/permutation.hpp"
#include "permlim/permuton.hpp"
#include "permlim/rational.hpp"
#include "permlim/sampling.hpp"

namespace permlim {

/**
 * Pull-based permutation sequence σ_1, σ_2, .... Callers request strictly
 * increasing 1-based indices; skipped terms are never materialized.
 * Returns nullopt once a finite source is exhausted.
 */
class PermutationSequence {
 public:
  virtual ~PermutationSequence() = default;
  virtual std::optional<Permutation> at(std::size_t index) = 0;
};

// σ_n = id_n.
class IdentitySequence final : public PermutationSequence {
 public:
  std::optional<Permutation> at(std::size_t index) override { return Permutation::identity(index); }
};

// σ_n = reverse_n.
class ReverseSequence final : public PermutationSequence {
 public:
  std::optional<Permutation> at(std::size_t index) override { return Permutation::reverse(index); }
};

// id_n at odd n, reverse_n at even n.
class AlternatingSequence final : public PermutationSequence {
 public:
  std::optional<Permutation> at(std::size_t index) override {
    return index % 2 == 1 ? Permutation::identity(index) : Permutation::reverse(index);
  }
};

class ConstantSequence final : public PermutationSequence {
 public:
  explicit ConstantSequence(Permutation value) : value_(std::move(value)) {}
  std::optional<Permutation> at(std::size_t) override { return value_; }

 private:
  Permutation value_;
};

// A finite, fully materialized list.
class ListSequence final : public PermutationSequence {
 public:
  explicit ListSequence(std::vector<Permutation> items) : items_(std::move(items)) {}
  std::optional<Permutation> at(std::size_t index) override {
    if (index == 0 || index > items_.size()) return std::nullopt;
    return items_[index - 1];
  }

 private:
  std::vector<Permutation> items_;
};

// The coupled Z-random sequence: σ_n is the pattern of the first n points.
class NestedZRandomSequence final : public PermutationSequence {
 public:
  NestedZRandomSequence(Permuton z, std::uint64_t seed) : nested_(std::move(z), seed) {}
  std::optional<Permutation> at(std::size_t index) override { return nested_.at(index); }

 private:
  NestedSequence nested_;
};

/// One permutation per line; line n is σ_n. Blank lines are not allowed.
class StreamSequence final : public PermutationSequence {
 public:
  explicit StreamSequence(std::istream& in) : in_(in) {}

  std::optional<Permutation> at(std::size_t index) override {
    if (index <= line_) throw InputError("sequence indices must be strictly increasing");
    std::string text;
    while (line_ < index) {
      if (!std::getline(in_, text)) return std::nullopt;
      ++line_;
    }
    try {
      return parse_permutation(text);
    } catch (const InputError& e) {
      throw InputError("line " + std::to_string(line_) + ": " + e.what());
    }
  }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
};

namespace detail {

inline std::vector<std::pair<std::size_t, Permutation>> fetch(PermutationSequence& seq,
                                                              const std::vector<std::size_t>& indices) {
  std::vector<std::pair<std::size_t, Permutation>> out;
  std::size_t previous = 0;
  for (std::size_t index : indices) {
    if (index <= previous) throw InputError("indices must be positive and strictly increasing");
    previous = index;
    auto sigma = seq.at(index);
    if (!sigma) throw InputError("sequence ended before index " + std::to_string(index));
    out.emplace_back(index, std::move(*sigma));
  }
  return out;
}

}  // namespace detail

/// t(τ, σ_n) for each requested index n (rows) and pattern τ (columns).
struct TrajectoryTable {
  std::vector<Permutation> patterns;
  std::vector<std::size_t> indices;
  std::vector<std::size_t> lengths;  // |σ_n| per row
  std::vector<std::vector<Rational>> values;
};

inline TrajectoryTable density_trajectory(PermutationSequence& seq, const std::vector<Permutation>& patterns,
                                          const std::vector<std::size_t>& indices) {
  if (patterns.empty()) throw InputError("at least one pattern is required");
  TrajectoryTable table;
  table.patterns = patterns;
  for (auto& [index, sigma] : detail::fetch(seq, indices)) {
    table.indices.push_back(index);
    table.lengths.push_back(sigma.size());
    std::vector<Rational> row;
    row.reserve(patterns.size());
    for (const Permutation& tau : patterns) row.push_back(density(tau, sigma));
    table.values.push_back(std::move(row));
  }
  return table;
}

struct CauchyWindow {
  std::size_t from_index = 0;  // window covers requested indices >= from_index
  double max_distance = 0.0;
  std::size_t argmax_first = 0, argmax_second = 0;
  bool within_epsilon = true;
};

struct CauchyReport {
  double epsilon = 0.0;
  std::vector<CauchyWindow> windows;
};

/**
 * Max pairwise d_□(σ_n, σ_m) over n, m >= n0 among the requested indices,
 * for each n0. Distances go through the permuton route, so lengths may differ.
 */
inline CauchyReport cauchy_check(PermutationSequence& seq, const std::vector<std::size_t>& indices, double epsilon) {
  const auto items = detail::fetch(seq, indices);
  const std::size_t count = items.size();
  std::vector<std::vector<double>> dist(count, std::vector<double>(count, 0.0));
  for (std::size_t a = 0; a < count; ++a)
    for (std::size_t b = a + 1; b < count; ++b)
      dist[a][b] = d_square_any_lengths(items[a].second, items[b].second).value;

  CauchyReport report;
  report.epsilon = epsilon;
  for (std::size_t w = 0; w < count; ++w) {
    CauchyWindow window;
    window.from_index = items[w].first;
    for (std::size_t a = w; a < count; ++a) {
      for (std::size_t b = a + 1; b < count; ++b) {
        if (dist[a][b] > window.max_distance) {
          window.max_distance = dist[a][b];
          window.argmax_first = items[a].first;
          window.argmax_second = items[b].first;
        }
      }
    }
    // Distances are compared with a 1e-12 tolerance on the floating path.
    window.within_epsilon = window.max_distance <= epsilon + 1e-12;
    report.windows.push_back(window);
  }
  return report;
}

struct EventualConstancy {
  // False when the longest permutation appears only at the end of the prefix,
  // i.e. the lengths are still growing.
  bool bounded_lengths = true;
  // Earliest 1-based index from which all observed terms are identical, when
  // that tail holds at least two terms.
  std::optional<std::size_t> constant_tail_from;
};

inline EventualConstancy eventually_constant_check(const std::vector<Permutation>& seq) {
  EventualConstancy out;
  if (seq.empty()) return out;
  std::size_t longest_before_last = 0;
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) longest_before_last = std::max(longest_before_last, seq[i].size());
  out.bounded_lengths = seq.size() == 1 || seq.back().size() <= longest_before_last;
  std::size_t start = seq.size() - 1;
  while (start > 0 && seq[start - 1] == seq.back()) --start;
  if (start + 1 < seq.size()) out.constant_tail_from = start + 1;
  return out;
}

namespace detail {

// Overlaps of the unit cell (p−1, p] scaled by m with the bands ((b−1)n, bn],
// in units of 1/(n·m). At most two bands since m <= n.
inline std::vector<std::pair<std::size_t, std::int64_t>> band_overlaps(std::size_t p, std::size_t n, std::size_t m) {
  std::vector<std::pair<std::size_t, std::int64_t>> out;
  const std::uint64_t lo = (p - 1) * m;
  const std::uint64_t hi = p * m;
  for (std::size_t band = lo / n + 1; band <= m && (band - 1) * n < hi; ++band) {
    const std::uint64_t a = std::max<std::uint64_t>(lo, (band - 1) * n);
    const std::uint64_t b = std::min<std::uint64_t>(hi, band * n);
    if (b > a) out.emplace_back(band, static_cast<std::int64_t>(b - a));
  }
  return out;
}

}  // namespace detail

/**
 * Block average of Z_σ on an m×m grid: M[i][j] = m · μ_σ(cell (i,j)).
 *
 * When m divides n this is (m/n) times the number of points of σ in each
 * block. Otherwise positions straddling a band boundary are split by exact
 * overlap, which keeps M exactly doubly stochastic because Z_σ has uniform
 * marginals.
 */
inline GridPermuton estimate_permuton(const Permutation& sigma, std::size_t m) {
  const std::size_t n = sigma.size();
  if (m == 0 || m > n) {
    throw InputError("resolution " + std::to_string(m) + " must be in 1.." + std::to_string(n));
  }
  if (m > kMaxDenseGrid) {
    throw GuardError("resolution " + std::to_string(m) + " exceeds dense grid limit " + std::to_string(kMaxDenseGrid));
  }
  std::vector<std::int64_t> weight(m * m, 0);
  for (std::size_t pos = 1; pos <= n; ++pos) {
    const auto xs = detail::band_overlaps(pos, n, m);
    const auto ys = detail::band_overlaps(sigma(pos), n, m);
    for (const auto& [i, a] : xs)
      for (const auto& [j, b] : ys) weight[(i - 1) * m + (j - 1)] += a * b;
  }
  const BigInt scale = BigInt(n) * m;
  GridPermuton::Matrix rows(m, std::vector<Rational>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) rows[i][j] = Rational(BigInt(weight[i * m + j]), scale);
  try {
    return GridPermuton::from_matrix(rows);
  } catch (const InputError& e) {
    throw InvariantError(std::string("block estimate is not doubly stochastic: ") + e.what());
  }
}

}  // namespace permlim
