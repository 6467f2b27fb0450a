#pragma once

/**
 * @file metrics.hpp
 * @brief Rectangular distance d_□, sup distance d_∞ and discrepancy.
 *
 * Every object handled here is a step permuton: a uniform, grid or
 * permutation-induced measure whose density is constant on the cells of an
 * m×m grid. Its joint CDF F is therefore bilinear on each cell and is
 * determined by the corner table F(i/m, j/m).
 *
 * Corner sufficiency. Put both objects on the common refinement formed by
 * the union of their breakpoints. G = F1 − F2 is bilinear on every refined
 * cell. The rectangle functional
 *
 *   R(x1,x2,y1,y2) = G(x2,y2) − G(x1,y2) − G(x2,y1) + G(x1,y1)
 *
 * is, with the other three coordinates fixed, piecewise linear in each
 * coordinate with kinks only at breakpoints, so |R| is maximized with every
 * coordinate at a breakpoint. The same argument applied to |G| gives d_∞.
 * Both suprema are therefore exact maxima over refinement corners.
 *
 * For a fixed pair of vertical breakpoints c < d, R over x1 < x2 is
 * h(x2) − h(x1) with h(x) = G(x,d) − G(x,c), maximized in absolute value by
 * max h − min h. This gives O(N³) for N breakpoints per axis.
 */

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include <boost/integer/common_factor_rt.hpp>

#include "permlim/errors.hpp"
#include "permlim/permutation.hpp"
#include "permlim/permuton.hpp"
#include "permlim/rational.hpp"

namespace permlim {

// Largest permutation length accepted by the O(n³) exact permutation paths.
inline constexpr std::size_t kMaxExactPermutationLength = 2048;
// Largest refinement (breakpoints per axis) for distances between step permutons.
inline constexpr std::size_t kMaxRefinement = 2049;

template <Scalar T>
struct Rectangle {
  T x1{}, x2{}, y1{}, y2{};
};

// S = {s_begin, ..., s_end - 1}, T = {t_begin, ..., t_end - 1}, 1-based.
struct IntervalPair {
  std::size_t s_begin = 1, s_end = 1, t_begin = 1, t_end = 1;
};

template <Scalar T>
struct BasicDistanceReport {
  T value{};
  Rectangle<T> witness;
  std::optional<IntervalPair> intervals;
};

using DistanceReport = BasicDistanceReport<Rational>;
using ApproxDistanceReport = BasicDistanceReport<double>;

/**
 * Corner table of a step permuton's joint CDF on its own m-grid.
 * F anywhere is the bilinear interpolation of the surrounding corners.
 */
template <Scalar T>
class StepCdf {
 public:
  static StepCdf of(const Permuton& z) {
    if (std::holds_alternative<UniformPermuton>(z)) return StepCdf(1, {T(0), T(0), T(0), T(1)});
    const auto& g = std::get<GridPermuton>(z);
    const std::size_t m = g.resolution();
    std::vector<T> corners((m + 1) * (m + 1));
    for (std::size_t i = 0; i <= m; ++i)
      for (std::size_t j = 0; j <= m; ++j) corners[i * (m + 1) + j] = g.template corner_cdf<T>(i, j);
    return StepCdf(m, std::move(corners));
  }

  // Z_σ: F(i/n, j/n) = |{ℓ <= i : σ(ℓ) <= j}| / n.
  static StepCdf of(const Permutation& sigma) {
    const std::size_t n = sigma.size();
    if (n + 1 > kMaxRefinement) {
      throw GuardError("permutation length " + std::to_string(n) + " exceeds corner-table limit " +
                       std::to_string(kMaxRefinement - 1));
    }
    std::vector<T> corners((n + 1) * (n + 1), T(0));
    std::vector<std::uint32_t> column(n + 1, 0);
    const T scale = T(1) / T(n);
    for (std::size_t i = 1; i <= n; ++i) {
      column[sigma(i)] += 1;
      std::uint32_t running = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        running += column[j];
        corners[i * (n + 1) + j] = T(running) * scale;
      }
    }
    return StepCdf(n, std::move(corners));
  }

  std::size_t resolution() const noexcept { return m_; }

  const T& corner(std::size_t i, std::size_t j) const { return corners_[i * (m_ + 1) + j]; }

  // Position of a coordinate inside this grid: cell index and offset in [0,1].
  struct Locus {
    std::size_t cell;
    T offset;
  };

  Locus locate(const T& v) const {
    const std::size_t cell = detail::cell_of(v, m_);
    return {cell, v * T(m_) - T(cell - 1)};
  }

  T eval(const Locus& lx, const Locus& ly) const {
    const T one(1);
    const std::size_t i = lx.cell, j = ly.cell;
    return corner(i - 1, j - 1) * (one - lx.offset) * (one - ly.offset) + corner(i, j - 1) * lx.offset * (one - ly.offset) +
           corner(i - 1, j) * (one - lx.offset) * ly.offset + corner(i, j) * lx.offset * ly.offset;
  }

  T eval(const T& x, const T& y) const { return eval(locate(x), locate(y)); }

 private:
  StepCdf(std::size_t m, std::vector<T> corners) : m_(m), corners_(std::move(corners)) {}

  std::size_t m_;
  std::vector<T> corners_;
};

namespace detail {

// Sorted union of {i/m1} and {j/m2}.
template <Scalar T>
std::vector<T> union_breakpoints(std::size_t m1, std::size_t m2) {
  std::vector<T> points;
  if constexpr (std::is_same_v<T, Rational>) {
    for (std::size_t i = 0; i <= m1; ++i) points.emplace_back(Rational(i, m1));
    for (std::size_t j = 0; j <= m2; ++j) points.emplace_back(Rational(j, m2));
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
  } else {
    // Merge on exact integer cross-multiplication, then convert.
    std::vector<std::pair<std::size_t, std::size_t>> fracs;
    for (std::size_t i = 0; i <= m1; ++i) fracs.emplace_back(i, m1);
    for (std::size_t j = 0; j <= m2; ++j) fracs.emplace_back(j, m2);
    auto less = [](const auto& a, const auto& b) { return a.first * b.second < b.first * a.second; };
    auto same = [](const auto& a, const auto& b) { return a.first * b.second == b.first * a.second; };
    std::sort(fracs.begin(), fracs.end(), less);
    fracs.erase(std::unique(fracs.begin(), fracs.end(), same), fracs.end());
    for (const auto& [p, q] : fracs) points.push_back(static_cast<double>(p) / static_cast<double>(q));
  }
  return points;
}

// Row-major N×N table of G = F1 − F2 on the given breakpoints.
template <Scalar T>
std::vector<T> difference_table(const StepCdf<T>& a, const StepCdf<T>& b, const std::vector<T>& points) {
  const std::size_t n = points.size();
  std::vector<typename StepCdf<T>::Locus> la, lb;
  la.reserve(n);
  lb.reserve(n);
  for (const T& p : points) {
    la.push_back(a.locate(p));
    lb.push_back(b.locate(p));
  }
  std::vector<T> g(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g[i * n + j] = a.eval(la[i], la[j]) - b.eval(lb[i], lb[j]);
  return g;
}

template <class V>
struct RectangleMax {
  V value{};
  std::size_t x1 = 0, x2 = 0, y1 = 0, y2 = 0;  // breakpoint indices
};

template <class V>
V abs_value(const V& v) {
  return v < V(0) ? V(-v) : v;
}

// max over x1 <= x2, y1 <= y2 of |rectangle functional| on an N×N table.
template <class V>
RectangleMax<V> max_rectangle(const std::vector<V>& g, std::size_t n) {
  RectangleMax<V> best;
  // Column-major copy so the inner scan is contiguous.
  std::vector<V> by_column(g.size());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) by_column[j * n + i] = g[i * n + j];
  std::vector<V> h(n);
  for (std::size_t c = 0; c < n; ++c) {
    const V* low = &by_column[c * n];
    for (std::size_t d = c + 1; d < n; ++d) {
      const V* high = &by_column[d * n];
      std::size_t imax = 0, imin = 0;
      for (std::size_t i = 0; i < n; ++i) {
        h[i] = high[i] - low[i];
        if (h[i] > h[imax]) imax = i;
        if (h[i] < h[imin]) imin = i;
      }
      const V span = h[imax] - h[imin];
      if (span > best.value) {
        best.value = span;
        best.x1 = std::min(imax, imin);
        best.x2 = std::max(imax, imin);
        best.y1 = c;
        best.y2 = d;
      }
    }
  }
  return best;
}

template <class V>
RectangleMax<V> max_abs_entry(const std::vector<V>& g, std::size_t n) {
  RectangleMax<V> best;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const V v = abs_value(g[i * n + j]);
      if (v > best.value) {
        best.value = v;
        best.x2 = i;
        best.y2 = j;
      }
    }
  }
  return best;
}

// Scales an exact table to a common denominator and runs `op` on machine
// integers when they fit, on big integers otherwise.
template <class Op>
RectangleMax<Rational> exact_integer_max(const std::vector<Rational>& g, std::size_t n, Op op) {
  BigInt common = 1;
  for (const Rational& v : g) {
    const BigInt den = denominator_of(v);
    if (den != 1) common = boost::multiprecision::lcm(common, den);
  }
  auto rescale = [&](auto sample) {
    using I = decltype(sample);
    std::vector<I> ints;
    ints.reserve(g.size());
    for (const Rational& v : g) {
      const BigInt scaled = numerator_of(v) * (common / denominator_of(v));
      if constexpr (std::is_same_v<I, BigInt>) {
        ints.push_back(scaled);
      } else {
        ints.push_back(scaled.template convert_to<I>());
      }
    }
    auto found = op(ints, n);
    RectangleMax<Rational> out;
    out.value = Rational(BigInt(found.value), common);
    out.x1 = found.x1;
    out.x2 = found.x2;
    out.y1 = found.y1;
    out.y2 = found.y2;
    return out;
  };
  BigInt largest = 0;
  for (const Rational& v : g) largest = std::max(largest, BigInt(abs(numerator_of(v)) * (common / denominator_of(v))));
  // Rectangle functionals add four table entries.
  if (largest < (BigInt(1) << 60)) return rescale(std::int64_t{});
  return rescale(BigInt{});
}

template <Scalar T>
BasicDistanceReport<T> to_report(const RectangleMax<T>& found, const std::vector<T>& points) {
  BasicDistanceReport<T> report;
  report.value = found.value;
  report.witness = {points[found.x1], points[found.x2], points[found.y1], points[found.y2]};
  return report;
}

// 2-D prefix counts P[i][j] = |{ℓ <= i : σ(ℓ) <= j}| scaled by `scale`, minus `subtract(i,j)`.
template <class F>
std::vector<std::int64_t> permutation_table(const Permutation& sigma, std::int64_t scale, F subtract) {
  const std::size_t n = sigma.size();
  std::vector<std::int64_t> table((n + 1) * (n + 1), 0);
  std::vector<std::int64_t> column(n + 1, 0);
  for (std::size_t i = 0; i <= n; ++i) {
    if (i > 0) column[sigma(i)] += 1;
    std::int64_t running = 0;
    for (std::size_t j = 0; j <= n; ++j) {
      running += column[j];
      table[i * (n + 1) + j] = scale * running - subtract(i, j);
    }
  }
  return table;
}

inline void check_exact_length(std::size_t n) {
  if (n > kMaxExactPermutationLength) {
    throw GuardError("permutation length " + std::to_string(n) + " exceeds exact distance limit " +
                     std::to_string(kMaxExactPermutationLength));
  }
}

inline DistanceReport interval_report(const RectangleMax<std::int64_t>& found, std::size_t n, std::int64_t divisor) {
  DistanceReport report;
  report.value = Rational(found.value, divisor);
  const Rational nn(static_cast<long long>(n));
  report.witness = {Rational(found.x1) / nn, Rational(found.x2) / nn, Rational(found.y1) / nn,
                    Rational(found.y2) / nn};
  report.intervals = IntervalPair{found.x1 + 1, found.x2 + 1, found.y1 + 1, found.y2 + 1};
  return report;
}

}  // namespace detail

/**
 * d_□(σ1,σ2) = (1/n) max_{S,T intervals} | |σ1(S)∩T| − |σ2(S)∩T| |.
 * Throws InputError on a length mismatch; compare through permutons instead.
 */
inline DistanceReport d_square_perms(const Permutation& s1, const Permutation& s2) {
  if (s1.size() != s2.size()) {
    throw InputError("d_square_perms needs equal lengths (" + std::to_string(s1.size()) + " vs " +
                     std::to_string(s2.size()) + "); use the permuton route");
  }
  const std::size_t n = s1.size();
  detail::check_exact_length(n);
  auto none = [](std::size_t, std::size_t) { return std::int64_t{0}; };
  auto g = detail::permutation_table(s1, 1, none);
  const auto p2 = detail::permutation_table(s2, 1, none);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] -= p2[i];
  return detail::interval_report(detail::max_rectangle(g, n + 1), n, static_cast<std::int64_t>(n));
}

/// D(σ) = max_{S,T} | |σ(S)∩T| − |S||T|/n | = n·d_□(σ, Z_u).
inline DistanceReport discrepancy(const Permutation& sigma) {
  const std::size_t n = sigma.size();
  detail::check_exact_length(n);
  // n²·(F_σ − F_u) at the corners (i/n, j/n).
  const auto sn = static_cast<std::int64_t>(n);
  auto g = detail::permutation_table(sigma, sn, [](std::size_t i, std::size_t j) {
    return static_cast<std::int64_t>(i) * static_cast<std::int64_t>(j);
  });
  return detail::interval_report(detail::max_rectangle(g, n + 1), n, sn);
}

/// d_□ between two step CDFs on their common refinement.
template <Scalar T>
BasicDistanceReport<T> d_square(const StepCdf<T>& a, const StepCdf<T>& b) {
  const auto points = detail::union_breakpoints<T>(a.resolution(), b.resolution());
  if (points.size() > kMaxRefinement) {
    throw GuardError("common refinement of " + std::to_string(points.size()) + " breakpoints exceeds limit " +
                     std::to_string(kMaxRefinement));
  }
  const auto g = detail::difference_table(a, b, points);
  if constexpr (std::is_same_v<T, Rational>) {
    return detail::to_report(
        detail::exact_integer_max(g, points.size(), [](const auto& t, std::size_t n) { return detail::max_rectangle(t, n); }),
        points);
  } else {
    return detail::to_report(detail::max_rectangle(g, points.size()), points);
  }
}

/// d_∞ = sup |F1 − F2|; the witness is the rectangle [0,x]×[0,y] at the maximizer.
template <Scalar T>
BasicDistanceReport<T> d_infty(const StepCdf<T>& a, const StepCdf<T>& b) {
  const auto points = detail::union_breakpoints<T>(a.resolution(), b.resolution());
  if (points.size() > kMaxRefinement) {
    throw GuardError("common refinement of " + std::to_string(points.size()) + " breakpoints exceeds limit " +
                     std::to_string(kMaxRefinement));
  }
  const auto g = detail::difference_table(a, b, points);
  if constexpr (std::is_same_v<T, Rational>) {
    return detail::to_report(
        detail::exact_integer_max(g, points.size(), [](const auto& t, std::size_t n) { return detail::max_abs_entry(t, n); }),
        points);
  } else {
    return detail::to_report(detail::max_abs_entry(g, points.size()), points);
  }
}

inline DistanceReport d_square_permutons(const Permuton& z1, const Permuton& z2) {
  return d_square(StepCdf<Rational>::of(z1), StepCdf<Rational>::of(z2));
}

inline DistanceReport d_infty(const Permuton& z1, const Permuton& z2) {
  return d_infty(StepCdf<Rational>::of(z1), StepCdf<Rational>::of(z2));
}

/// d_□(σ,Z) := d_□(Z_σ, Z).
inline DistanceReport d_square_perm_permuton(const Permutation& sigma, const Permuton& z) {
  return d_square(StepCdf<Rational>::of(sigma), StepCdf<Rational>::of(z));
}

/// d_□(Z_σ, Z_π) for permutations of any lengths. Same-length pairs take
/// the exact integer path; others are evaluated in double precision.
inline ApproxDistanceReport d_square_any_lengths(const Permutation& a, const Permutation& b) {
  if (a.size() == b.size()) {
    const DistanceReport exact = d_square_perms(a, b);
    ApproxDistanceReport out;
    out.value = to_double(exact.value);
    out.witness = {to_double(exact.witness.x1), to_double(exact.witness.x2), to_double(exact.witness.y1),
                   to_double(exact.witness.y2)};
    out.intervals = exact.intervals;
    return out;
  }
  return d_square(StepCdf<double>::of(a), StepCdf<double>::of(b));
}

/// F_k on the k-grid: grid[i][j] = F_k(i/k, j/k) = (1/k)·|{ℓ <= i : σ(ℓ) <= j}|.
class EmpiricalJointCdf {
 public:
  explicit EmpiricalJointCdf(const Permutation& sigma) : k_(sigma.size()) {
    if (k_ + 1 > kMaxRefinement) {
      throw GuardError("permutation length " + std::to_string(k_) + " exceeds corner-table limit");
    }
    auto counts = detail::permutation_table(sigma, 1, [](std::size_t, std::size_t) { return std::int64_t{0}; });
    grid_.reserve(counts.size());
    for (std::int64_t c : counts) grid_.emplace_back(c, static_cast<long long>(k_));
  }

  std::size_t size() const noexcept { return k_; }
  const Rational& at(std::size_t i, std::size_t j) const { return grid_[i * (k_ + 1) + j]; }

 private:
  std::size_t k_;
  std::vector<Rational> grid_;
};

inline EmpiricalJointCdf empirical_joint_cdf(const Permutation& sigma) { return EmpiricalJointCdf(sigma); }

}  // namespace permlim
