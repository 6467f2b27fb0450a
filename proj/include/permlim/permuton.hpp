#pragma once

/**
 * @file permuton.hpp
 * @brief Limit permutations with evaluable conditional and joint CDFs.
 *
 * A permuton Z is a family of row CDFs Z(x,·) whose column averages are
 * uniform: ∫ Z(x,y) dx = y. Equivalently it is a probability measure μ on
 * [0,1]² with uniform marginals; F(x,y) = μ([0,x]×[0,y]).
 *
 * Two concrete kinds exist:
 *  - UniformPermuton, Z(x,y) = y.
 *  - GridPermuton, a step density f(x,y) = m·M[⌈mx⌉][⌈my⌉] for a doubly
 *    stochastic m×m matrix M. The permuton Z_σ induced by a permutation σ is
 *    the m = n case with M the permutation matrix of σ.
 *
 * All evaluations are templated on the scalar: Rational gives exact values
 * for rational inputs, double is used by the samplers.
 */

#include <cmath>
#include <concepts>
#include <cstddef>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "permlim/errors.hpp"
#include "permlim/permutation.hpp"
#include "permlim/rational.hpp"

namespace permlim {

template <class T>
concept Scalar = std::same_as<T, Rational> || std::same_as<T, double>;

// Largest n for which from_permutation materializes the dense n×n matrix.
inline constexpr std::size_t kMaxDenseGrid = 256;

namespace detail {

inline void check_unit(const Rational& v, const char* name) {
  if (v < 0 || v > 1) throw InputError(std::string(name) + " = " + to_string(v) + " outside [0,1]");
}
inline void check_unit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) throw InputError(std::string(name) + " = " + std::to_string(v) + " outside [0,1]");
}

// ⌈m·v⌉ clamped to 1..m: v = 0 lands in cell 1 and v = c/m lies in cell c.
inline std::size_t cell_of(const Rational& v, std::size_t m) {
  const Rational scaled = v * m;
  const BigInt num = numerator_of(scaled);
  const BigInt den = denominator_of(scaled);
  BigInt c = num / den;
  if (c * den < num) ++c;
  const auto cell = c.convert_to<long long>();
  return cell < 1 ? 1 : static_cast<std::size_t>(cell);
}
inline std::size_t cell_of(double v, std::size_t m) {
  const double c = std::ceil(v * static_cast<double>(m));
  if (c < 1.0) return 1;
  if (c > static_cast<double>(m)) return m;
  return static_cast<std::size_t>(c);
}

}  // namespace detail

class UniformPermuton {
 public:
  friend bool operator==(const UniformPermuton&, const UniformPermuton&) = default;
};

class GridPermuton {
 public:
  using Matrix = std::vector<std::vector<Rational>>;

  /// Validates squareness, nonnegativity and exact unit row/column sums.
  static GridPermuton from_matrix(const Matrix& rows) {
    const std::size_t m = rows.size();
    if (m == 0) throw InputError("grid permuton matrix is empty");
    std::vector<Rational> flat;
    flat.reserve(m * m);
    for (std::size_t r = 0; r < m; ++r) {
      if (rows[r].size() != m) {
        throw InputError("grid permuton matrix is not square: row " + std::to_string(r + 1) + " has " +
                         std::to_string(rows[r].size()) + " entries, expected " + std::to_string(m));
      }
      for (std::size_t c = 0; c < m; ++c) {
        if (rows[r][c] < 0) {
          throw InputError("negative entry at (" + std::to_string(r + 1) + "," + std::to_string(c + 1) + ")");
        }
        flat.push_back(rows[r][c]);
      }
    }
    for (std::size_t r = 0; r < m; ++r) {
      Rational row = 0;
      Rational col = 0;
      for (std::size_t c = 0; c < m; ++c) {
        row += flat[r * m + c];
        col += flat[c * m + r];
      }
      if (row != 1) throw InputError("row " + std::to_string(r + 1) + " sums to " + to_string(row) + ", not 1");
      if (col != 1) {
        throw InputError("column " + std::to_string(r + 1) + " sums to " + to_string(col) + ", not 1");
      }
    }
    return GridPermuton(m, std::move(flat));
  }

  /// Z_σ: density n on the cells (i, σ(i)).
  static GridPermuton from_permutation(const Permutation& sigma) {
    const std::size_t n = sigma.size();
    if (n > kMaxDenseGrid) {
      throw GuardError("permutation length " + std::to_string(n) + " exceeds dense grid limit " +
                       std::to_string(kMaxDenseGrid));
    }
    std::vector<Rational> flat(n * n, Rational(0));
    for (std::size_t i = 1; i <= n; ++i) flat[(i - 1) * n + (sigma(i) - 1)] = 1;
    return GridPermuton(n, std::move(flat));
  }

  std::size_t resolution() const noexcept { return m_; }

  // M[r][c], 1-based.
  const Rational& entry(std::size_t r, std::size_t c) const { return exact_[(r - 1) * m_ + (c - 1)]; }

  template <Scalar T>
  T entry_as(std::size_t r, std::size_t c) const {
    if constexpr (std::is_same_v<T, Rational>) {
      return entry(r, c);
    } else {
      return approx_[(r - 1) * m_ + (c - 1)];
    }
  }

  // Σ_{c' <= c} M[r][c'] for 0 <= c <= m.
  template <Scalar T>
  T row_prefix(std::size_t r, std::size_t c) const {
    const std::size_t at = (r - 1) * (m_ + 1) + c;
    if constexpr (std::is_same_v<T, Rational>) {
      return row_prefix_exact_[at];
    } else {
      return row_prefix_approx_[at];
    }
  }

  // F(i/m, j/m) for 0 <= i,j <= m.
  template <Scalar T>
  T corner_cdf(std::size_t i, std::size_t j) const {
    const std::size_t at = i * (m_ + 1) + j;
    if constexpr (std::is_same_v<T, Rational>) {
      return corner_exact_[at];
    } else {
      return corner_approx_[at];
    }
  }

  Matrix matrix() const {
    Matrix rows(m_, std::vector<Rational>(m_));
    for (std::size_t r = 0; r < m_; ++r)
      for (std::size_t c = 0; c < m_; ++c) rows[r][c] = exact_[r * m_ + c];
    return rows;
  }

  friend bool operator==(const GridPermuton& a, const GridPermuton& b) {
    return a.m_ == b.m_ && a.exact_ == b.exact_;
  }

 private:
  GridPermuton(std::size_t m, std::vector<Rational> flat) : m_(m), exact_(std::move(flat)) {
    approx_.reserve(m_ * m_);
    for (const Rational& v : exact_) approx_.push_back(to_double(v));
    row_prefix_exact_.assign(m_ * (m_ + 1), Rational(0));
    for (std::size_t r = 0; r < m_; ++r) {
      for (std::size_t c = 1; c <= m_; ++c) {
        row_prefix_exact_[r * (m_ + 1) + c] = row_prefix_exact_[r * (m_ + 1) + c - 1] + exact_[r * m_ + c - 1];
      }
    }
    // Cell masses are M/m; corner CDF values are their 2-D prefix sums.
    corner_exact_.assign((m_ + 1) * (m_ + 1), Rational(0));
    for (std::size_t i = 1; i <= m_; ++i) {
      for (std::size_t j = 1; j <= m_; ++j) {
        corner_exact_[i * (m_ + 1) + j] = corner_exact_[(i - 1) * (m_ + 1) + j] +
                                          row_prefix_exact_[(i - 1) * (m_ + 1) + j] / Rational(m_);
      }
    }
    for (const Rational& v : row_prefix_exact_) row_prefix_approx_.push_back(to_double(v));
    for (const Rational& v : corner_exact_) corner_approx_.push_back(to_double(v));
  }

  std::size_t m_;
  std::vector<Rational> exact_;
  std::vector<double> approx_;
  std::vector<Rational> row_prefix_exact_;
  std::vector<double> row_prefix_approx_;
  std::vector<Rational> corner_exact_;
  std::vector<double> corner_approx_;
};

using Permuton = std::variant<UniformPermuton, GridPermuton>;

inline Permuton uniform_permuton() { return UniformPermuton{}; }

inline GridPermuton from_permutation(const Permutation& sigma) { return GridPermuton::from_permutation(sigma); }

inline GridPermuton grid_permuton(const GridPermuton::Matrix& rows) { return GridPermuton::from_matrix(rows); }

/// Z(x,y): the CDF of the vertical coordinate conditioned on horizontal coordinate x.
template <Scalar T>
T conditional_cdf(const Permuton& z, const T& x, const T& y) {
  detail::check_unit(x, "x");
  detail::check_unit(y, "y");
  if (std::holds_alternative<UniformPermuton>(z)) return y;
  const auto& g = std::get<GridPermuton>(z);
  const std::size_t m = g.resolution();
  const std::size_t row = detail::cell_of(x, m);
  const std::size_t col = detail::cell_of(y, m);
  const T within = y * T(m) - T(col - 1);
  return g.row_prefix<T>(row, col - 1) + g.entry_as<T>(row, col) * within;
}

/// F(x,y) = ∫_0^x Z(s,y) ds = μ([0,x]×[0,y]).
template <Scalar T>
T joint_cdf(const Permuton& z, const T& x, const T& y) {
  detail::check_unit(x, "x");
  detail::check_unit(y, "y");
  if (std::holds_alternative<UniformPermuton>(z)) return x * y;
  const auto& g = std::get<GridPermuton>(z);
  const std::size_t m = g.resolution();
  const std::size_t i = detail::cell_of(x, m);
  const std::size_t j = detail::cell_of(y, m);
  // The density is constant on the cell, so F is bilinear there.
  const T fx = x * T(m) - T(i - 1);
  const T fy = y * T(m) - T(j - 1);
  const T one(1);
  return g.corner_cdf<T>(i - 1, j - 1) * (one - fx) * (one - fy) + g.corner_cdf<T>(i, j - 1) * fx * (one - fy) +
         g.corner_cdf<T>(i - 1, j) * (one - fx) * fy + g.corner_cdf<T>(i, j) * fx * fy;
}

/// μ([x1,x2]×[y1,y2]) by inclusion–exclusion on F.
template <Scalar T>
T rect_mass(const Permuton& z, const T& x1, const T& x2, const T& y1, const T& y2) {
  if (x1 > x2 || y1 > y2) throw InputError("rectangle bounds are inverted");
  return joint_cdf(z, x2, y2) - joint_cdf(z, x1, y2) - joint_cdf(z, x2, y1) + joint_cdf(z, x1, y1);
}

/// inf{ y : Z(x,y) >= u }, exact for rational inputs on grid permutons.
template <Scalar T>
T inverse_conditional_cdf(const Permuton& z, const T& x, const T& u) {
  detail::check_unit(x, "x");
  detail::check_unit(u, "u");
  if (std::holds_alternative<UniformPermuton>(z)) return u;
  if (u <= T(0)) return T(0);
  const auto& g = std::get<GridPermuton>(z);
  const std::size_t m = g.resolution();
  const std::size_t row = detail::cell_of(x, m);
  std::size_t last_positive = 0;
  for (std::size_t c = 1; c <= m; ++c) {
    const T mass = g.entry_as<T>(row, c);
    if (!(mass > T(0))) continue;
    last_positive = c;
    const T below = g.row_prefix<T>(row, c - 1);
    if (below + mass >= u) {
      T y = (T(c - 1) + (u - below) / mass) / T(m);
      return y > T(1) ? T(1) : y;
    }
  }
  // Only reachable through rounding when u is within an ulp of 1.
  if constexpr (std::is_same_v<T, double>) {
    if (last_positive != 0) return static_cast<double>(last_positive) / static_cast<double>(m);
  }
  throw InvariantError("row " + std::to_string(row) + " CDF never reaches u");
}

}  // namespace permlim
