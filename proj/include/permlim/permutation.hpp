#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "permlim/errors.hpp"

namespace permlim {

/**
 * A permutation of [n] in one-line notation, 1-based: values()[i-1] == sigma(i).
 *
 * Construction validates the bijection invariant; every Permutation in the
 * program is therefore a bijection of {1,...,n} with n >= 1.
 */
class Permutation {
 public:
  using value_type = std::uint32_t;

  explicit Permutation(std::vector<value_type> values) : values_(std::move(values)) { validate(); }

  static Permutation identity(std::size_t n) {
    std::vector<value_type> v(n);
    std::iota(v.begin(), v.end(), value_type{1});
    return Permutation(std::move(v));
  }

  static Permutation reverse(std::size_t n) {
    std::vector<value_type> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<value_type>(n - i);
    return Permutation(std::move(v));
  }

  std::size_t size() const noexcept { return values_.size(); }

  // sigma(i) for 1 <= i <= n.
  value_type operator()(std::size_t i) const { return values_[i - 1]; }

  std::span<const value_type> values() const noexcept { return values_; }

  Permutation inverse() const {
    std::vector<value_type> inv(size());
    for (std::size_t i = 0; i < size(); ++i) inv[values_[i] - 1] = static_cast<value_type>(i + 1);
    return Permutation(std::move(inv), Unchecked{});
  }

  // (this ∘ other)(i) = this(other(i)).
  Permutation compose(const Permutation& other) const {
    if (other.size() != size()) throw InputError("cannot compose permutations of different lengths");
    std::vector<value_type> out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = values_[other.values_[i] - 1];
    return Permutation(std::move(out), Unchecked{});
  }

  // One-line notation joined by `sep`, e.g. "3-1-2".
  std::string to_string(std::string_view sep = " ") const {
    std::string out;
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (i != 0) out.append(sep);
      out += std::to_string(values_[i]);
    }
    return out;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation& a, const Permutation& b) { return a.values_ <=> b.values_; }

 private:
  struct Unchecked {};
  Permutation(std::vector<value_type> values, Unchecked) : values_(std::move(values)) {}

  void validate() const {
    if (values_.empty()) throw InputError("a permutation needs at least one value");
    std::vector<bool> seen(values_.size() + 1, false);
    for (std::size_t i = 0; i < values_.size(); ++i) {
      const value_type v = values_[i];
      if (v < 1 || v > values_.size()) {
        throw InputError("not a bijection: value " + std::to_string(v) + " at index " + std::to_string(i + 1) +
                         " is out of range 1.." + std::to_string(values_.size()));
      }
      if (seen[v]) {
        throw InputError("not a bijection: repeated value " + std::to_string(v) + " at index " +
                         std::to_string(i + 1));
      }
      seen[v] = true;
    }
  }

  template <class T>
  friend Permutation standardize(std::span<const T> seq);

  std::vector<value_type> values_;
};

/// Relative-order pattern of a sequence of distinct keys: the permutation whose
/// values are ranked exactly like `seq`.
template <class T>
Permutation standardize(std::span<const T> seq) {
  std::vector<std::uint32_t> order(seq.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) { return seq[a] < seq[b]; });
  std::vector<Permutation::value_type> ranks(seq.size());
  for (std::size_t r = 0; r < order.size(); ++r) ranks[order[r]] = static_cast<Permutation::value_type>(r + 1);
  return Permutation(std::move(ranks), Permutation::Unchecked{});
}

template <class T>
Permutation standardize(const std::vector<T>& seq) {
  return standardize(std::span<const T>(seq));
}

/**
 * Parses whitespace- and/or comma-separated 1-based integers.
 * Throws InputError on non-integer tokens and bijection violations.
 */
inline Permutation parse_permutation(std::string_view text) {
  std::vector<Permutation::value_type> values;
  std::size_t i = 0;
  auto is_sep = [](char c) { return c == ',' || c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
  while (i < text.size()) {
    while (i < text.size() && is_sep(text[i])) ++i;
    if (i == text.size()) break;
    std::size_t j = i;
    while (j < text.size() && !is_sep(text[j])) ++j;
    std::string_view token = text.substr(i, j - i);
    std::uint64_t v = 0;
    bool ok = token.size() <= 10;
    for (char c : token) {
      if (c < '0' || c > '9') {
        ok = false;
        break;
      }
      v = v * 10 + static_cast<std::uint64_t>(c - '0');
    }
    if (!ok || v > 0xFFFFFFFFull) throw InputError("not an integer: '" + std::string(token) + "'");
    values.push_back(static_cast<Permutation::value_type>(v));
    i = j;
  }
  return Permutation(std::move(values));
}

/// All of S_k in lexicographic order.
inline std::vector<Permutation> all_permutations(std::size_t k) {
  std::vector<Permutation::value_type> v(k);
  std::iota(v.begin(), v.end(), Permutation::value_type{1});
  std::vector<Permutation> out;
  do {
    out.emplace_back(v);
  } while (std::next_permutation(v.begin(), v.end()));
  return out;
}

/// Position of `p` in the lexicographic enumeration of S_k (Lehmer code).
inline std::size_t lexicographic_rank(std::span<const Permutation::value_type> p) {
  const std::size_t k = p.size();
  std::size_t rank = 0;
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t smaller_after = 0;
    for (std::size_t j = i + 1; j < k; ++j) smaller_after += p[j] < p[i] ? 1 : 0;
    rank = rank * (k - i) + smaller_after;
  }
  return rank;
}

}  // namespace permlim
