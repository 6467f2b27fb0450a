#pragma once

#include <cstddef>
#include <vector>

namespace permlim {

// Binary indexed tree over positions 1..n with point add and prefix sum.
template <class T>
class FenwickTree {
 public:
  explicit FenwickTree(std::size_t n) : tree_(n + 1, T{}) {}

  void add(std::size_t pos, T delta) {
    for (; pos < tree_.size(); pos += pos & (~pos + 1)) tree_[pos] += delta;
  }

  // Sum over positions 1..pos.
  T prefix(std::size_t pos) const {
    T sum{};
    for (; pos > 0; pos -= pos & (~pos + 1)) sum += tree_[pos];
    return sum;
  }

  std::size_t size() const noexcept { return tree_.size() - 1; }

 private:
  std::vector<T> tree_;
};

}  // namespace permlim
