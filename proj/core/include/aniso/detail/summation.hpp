#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace aniso::detail {

/// Pairwise (cascade) summation; error grows like O(log n) instead of O(n).
template <class T>
T pairwise_sum(std::span<const T> xs) {
  constexpr std::size_t kLeaf = 32;
  if (xs.size() <= kLeaf) {
    T acc{};
    for (const T& x : xs) acc += x;
    return acc;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

/// Streaming pairwise reduction: blocks are pushed in order and merged like a
/// binary counter, so the summation tree depends only on the block count.
template <class T>
class PairwiseAccumulator {
 public:
  void push(T value) {
    std::size_t level = 0;
    while (!stack_.empty() && stack_.back().level == level) {
      value = std::move(stack_.back().value) + value;
      stack_.pop_back();
      ++level;
    }
    stack_.push_back({std::move(value), level});
  }

  bool empty() const noexcept { return stack_.empty(); }

  T result() && {
    T acc = std::move(stack_.back().value);
    stack_.pop_back();
    while (!stack_.empty()) {
      acc = std::move(stack_.back().value) + acc;
      stack_.pop_back();
    }
    return acc;
  }

 private:
  struct Node {
    T value;
    std::size_t level;
  };
  std::vector<Node> stack_;
};

}  // namespace aniso::detail
