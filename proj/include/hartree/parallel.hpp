#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <utility>
#include <vector>

namespace hartree {

/// Worker count used by the enumeration kernels and sweeps (>= 1).
void set_thread_count(int threads);
int thread_count();

/// Streaming pairwise (tree) summation. The combination order depends only
/// on the number of terms, so the result is reproducible bit for bit.
template <typename T>
class PairwiseSum {
 public:
  void add(T value) {
    std::size_t n = ++count_;
    stack_.push_back(value);
    while ((n & 1u) == 0) {
      T top = stack_.back();
      stack_.pop_back();
      stack_.back() += top;
      n >>= 1;
    }
  }

  T total() const {
    T acc{};
    for (auto it = stack_.rbegin(); it != stack_.rend(); ++it) acc = *it + acc;
    return acc;
  }

 private:
  std::size_t count_ = 0;
  std::vector<T> stack_;
};

template <typename T>
T pairwise_total(const std::vector<T>& values) {
  PairwiseSum<T> sum;
  for (const auto& v : values) sum.add(v);
  return sum.total();
}

/// Evaluates body(i) for i in [0, n) on up to `threads` workers and returns
/// the results by index.
template <typename T, typename Body>
std::vector<T> parallel_map(std::size_t n, Body&& body, int threads = thread_count()) {
  std::vector<T> results(n);
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) results[i] = body(i);
    return results;
  }
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, n); ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) results[i] = body(i);
    });
  for (auto& t : pool) t.join();
  return results;
}

/// parallel_map followed by a pairwise reduction in index order, so the
/// total does not depend on the partitioning.
template <typename T, typename Body>
T parallel_pairwise_sum(std::size_t n, Body&& body, int threads = thread_count()) {
  return pairwise_total(parallel_map<T>(n, std::forward<Body>(body), threads));
}

}  // namespace hartree
