#pragma once

// Exact distinct-pattern profiles (consecutive windows and arbitrary
// subsequences), exact per-length expectations by full enumeration of S_n,
// and the pigeonhole ceiling sum_k min(C(n,k), k!).

#include <bit>
#include <string>
#include <unordered_set>
#include <vector>

#include "core.hpp"
#include "parallel.hpp"
#include "rational.hpp"

namespace permpat::enumerate {

inline constexpr int kMaxSubsetN = 24;  // subsequence profile walks C(n,k) masks per length
inline constexpr int kMaxExactN = 9;    // exact expectation sweeps all n! permutations

// Per-length distinct-pattern counts of one permutation. Index 0 counts the
// empty pattern, which every permutation contains; both totals are reported
// because the two conventions are both in circulation.
struct PatternTally {
  int n = 0;
  std::vector<long long> per_length;  // index k = 0..n
  long long total_with_empty = 0;
  long long total_without_empty = 0;
};

namespace detail {

using permpat::detail::factorial_table;
using permpat::detail::pattern_lex_rank_of_values;
using permpat::detail::pattern_word_of_values;

// Open-addressing set for nonzero 64-bit keys (nibble-packed codes of length
// 9..16 are never zero). Sized once per length from an exact upper bound on
// the number of distinct codes, so it never grows mid-run; clearing touches
// only occupied slots.
class FlatU64Set {
 public:
  void reset(std::uint64_t expected) {
    std::size_t want = 16;
    while (want < expected * 2) want <<= 1;
    if (slots_.size() < want) slots_.assign(want, 0);
    for (const auto i : touched_) slots_[i] = 0;
    touched_.clear();
    mask_ = slots_.size() - 1;
    // A previous, larger run may have left slots_ oversized; that is fine.
  }

  bool insert(std::uint64_t key) {
    std::size_t i = static_cast<std::size_t>(permpat::detail::mix64(key)) & mask_;
    while (slots_[i] != 0) {
      if (slots_[i] == key) return false;
      i = (i + 1) & mask_;
    }
    slots_[i] = key;
    touched_.push_back(static_cast<std::uint32_t>(i));
    return true;
  }

  std::size_t size() const { return touched_.size(); }

 private:
  std::vector<std::uint64_t> slots_;
  std::vector<std::uint32_t> touched_;
  std::size_t mask_ = 0;
};

inline constexpr int kDenseMax = 8;  // dense dedup by pattern rank while k! fits 8!

struct DedupWorkspace {
  std::vector<std::uint8_t> dense;  // k! marks for k <= kDenseMax
  std::vector<std::uint32_t> dense_touched;
  FlatU64Set words;
  std::unordered_set<std::string> wide;
  std::vector<int> vals;

  void prepare_dense() {
    if (dense.size() < factorial_table()[kDenseMax]) dense.assign(factorial_table()[kDenseMax], 0);
  }
};

inline DedupWorkspace& workspace() {
  thread_local DedupWorkspace ws;
  return ws;
}

inline std::uint64_t binomial_u64(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t b = 1;
  for (int i = 0; i < k; ++i) {
    b = b * static_cast<std::uint64_t>(n - i) / static_cast<std::uint64_t>(i + 1);
  }
  return b;
}

// Widens ranks of a long window into a byte-pair key for the fallback set.
inline void append_wide_key(std::string& out, const int* vals, int k) {
  // O(k log k) ranking for long windows.
  thread_local std::vector<int> order;
  order.resize(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) { return vals[a] < vals[b]; });
  thread_local std::vector<std::uint16_t> rank;
  rank.resize(static_cast<std::size_t>(k));
  for (int r = 0; r < k; ++r) rank[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])] =
      static_cast<std::uint16_t>(r + 1);
  out.assign(reinterpret_cast<const char*>(rank.data()), static_cast<std::size_t>(k) * 2);
}

// Counts distinct patterns over a stream of equal-length windows. The caller
// drives `emit` once per window with a pointer to its k values.
class DistinctCounter {
 public:
  DistinctCounter(int k, std::uint64_t expected) : k_(k) {
    auto& ws = workspace();
    if (k_ <= kDenseMax) {
      ws.prepare_dense();
      ws.dense_touched.clear();
    } else if (k_ <= PatternCode::kPackedMax) {
      ws.words.reset(expected);
    } else {
      ws.wide.clear();
    }
  }

  void emit(const int* vals) {
    auto& ws = workspace();
    if (k_ <= kDenseMax) {
      const auto idx = static_cast<std::uint32_t>(pattern_lex_rank_of_values(vals, k_));
      if (!ws.dense[idx]) {
        ws.dense[idx] = 1;
        ws.dense_touched.push_back(idx);
        ++count_;
      }
    } else if (k_ <= PatternCode::kPackedMax) {
      if (ws.words.insert(pattern_word_of_values(vals, k_))) ++count_;
    } else {
      std::string key;
      append_wide_key(key, vals, k_);
      if (ws.wide.insert(std::move(key)).second) ++count_;
    }
  }

  long long finish() {
    auto& ws = workspace();
    if (k_ <= kDenseMax) {
      for (const auto i : ws.dense_touched) ws.dense[i] = 0;
      ws.dense_touched.clear();
    }
    return count_;
  }

 private:
  int k_;
  long long count_ = 0;
};

}  // namespace detail

// Distinct patterns over all n-k+1 consecutive windows, per length.
inline PatternTally distinct_consecutive(const Permutation& pi) {
  const int n = pi.size();
  PatternTally t;
  t.n = n;
  t.per_length.assign(static_cast<std::size_t>(n) + 1, 0);
  t.per_length[0] = 1;
  const int* v = pi.values().data();
  for (int k = 1; k <= n; ++k) {
    const auto windows = static_cast<std::uint64_t>(n - k + 1);
    std::uint64_t expected = windows;
    if (k <= 20) expected = std::min<std::uint64_t>(expected, detail::factorial_table()[static_cast<std::size_t>(k)]);
    detail::DistinctCounter counter(k, expected);
    for (int m = 0; m + k <= n; ++m) counter.emit(v + m);
    t.per_length[static_cast<std::size_t>(k)] = counter.finish();
  }
  for (int k = 0; k <= n; ++k) t.total_with_empty += t.per_length[static_cast<std::size_t>(k)];
  t.total_without_empty = t.total_with_empty - 1;
  return t;
}

// Distinct patterns over all C(n,k) index subsets, per length. Walks the
// masks of each popcount in Gosper order; the dedup structure is cleared
// between lengths so peak memory is the largest single-length code count.
inline PatternTally distinct_nonconsecutive(const Permutation& pi) {
  const int n = pi.size();
  if (n > kMaxSubsetN)
    throw resource_limit_error("distinct_nonconsecutive: n exceeds the subset-enumeration cap of " +
                               std::to_string(kMaxSubsetN));
  PatternTally t;
  t.n = n;
  t.per_length.assign(static_cast<std::size_t>(n) + 1, 0);
  t.per_length[0] = 1;
  const int* v = pi.values().data();
  auto& ws = detail::workspace();
  ws.vals.resize(static_cast<std::size_t>(n) + 1);
  int* vals = ws.vals.data();
  for (int k = 1; k <= n; ++k) {
    const std::uint64_t expected =
        std::min<std::uint64_t>(detail::binomial_u64(n, k),
                                k <= 20 ? detail::factorial_table()[static_cast<std::size_t>(k)] : ~0ull);
    detail::DistinctCounter counter(k, expected);
    permpat::detail::for_each_subset_mask(n, k, [&](std::uint32_t mask) {
      int c = 0;
      for (std::uint32_t m = mask; m != 0; m &= m - 1) vals[c++] = v[std::countr_zero(m)];
      counter.emit(vals);
    });
    t.per_length[static_cast<std::size_t>(k)] = counter.finish();
  }
  for (int k = 0; k <= n; ++k) t.total_with_empty += t.per_length[static_cast<std::size_t>(k)];
  t.total_without_empty = t.total_with_empty - 1;
  return t;
}

// Exact expectations of per-length distinct-pattern counts over a uniform
// permutation, by averaging over all n! permutations.
struct ExactExpectation {
  int n = 0;
  std::vector<BigRat> per_k;  // index 0..n; per_k[0] == 1
  BigRat total_with_empty;
  BigRat total_without_empty;
};

inline ExactExpectation exact_expected(int n, int workers = 1) {
  if (n > kMaxExactN)
    throw resource_limit_error("exact_expected: n exceeds the full-sweep cap of " + std::to_string(kMaxExactN));
  if (n < 1) throw std::invalid_argument("exact_expected: n must be >= 1");
  const std::uint64_t total = detail::factorial_table()[static_cast<std::size_t>(n)];
  const int lanes = std::max(1, workers);
  std::vector<std::vector<long long>> sums(static_cast<std::size_t>(lanes),
                                           std::vector<long long>(static_cast<std::size_t>(n) + 1, 0));
  parallel_blocks(static_cast<long long>(total), lanes, [&](int w, long long b, long long e) {
    auto& local = sums[static_cast<std::size_t>(w)];
    permpat::detail::for_each_permutation_block(
        n, static_cast<std::uint64_t>(b), static_cast<std::uint64_t>(e), [&](const std::vector<int>& vals) {
          const PatternTally t = distinct_nonconsecutive(Permutation::unchecked(vals));
          for (int k = 0; k <= n; ++k) local[static_cast<std::size_t>(k)] += t.per_length[static_cast<std::size_t>(k)];
        });
  });
  std::vector<long long> merged(static_cast<std::size_t>(n) + 1, 0);
  for (const auto& local : sums)
    for (int k = 0; k <= n; ++k) merged[static_cast<std::size_t>(k)] += local[static_cast<std::size_t>(k)];

  ExactExpectation e;
  e.n = n;
  e.per_k.resize(static_cast<std::size_t>(n) + 1);
  const BigInt denom = factorial_big(n);
  for (int k = 0; k <= n; ++k) {
    e.per_k[static_cast<std::size_t>(k)] = BigRat(BigInt(merged[static_cast<std::size_t>(k)]), denom);
    e.total_with_empty += e.per_k[static_cast<std::size_t>(k)];
  }
  e.total_without_empty = e.total_with_empty - 1;
  return e;
}

// sum_{k=1}^{n} min(C(n,k), k!), exact.
inline BigInt pigeonhole_max(int n) {
  if (n < 0) throw std::invalid_argument("pigeonhole_max: n must be >= 0");
  BigInt total = 0;
  BigInt kfact = 1;
  for (int k = 1; k <= n; ++k) {
    kfact *= k;
    total += std::min(binomial_big(n, k), kfact);
  }
  return total;
}

}  // namespace permpat::enumerate
