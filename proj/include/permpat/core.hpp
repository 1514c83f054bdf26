#pragma once

// Permutation and pattern value types, canonical reduction, containment and
// occurrence counting. Everything here is an immutable value; all operations
// are pure and safe to call from concurrent workers.

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace permpat {

// Thrown when an input exceeds a documented enumeration cap.
class resource_limit_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Factorials 0! .. 20! (all that fit in 64 bits).
inline const std::array<std::uint64_t, 21>& factorial_table() {
  static const std::array<std::uint64_t, 21> table = [] {
    std::array<std::uint64_t, 21> t{};
    t[0] = 1;
    for (int i = 1; i <= 20; ++i) t[i] = t[i - 1] * static_cast<std::uint64_t>(i);
    return t;
  }();
  return table;
}

// Next bit mask with the same popcount (Gosper). Undefined for mask == 0.
inline std::uint32_t next_subset_mask(std::uint32_t mask) {
  const std::uint32_t c = mask & (0u - mask);
  const std::uint32_t r = mask + c;
  return (((r ^ mask) >> 2) / c) | r;
}

// Calls fn(mask) for every n-bit mask of popcount k, in increasing order.
template <class Fn>
inline void for_each_subset_mask(int n, int k, Fn&& fn) {
  if (k < 0 || k > n) return;
  if (k == 0) {
    fn(std::uint32_t{0});
    return;
  }
  const std::uint32_t limit = std::uint32_t{1} << n;
  std::uint32_t mask = (std::uint32_t{1} << k) - 1;
  while (mask < limit) {
    fn(mask);
    if (mask == limit - 1) break;  // full set has no successor within n bits
    mask = next_subset_mask(mask);
  }
}

// Lexicographic rank (0-based) of the pattern of vals[0..k) among the k!
// patterns of length k; k <= 20. Equals the rank of the reduced sequence
// because ranking is monotone in the values.
inline std::uint64_t pattern_lex_rank_of_values(const int* vals, int k) {
  const auto& fact = factorial_table();
  std::uint64_t rank = 0;
  for (int i = 0; i < k; ++i) {
    int smaller_right = 0;
    for (int j = i + 1; j < k; ++j) smaller_right += vals[j] < vals[i];
    rank += static_cast<std::uint64_t>(smaller_right) * fact[k - 1 - i];
  }
  return rank;
}

// Nibble-packed word of (rank-1) values for k <= 16.
inline std::uint64_t pattern_word_of_values(const int* vals, int k) {
  std::uint64_t word = 0;
  for (int i = 0; i < k; ++i) {
    int below = 0;
    for (int j = 0; j < k; ++j) below += vals[j] < vals[i];
    word |= static_cast<std::uint64_t>(below) << (4 * i);
  }
  return word;
}

// Lexicographically index-th permutation of 1..n (0-based index), n <= 20.
inline std::vector<int> nth_permutation(int n, std::uint64_t index) {
  const auto& fact = factorial_table();
  std::vector<int> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), 1);
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = n; i >= 1; --i) {
    const std::uint64_t f = fact[i - 1];
    const auto d = static_cast<std::size_t>(index / f);
    index %= f;
    out.push_back(pool[d]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(d));
  }
  return out;
}

// Calls fn(values) for the permutations of 1..n with lexicographic indices in
// [begin, end). `values` is reused between calls.
template <class Fn>
inline void for_each_permutation_block(int n, std::uint64_t begin, std::uint64_t end, Fn&& fn) {
  if (begin >= end) return;
  std::vector<int> values = nth_permutation(n, begin);
  for (std::uint64_t idx = begin; idx < end; ++idx) {
    fn(const_cast<const std::vector<int>&>(values));
    std::next_permutation(values.begin(), values.end());
  }
}

}  // namespace detail

// Canonical encoding of a pattern: the rank sequence of k distinct values.
// Two patterns are equal iff their codes are identical. For k <= 16 the ranks
// pack into one 64-bit word (rank-1 in each 4-bit field); longer patterns use
// a 16-bit-per-rank fallback sequence.
class PatternCode {
 public:
  static constexpr int kPackedMax = 16;

  PatternCode() = default;  // the empty pattern

  static PatternCode from_ranks(std::span<const int> ranks) {
    const int k = static_cast<int>(ranks.size());
    std::vector<char> seen(static_cast<std::size_t>(k), 0);
    for (int r : ranks) {
      if (r < 1 || r > k || seen[static_cast<std::size_t>(r - 1)])
        throw std::invalid_argument("PatternCode: ranks must form a permutation of 1..k");
      seen[static_cast<std::size_t>(r - 1)] = 1;
    }
    PatternCode c;
    c.len_ = static_cast<std::uint16_t>(k);
    if (k <= kPackedMax) {
      for (int i = 0; i < k; ++i)
        c.word_ |= static_cast<std::uint64_t>(ranks[static_cast<std::size_t>(i)] - 1) << (4 * i);
    } else {
      c.ext_.assign(ranks.begin(), ranks.end());
    }
    return c;
  }

  int length() const { return len_; }
  bool empty() const { return len_ == 0; }

  // Rank at 1-based position, in 1..k.
  int rank_at(int pos) const {
    if (len_ <= kPackedMax) return static_cast<int>((word_ >> (4 * (pos - 1))) & 0xF) + 1;
    return ext_[static_cast<std::size_t>(pos - 1)];
  }

  std::vector<int> ranks() const {
    std::vector<int> r(static_cast<std::size_t>(len_));
    for (int i = 1; i <= len_; ++i) r[static_cast<std::size_t>(i - 1)] = rank_at(i);
    return r;
  }

  std::uint64_t packed_word() const { return word_; }

  friend bool operator==(const PatternCode&, const PatternCode&) = default;

  // Order: by length, then lexicographically on the rank sequence. This is
  // the total order behind 0-based pattern indexing.
  friend bool operator<(const PatternCode& a, const PatternCode& b) {
    if (a.len_ != b.len_) return a.len_ < b.len_;
    for (int i = 1; i <= a.len_; ++i) {
      const int ra = a.rank_at(i), rb = b.rank_at(i);
      if (ra != rb) return ra < rb;
    }
    return false;
  }

  std::size_t hash() const {
    if (len_ <= kPackedMax)
      return static_cast<std::size_t>(detail::mix64(word_ ^ (static_cast<std::uint64_t>(len_) << 56)));
    std::uint64_t h = 0xCBF29CE484222325ULL ^ static_cast<std::uint64_t>(len_);
    for (const auto v : ext_) {
      h ^= v;
      h *= 0x100000001B3ULL;
    }
    return static_cast<std::size_t>(h);
  }

  // Digit string for k <= 9 ("493265178"); space-separated ranks beyond.
  std::string to_string() const {
    std::string s;
    if (len_ <= 9) {
      for (int i = 1; i <= len_; ++i) s.push_back(static_cast<char>('0' + rank_at(i)));
    } else {
      for (int i = 1; i <= len_; ++i) {
        if (i > 1) s.push_back(' ');
        s += std::to_string(rank_at(i));
      }
    }
    return s;
  }

 private:
  std::uint16_t len_ = 0;
  std::uint64_t word_ = 0;
  std::vector<std::uint16_t> ext_;
};

struct PatternCodeHash {
  std::size_t operator()(const PatternCode& c) const { return c.hash(); }
};

// A permutation of [n] in one-line notation; n = 0 is the empty permutation.
class Permutation {
 public:
  Permutation() = default;

  static Permutation identity(int n) {
    if (n < 0) throw std::invalid_argument("Permutation: n must be >= 0");
    std::vector<int> v(static_cast<std::size_t>(n));
    std::iota(v.begin(), v.end(), 1);
    return Permutation(std::move(v));
  }

  static Permutation reversal(int n) {
    std::vector<int> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = n - i;
    return Permutation(std::move(v));
  }

  static Permutation from_values(std::vector<int> values) {
    const int n = static_cast<int>(values.size());
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (int v : values) {
      if (v < 1 || v > n || seen[static_cast<std::size_t>(v - 1)])
        throw std::invalid_argument("Permutation: values must be a bijection on {1..n}");
      seen[static_cast<std::size_t>(v - 1)] = 1;
    }
    return Permutation(std::move(values));
  }

  // Caller guarantees the values form a permutation of 1..n.
  static Permutation unchecked(std::vector<int> values) { return Permutation(std::move(values)); }

  // Accepts comma- or space-separated one-line notation ("3 4 1 5 2"), or a
  // plain digit string for n <= 9 ("34152").
  static Permutation parse(const std::string& text) {
    std::vector<int> vals;
    const bool separated = text.find_first_of(", \t") != std::string::npos;
    if (!separated) {
      for (char ch : text) {
        if (!std::isdigit(static_cast<unsigned char>(ch)))
          throw std::invalid_argument("Permutation::parse: unexpected character");
        vals.push_back(ch - '0');
      }
      if (vals.size() > 9)
        throw std::invalid_argument("Permutation::parse: digit-string form only supports n <= 9; use separators");
    } else {
      std::string token;
      std::istringstream in(text);
      while (std::getline(in, token, ',')) {
        std::istringstream part(token);
        int v;
        while (part >> v) vals.push_back(v);
      }
    }
    return from_values(std::move(vals));
  }

  int size() const { return static_cast<int>(v_.size()); }
  int at(int pos) const { return v_[static_cast<std::size_t>(pos - 1)]; }  // 1-based
  std::span<const int> values() const { return v_; }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < v_.size(); ++i) {
      if (i) s.push_back(' ');
      s += std::to_string(v_[i]);
    }
    return s;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  explicit Permutation(std::vector<int> v) : v_(std::move(v)) {}
  std::vector<int> v_;
};

// A strictly increasing sequence of 1-based positions.
class IndexSet {
 public:
  IndexSet() = default;

  static IndexSet of(std::vector<int> positions) {
    for (std::size_t i = 0; i < positions.size(); ++i) {
      if (positions[i] < 1 || (i > 0 && positions[i] <= positions[i - 1]))
        throw std::invalid_argument("IndexSet: positions must be strictly increasing and >= 1");
    }
    IndexSet s;
    s.p_ = std::move(positions);
    return s;
  }

  static IndexSet from_mask(std::uint64_t mask) {
    std::vector<int> p;
    for (int b = 0; b < 64; ++b)
      if (mask >> b & 1) p.push_back(b + 1);
    IndexSet s;
    s.p_ = std::move(p);
    return s;
  }

  int size() const { return static_cast<int>(p_.size()); }
  int at(int i) const { return p_[static_cast<std::size_t>(i - 1)]; }  // 1-based
  std::span<const int> positions() const { return p_; }

  std::uint64_t mask() const {
    std::uint64_t m = 0;
    for (int pos : p_) {
      if (pos > 64) throw std::invalid_argument("IndexSet::mask: position beyond 64");
      m |= std::uint64_t{1} << (pos - 1);
    }
    return m;
  }

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  std::vector<int> p_;
};

// Rank reduction: entry i is replaced by its rank among the window entries.
// Entries must be pairwise distinct.
inline PatternCode reduce(std::span<const int> window) {
  const int k = static_cast<int>(window.size());
  std::vector<int> ranks(static_cast<std::size_t>(k));
  if (k <= 24) {
    for (int i = 0; i < k; ++i) {
      int below = 0;
      for (int j = 0; j < k; ++j) {
        if (i != j && window[static_cast<std::size_t>(j)] == window[static_cast<std::size_t>(i)])
          throw std::invalid_argument("reduce: entries must be distinct");
        below += window[static_cast<std::size_t>(j)] < window[static_cast<std::size_t>(i)];
      }
      ranks[static_cast<std::size_t>(i)] = below + 1;
    }
  } else {
    std::vector<int> order(static_cast<std::size_t>(k));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return window[static_cast<std::size_t>(a)] < window[static_cast<std::size_t>(b)];
    });
    for (int r = 0; r < k; ++r) {
      if (r > 0 && window[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])] ==
                       window[static_cast<std::size_t>(order[static_cast<std::size_t>(r - 1)])])
        throw std::invalid_argument("reduce: entries must be distinct");
      ranks[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])] = r + 1;
    }
  }
  return PatternCode::from_ranks(ranks);
}

inline PatternCode reduce(const Permutation& pi, const IndexSet& at) {
  std::vector<int> vals;
  vals.reserve(static_cast<std::size_t>(at.size()));
  for (int pos : at.positions()) {
    if (pos > pi.size()) throw std::invalid_argument("reduce: position beyond permutation length");
    vals.push_back(pi.at(pos));
  }
  return reduce(vals);
}

// True iff the pattern occurs exactly at the given index set.
inline bool occurs_at(const Permutation& pi, const PatternCode& mu, const IndexSet& at) {
  if (at.size() != mu.length()) throw std::invalid_argument("occurs_at: index set size must equal pattern length");
  return reduce(pi, at) == mu;
}

// Classical containment: some increasing index set realizes the pattern.
// Leftmost-greedy backtracking with value-window pruning; intended for small
// pattern lengths (k <= 16).
inline bool contains(const Permutation& pi, const PatternCode& mu) {
  const int n = pi.size();
  const int k = mu.length();
  if (k == 0) return true;
  if (k > n) return false;
  const std::vector<int> ranks = mu.ranks();
  std::vector<int> chosen(static_cast<std::size_t>(k), 0);

  std::function<bool(int, int)> dfs = [&](int t, int start) -> bool {
    if (t == k) return true;
    // Admissible value window from the already-chosen prefix.
    for (int pos = start; pos <= n - (k - t) + 1; ++pos) {
      const int v = pi.at(pos);
      int lo = 0, hi = n + 1;
      for (int s = 0; s < t; ++s) {
        if (ranks[static_cast<std::size_t>(s)] < ranks[static_cast<std::size_t>(t)])
          lo = std::max(lo, chosen[static_cast<std::size_t>(s)]);
        else
          hi = std::min(hi, chosen[static_cast<std::size_t>(s)]);
      }
      if (v > lo && v < hi) {
        chosen[static_cast<std::size_t>(t)] = v;
        if (dfs(t + 1, pos + 1)) return true;
      }
    }
    return false;
  };
  return dfs(0, 1);
}

// Number of occurrences of the pattern `needle` inside the pattern
// `haystack`: subsets of positions of `haystack` reducing to `needle`.
// Brute force over all C(k, r) subsets.
inline long long count_occurrences(const PatternCode& haystack, const PatternCode& needle) {
  const int k = haystack.length();
  const int r = needle.length();
  if (r > k) throw std::invalid_argument("count_occurrences: needle longer than haystack");
  if (r == 0) return 1;
  const std::vector<int> hay = haystack.ranks();
  std::vector<int> idx(static_cast<std::size_t>(r));
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<int> window(static_cast<std::size_t>(r));
  long long count = 0;
  for (;;) {
    for (int i = 0; i < r; ++i)
      window[static_cast<std::size_t>(i)] = hay[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
    if (r <= PatternCode::kPackedMax
            ? detail::pattern_word_of_values(window.data(), r) == needle.packed_word()
            : reduce(window) == needle)
      ++count;
    // next combination
    int i = r - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == k - r + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < r; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return count;
}

// Value complement: v -> n+1-v. Containment is invariant under taking the
// complement of both arguments.
inline Permutation complement(const Permutation& pi) {
  const int n = pi.size();
  std::vector<int> v(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) v[static_cast<std::size_t>(i - 1)] = n + 1 - pi.at(i);
  return Permutation::unchecked(std::move(v));
}

inline PatternCode complement(const PatternCode& mu) {
  const int k = mu.length();
  std::vector<int> r(static_cast<std::size_t>(k));
  for (int i = 1; i <= k; ++i) r[static_cast<std::size_t>(i - 1)] = k + 1 - mu.rank_at(i);
  return PatternCode::from_ranks(r);
}

// 0-based index of the pattern in the lexicographic order of length-k rank
// sequences, and its inverse. k <= 20.
inline std::uint64_t pattern_lex_index(const PatternCode& mu) {
  const std::vector<int> r = mu.ranks();
  return detail::pattern_lex_rank_of_values(r.data(), mu.length());
}

inline PatternCode pattern_at(int k, std::uint64_t index) {
  if (k < 0 || k > 20) throw std::invalid_argument("pattern_at: k must be in [0, 20]");
  if (index >= detail::factorial_table()[static_cast<std::size_t>(k)])
    throw std::invalid_argument("pattern_at: index out of range");
  const std::vector<int> seq = detail::nth_permutation(k, index);
  return PatternCode::from_ranks(seq);
}

// Accepts a digit string for k <= 9 ("493265178") or separated ranks.
inline PatternCode parse_pattern(const std::string& text) {
  return PatternCode::from_ranks(Permutation::parse(text).values());
}

}  // namespace permpat
