#pragma once

// Brute-force verification of the combinatorial claims behind the
// Stein-Chen coupling: counts of "good" permutations supporting a pattern at
// two overlapping position sets, the forced values at the overlap, the
// cross-block swap property, correctness of the coupling (conditional-law
// equality), friendliness necessity, and the restriction-uniformity facts
// behind the 1/r! average.

#include <algorithm>
#include <array>
#include <bit>
#include <map>
#include <string>
#include <vector>

#include "core.hpp"
#include "rational.hpp"

namespace permpat::oracles {

inline constexpr int kMaxScenarioM = 10;  // good_count enumerates m! permutations
inline constexpr int kMaxAuditN = 8;      // coupling_audit sweeps all n! permutations
inline constexpr int kMaxAuditK = 4;      // keeps friendliness classes at (2k-1)! or smaller
inline constexpr int kMaxUniformityK = 7;
inline constexpr int kMaxAverageK = 6;

// Two k-position sets inside the universe [m], m = 2k - r, whose union is all
// of [m], plus the pattern expected at both.
struct OverlapScenario {
  int k = 0;
  IndexSet pos_j;
  IndexSet pos_i;
  PatternCode pattern;

  int overlap() const {
    return static_cast<int>(std::popcount(pos_j.mask() & pos_i.mask()));
  }
  int universe() const { return 2 * k - overlap(); }

  void validate() const {
    if (pattern.length() != k || pos_j.size() != k || pos_i.size() != k)
      throw std::invalid_argument("OverlapScenario: pattern and both position sets must have size k");
    const int r = overlap();
    if (r < 1) throw std::invalid_argument("OverlapScenario: position sets must overlap");
    const int m = 2 * k - r;
    const std::uint64_t full = (m >= 64) ? ~0ull : ((std::uint64_t{1} << m) - 1);
    if ((pos_j.mask() | pos_i.mask()) != full)
      throw std::invalid_argument("OverlapScenario: the union of the position sets must be exactly [2k-r]");
  }
};

struct GoodCount {
  long long count = 0;
  long long bound = 0;  // 2^(2k-2r)
  std::vector<Permutation> witnesses;
};

// Exhaustively counts permutations of [m] carrying the pattern at both
// position sets. A zero count is a valid outcome (non-isomorphic overlap
// restrictions admit no good permutation).
inline GoodCount good_count(const OverlapScenario& s, std::size_t witness_cap = ~std::size_t{0}) {
  s.validate();
  const int m = s.universe();
  if (m > kMaxScenarioM)
    throw resource_limit_error("good_count: universe exceeds the enumeration cap of " +
                               std::to_string(kMaxScenarioM));
  const int r = s.overlap();
  GoodCount out;
  out.bound = 1LL << (2 * s.k - 2 * r);

  const std::uint64_t word = s.pattern.packed_word();
  std::vector<int> jpos(s.pos_j.positions().begin(), s.pos_j.positions().end());
  std::vector<int> ipos(s.pos_i.positions().begin(), s.pos_i.positions().end());
  std::vector<int> window(static_cast<std::size_t>(s.k));
  const std::uint64_t total = permpat::detail::factorial_table()[static_cast<std::size_t>(m)];
  permpat::detail::for_each_permutation_block(m, 0, total, [&](const std::vector<int>& sigma) {
    for (int t = 0; t < s.k; ++t)
      window[static_cast<std::size_t>(t)] = sigma[static_cast<std::size_t>(jpos[static_cast<std::size_t>(t)] - 1)];
    if (permpat::detail::pattern_word_of_values(window.data(), s.k) != word) return;
    for (int t = 0; t < s.k; ++t)
      window[static_cast<std::size_t>(t)] = sigma[static_cast<std::size_t>(ipos[static_cast<std::size_t>(t)] - 1)];
    if (permpat::detail::pattern_word_of_values(window.data(), s.k) != word) return;
    ++out.count;
    if (out.witnesses.size() < witness_cap) out.witnesses.push_back(Permutation::unchecked(sigma));
  });
  return out;
}

// Values a good permutation is forced to hold at the overlap positions:
// with (u_s, l_s) the pattern ranks at the s-th overlap position within
// pos_j / pos_i, listed by increasing u, the value is u_s + l_s - s.
// Returns the witness values in that order; throws if the witness is not good
// or a value deviates from the forced one.
inline std::vector<int> overlap_values(const OverlapScenario& s, const Permutation& witness) {
  s.validate();
  if (witness.size() != s.universe())
    throw std::invalid_argument("overlap_values: witness length must be 2k-r");
  if (!occurs_at(witness, s.pattern, s.pos_j) || !occurs_at(witness, s.pattern, s.pos_i))
    throw std::logic_error("overlap_values: witness is not good for the scenario");

  struct Entry {
    int u, l, pos;
  };
  std::vector<Entry> entries;
  for (int a = 1; a <= s.k; ++a) {
    const int p = s.pos_j.at(a);
    for (int b = 1; b <= s.k; ++b) {
      if (s.pos_i.at(b) == p) {
        entries.push_back({s.pattern.rank_at(a), s.pattern.rank_at(b), p});
        break;
      }
    }
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) { return x.u < y.u; });
  std::vector<int> values;
  values.reserve(entries.size());
  for (std::size_t idx = 0; idx < entries.size(); ++idx) {
    const int expected = entries[idx].u + entries[idx].l - static_cast<int>(idx) - 1;
    const int actual = witness.at(entries[idx].pos);
    if (actual != expected)
      throw std::logic_error("overlap_values: witness value " + std::to_string(actual) + " at position " +
                             std::to_string(entries[idx].pos) + " deviates from the forced value " +
                             std::to_string(expected));
    values.push_back(actual);
  }
  return values;
}

// True iff every transposition of two witness values taken from different
// blocks (the forced overlap values split [m] into value blocks; each forced
// value is its own block) destroys the pattern at pos_j or at pos_i.
// Same-block swaps are outside the predicate.
inline bool swap_breaks_goodness(const OverlapScenario& s, const Permutation& witness) {
  const std::vector<int> forced = overlap_values(s, witness);  // also validates goodness
  std::vector<int> sorted_forced = forced;
  std::sort(sorted_forced.begin(), sorted_forced.end());
  const int m = s.universe();

  auto block_of = [&](int v) {
    // gap blocks get even ids, forced values odd ids
    int below = 0;
    for (const int f : sorted_forced) {
      if (v == f) return 2 * below + 1;
      if (v > f) ++below;
    }
    return 2 * below;
  };

  std::vector<int> pos_of(static_cast<std::size_t>(m) + 1, 0);
  for (int p = 1; p <= m; ++p) pos_of[static_cast<std::size_t>(witness.at(p))] = p;

  std::vector<int> vals(witness.values().begin(), witness.values().end());
  const std::uint64_t word = s.pattern.packed_word();
  std::vector<int> window(static_cast<std::size_t>(s.k));
  auto pattern_survives = [&](const IndexSet& at) {
    for (int t = 1; t <= s.k; ++t)
      window[static_cast<std::size_t>(t - 1)] = vals[static_cast<std::size_t>(at.at(t) - 1)];
    return permpat::detail::pattern_word_of_values(window.data(), s.k) == word;
  };

  for (int a = 1; a <= m; ++a) {
    for (int b = a + 1; b <= m; ++b) {
      if (block_of(a) == block_of(b)) continue;
      const int pa = pos_of[static_cast<std::size_t>(a)], pb = pos_of[static_cast<std::size_t>(b)];
      std::swap(vals[static_cast<std::size_t>(pa - 1)], vals[static_cast<std::size_t>(pb - 1)]);
      const bool both_survive = pattern_survives(s.pos_j) && pattern_survives(s.pos_i);
      std::swap(vals[static_cast<std::size_t>(pa - 1)], vals[static_cast<std::size_t>(pb - 1)]);
      if (both_survive) return false;
    }
  }
  return true;
}

// The coupling step: reorder the values on the j positions so the pattern
// appears there; everything off j is untouched.
inline Permutation couple_to_pattern(const Permutation& xi, const IndexSet& j, const PatternCode& l) {
  const int k = l.length();
  if (j.size() != k) throw std::invalid_argument("couple_to_pattern: index set size must equal pattern length");
  std::vector<int> vals(xi.values().begin(), xi.values().end());
  std::vector<int> on_j;
  on_j.reserve(static_cast<std::size_t>(k));
  for (int t = 1; t <= k; ++t) {
    const int p = j.at(t);
    if (p > xi.size()) throw std::invalid_argument("couple_to_pattern: position beyond permutation length");
    on_j.push_back(vals[static_cast<std::size_t>(p - 1)]);
  }
  std::sort(on_j.begin(), on_j.end());
  for (int t = 1; t <= k; ++t)
    vals[static_cast<std::size_t>(j.at(t) - 1)] = on_j[static_cast<std::size_t>(l.rank_at(t) - 1)];
  return Permutation::unchecked(std::move(vals));
}

// Indicator vectors (bit i = pattern occurs at the i-th k-subset in Gosper
// order) before and after coupling.
struct CouplingOutcome {
  Permutation xi;
  Permutation xi_prime;
  std::array<std::uint64_t, 2> indicators_before{};
  std::array<std::uint64_t, 2> indicators_after{};
};

namespace detail {

using IndicatorBits = std::array<std::uint64_t, 2>;

inline void set_bit(IndicatorBits& b, int i) { b[static_cast<std::size_t>(i) / 64] |= std::uint64_t{1} << (i % 64); }
inline bool get_bit(const IndicatorBits& b, int i) {
  return (b[static_cast<std::size_t>(i) / 64] >> (i % 64)) & 1;
}

inline IndicatorBits indicator_bits(const std::vector<int>& vals, int n, int k, std::uint64_t word) {
  IndicatorBits bits{};
  int index = 0;
  std::array<int, 16> window{};
  permpat::detail::for_each_subset_mask(n, k, [&](std::uint32_t mask) {
    int c = 0;
    for (std::uint32_t m = mask; m != 0; m &= m - 1)
      window[static_cast<std::size_t>(c++)] = vals[static_cast<std::size_t>(std::countr_zero(m))];
    if (permpat::detail::pattern_word_of_values(window.data(), k) == word) set_bit(bits, index);
    ++index;
  });
  return bits;
}

// Precomputed indicator vectors for every permutation of S_n and one pattern.
struct LawTable {
  int n = 0, k = 0;
  std::uint64_t word = 0;
  std::vector<std::uint32_t> subset_masks;  // Gosper order
  std::vector<IndicatorBits> ivec;          // indexed by permutation lex rank
};

inline LawTable build_law_table(int n, int k, const PatternCode& l) {
  LawTable t;
  t.n = n;
  t.k = k;
  t.word = l.packed_word();
  permpat::detail::for_each_subset_mask(n, k, [&](std::uint32_t m) { t.subset_masks.push_back(m); });
  const std::uint64_t total = permpat::detail::factorial_table()[static_cast<std::size_t>(n)];
  t.ivec.resize(total);
  std::uint64_t rank = 0;
  permpat::detail::for_each_permutation_block(n, 0, total, [&](const std::vector<int>& vals) {
    t.ivec[rank++] = indicator_bits(vals, n, k, t.word);
  });
  return t;
}

// Reduced classes for one (i, j) overlap: which patterns of the union
// universe are good, and which are friendly (agree with a good one off the
// j block and permute its j-block values).
struct FriendlyClass {
  int m = 0;
  std::vector<char> friendly_by_rank;  // indexed by lex rank of the reduced union pattern
};

inline FriendlyClass build_friendly_class(int k, std::uint32_t jmask, std::uint32_t imask,
                                          const PatternCode& l) {
  FriendlyClass fc;
  const std::uint32_t umask = jmask | imask;
  const int m = std::popcount(umask);
  fc.m = m;

  // local (0-based) indices of the j and i positions inside the union
  std::vector<int> jlocal, ilocal;
  int idx = 0;
  for (std::uint32_t mm = umask; mm != 0; mm &= mm - 1) {
    const int bit = std::countr_zero(mm);
    if (jmask >> bit & 1) jlocal.push_back(idx);
    if (imask >> bit & 1) ilocal.push_back(idx);
    ++idx;
  }

  const std::uint64_t word = l.packed_word();
  const std::uint64_t total = permpat::detail::factorial_table()[static_cast<std::size_t>(m)];
  fc.friendly_by_rank.assign(total, 0);
  std::vector<int> window(static_cast<std::size_t>(k));
  std::vector<int> scratch(static_cast<std::size_t>(m));
  permpat::detail::for_each_permutation_block(m, 0, total, [&](const std::vector<int>& gamma) {
    for (std::size_t t = 0; t < jlocal.size(); ++t)
      window[t] = gamma[static_cast<std::size_t>(jlocal[t])];
    if (permpat::detail::pattern_word_of_values(window.data(), k) != word) return;
    for (std::size_t t = 0; t < ilocal.size(); ++t)
      window[t] = gamma[static_cast<std::size_t>(ilocal[t])];
    if (permpat::detail::pattern_word_of_values(window.data(), k) != word) return;
    // gamma is good: every arrangement of its j-block values is friendly
    std::vector<int> jvals;
    for (const int t : jlocal) jvals.push_back(gamma[static_cast<std::size_t>(t)]);
    std::sort(jvals.begin(), jvals.end());
    do {
      scratch.assign(gamma.begin(), gamma.end());
      for (std::size_t t = 0; t < jlocal.size(); ++t)
        scratch[static_cast<std::size_t>(jlocal[t])] = jvals[t];
      fc.friendly_by_rank[permpat::detail::pattern_lex_rank_of_values(scratch.data(), m)] = 1;
    } while (std::next_permutation(jvals.begin(), jvals.end()));
  });
  return fc;
}

}  // namespace detail

inline CouplingOutcome coupling_outcome(const Permutation& xi, const IndexSet& j, const PatternCode& l) {
  CouplingOutcome out;
  out.xi = xi;
  out.xi_prime = couple_to_pattern(xi, j, l);
  const std::vector<int> before(xi.values().begin(), xi.values().end());
  const std::vector<int> after(out.xi_prime.values().begin(), out.xi_prime.values().end());
  out.indicators_before = detail::indicator_bits(before, xi.size(), l.length(), l.packed_word());
  out.indicators_after = detail::indicator_bits(after, xi.size(), l.length(), l.packed_word());
  return out;
}

struct CouplingAudit {
  int n = 0, k = 0;
  IndexSet j;
  PatternCode l;
  bool law_equal = false;
  long long distinct_outcomes = 0;
  BigRat conditional_outcome_probability;  // k!/n! per realized conditional outcome
  bool friendliness_ok = false;
  long long friendly_events = 0;  // {I_i = 0, coupled indicator = 1} events checked
  bool disjoint_untouched_ok = false;
};

namespace detail {

inline CouplingAudit audit_with_table(const LawTable& table, const IndexSet& j) {
  const int n = table.n;
  const int k = table.k;
  CouplingAudit audit;
  audit.n = n;
  audit.k = k;
  audit.j = j;

  const std::uint64_t jmask64 = j.mask();
  const auto jmask = static_cast<std::uint32_t>(jmask64);
  int j_bit = -1;
  for (std::size_t t = 0; t < table.subset_masks.size(); ++t)
    if (table.subset_masks[t] == jmask) j_bit = static_cast<int>(t);
  if (j_bit < 0) throw std::invalid_argument("coupling audit: index set does not match the subset universe");

  // Friendliness classes for the overlapping subsets.
  std::vector<std::pair<int, FriendlyClass>> overlapping;  // (bit, class)
  std::vector<int> disjoint_bits;
  PatternCode l;
  {
    // recover the pattern from the packed word
    std::vector<int> rr(static_cast<std::size_t>(k));
    for (int t = 0; t < k; ++t) rr[static_cast<std::size_t>(t)] = static_cast<int>(table.word >> (4 * t) & 0xF) + 1;
    l = PatternCode::from_ranks(rr);
  }
  audit.l = l;
  for (std::size_t t = 0; t < table.subset_masks.size(); ++t) {
    if (static_cast<int>(t) == j_bit) continue;
    const std::uint32_t imask = table.subset_masks[t];
    if ((imask & jmask) == 0) {
      disjoint_bits.push_back(static_cast<int>(t));
    } else {
      overlapping.emplace_back(static_cast<int>(t), build_friendly_class(k, jmask, imask, l));
    }
  }

  // Sweep all permutations once.
  const std::uint64_t total = permpat::detail::factorial_table()[static_cast<std::size_t>(n)];
  std::map<IndicatorBits, std::pair<long long, long long>> law;  // key -> (conditional count, coupled count)
  bool friendly_ok = true;
  bool disjoint_ok = true;
  long long friendly_events = 0;

  std::vector<int> coupled(static_cast<std::size_t>(n));
  std::vector<int> union_vals;
  std::uint64_t rank = 0;
  permpat::detail::for_each_permutation_block(n, 0, total, [&](const std::vector<int>& vals) {
    const IndicatorBits before = table.ivec[rank];
    ++rank;

    // coupling: reorder the j values into pattern order
    coupled.assign(vals.begin(), vals.end());
    std::array<int, 16> on_j{};
    for (int t = 1; t <= k; ++t) on_j[static_cast<std::size_t>(t - 1)] = vals[static_cast<std::size_t>(j.at(t) - 1)];
    std::sort(on_j.begin(), on_j.begin() + k);
    for (int t = 1; t <= k; ++t)
      coupled[static_cast<std::size_t>(j.at(t) - 1)] = on_j[static_cast<std::size_t>(l.rank_at(t) - 1)];
    const std::uint64_t coupled_rank = permpat::detail::pattern_lex_rank_of_values(coupled.data(), n);
    const IndicatorBits after = table.ivec[coupled_rank];

    auto& counts = law[after];
    ++counts.second;
    if (get_bit(before, j_bit)) law[before].first++;

    for (const auto& [bit, fc] : overlapping) {
      if (!get_bit(before, bit) && get_bit(after, bit)) {
        ++friendly_events;
        const std::uint32_t umask = table.subset_masks[static_cast<std::size_t>(bit)] | jmask;
        union_vals.clear();
        for (std::uint32_t mm = umask; mm != 0; mm &= mm - 1)
          union_vals.push_back(vals[static_cast<std::size_t>(std::countr_zero(mm))]);
        const std::uint64_t urank =
            permpat::detail::pattern_lex_rank_of_values(union_vals.data(), static_cast<int>(union_vals.size()));
        if (!fc.friendly_by_rank[urank]) friendly_ok = false;
      }
    }
    for (const int bit : disjoint_bits)
      if (get_bit(before, bit) != get_bit(after, bit)) disjoint_ok = false;
  });

  const BigInt kfact = factorial_big(k);
  bool law_equal = true;
  for (const auto& [key, counts] : law) {
    if (BigInt(counts.second) != BigInt(counts.first) * kfact) law_equal = false;
  }
  audit.law_equal = law_equal;
  audit.distinct_outcomes = static_cast<long long>(law.size());
  audit.conditional_outcome_probability = BigRat(kfact, factorial_big(n));
  audit.friendliness_ok = friendly_ok;
  audit.friendly_events = friendly_events;
  audit.disjoint_untouched_ok = disjoint_ok;
  return audit;
}

}  // namespace detail

// Full audit of the coupling at one (n, k, j, l): (a) the law of the coupled
// indicator vector equals the conditional law of the original vector given
// the pattern sits at j (exact integer-count comparison over every realized
// outcome), (b) every overlapping {I_i = 0 -> 1} event involves a friendly
// permutation, (c) disjoint subsets are untouched by the coupling.
inline CouplingAudit coupling_audit(int n, int k, const IndexSet& j, const PatternCode& l) {
  if (n > kMaxAuditN)
    throw resource_limit_error("coupling_audit: n exceeds the sweep cap of " + std::to_string(kMaxAuditN));
  if (k > kMaxAuditK)
    throw resource_limit_error("coupling_audit: k exceeds the friendliness cap of " +
                               std::to_string(kMaxAuditK));
  if (l.length() != k || j.size() != k) throw std::invalid_argument("coupling_audit: sizes must match k");
  if (k < 1 || k > n) throw std::invalid_argument("coupling_audit: need 1 <= k <= n");
  for (int t = 1; t <= k; ++t)
    if (j.at(t) > n) throw std::invalid_argument("coupling_audit: position beyond n");
  const detail::LawTable table = detail::build_law_table(n, k, l);
  return detail::audit_with_table(table, j);
}

// Restriction uniformity: over all patterns of length k, the reduction to a
// fixed index subset A (|A| = r) hits every pattern of length r exactly
// k!/r! times.
struct UniformityCheck {
  int k = 0;
  IndexSet positions;
  long long expected_per_pattern = 0;
  bool uniform = false;
  std::vector<long long> counts;  // indexed by lex rank of the reduced pattern
};

inline UniformityCheck subpattern_uniformity(int k, const IndexSet& A) {
  if (k > kMaxUniformityK)
    throw resource_limit_error("subpattern_uniformity: k exceeds the sweep cap of " +
                               std::to_string(kMaxUniformityK));
  const int r = A.size();
  if (r < 1 || r > k) throw std::invalid_argument("subpattern_uniformity: need 1 <= |A| <= k");
  for (int t = 1; t <= r; ++t)
    if (A.at(t) > k) throw std::invalid_argument("subpattern_uniformity: position beyond k");

  UniformityCheck u;
  u.k = k;
  u.positions = A;
  const auto& fact = permpat::detail::factorial_table();
  u.expected_per_pattern = static_cast<long long>(fact[static_cast<std::size_t>(k)] /
                                                  fact[static_cast<std::size_t>(r)]);
  u.counts.assign(fact[static_cast<std::size_t>(r)], 0);
  std::vector<int> window(static_cast<std::size_t>(r));
  permpat::detail::for_each_permutation_block(k, 0, fact[static_cast<std::size_t>(k)],
                                              [&](const std::vector<int>& l) {
                                                for (int t = 1; t <= r; ++t)
                                                  window[static_cast<std::size_t>(t - 1)] =
                                                      l[static_cast<std::size_t>(A.at(t) - 1)];
                                                ++u.counts[permpat::detail::pattern_lex_rank_of_values(
                                                    window.data(), r)];
                                              });
  u.uniform = std::all_of(u.counts.begin(), u.counts.end(),
                          [&](long long c) { return c == u.expected_per_pattern; });
  return u;
}

// Average occurrence count of each length-r pattern inside a uniform
// length-k pattern: exactly C(k,r)/r! for every target.
struct AverageOccurrenceRow {
  PatternCode t;
  BigRat average;
  BigRat expected;
  bool matches = false;
};

inline std::vector<AverageOccurrenceRow> expected_occurrences_check(int k, int r) {
  if (k > kMaxAverageK)
    throw resource_limit_error("expected_occurrences_check: k exceeds the sweep cap of " +
                               std::to_string(kMaxAverageK));
  if (r < 1 || r > k) throw std::invalid_argument("expected_occurrences_check: need 1 <= r <= k");
  const auto& fact = permpat::detail::factorial_table();
  std::vector<long long> tally(fact[static_cast<std::size_t>(r)], 0);
  std::vector<int> window(static_cast<std::size_t>(r));
  permpat::detail::for_each_permutation_block(
      k, 0, fact[static_cast<std::size_t>(k)], [&](const std::vector<int>& l) {
        permpat::detail::for_each_subset_mask(k, r, [&](std::uint32_t mask) {
          int c = 0;
          for (std::uint32_t m = mask; m != 0; m &= m - 1)
            window[static_cast<std::size_t>(c++)] = l[static_cast<std::size_t>(std::countr_zero(m))];
          ++tally[permpat::detail::pattern_lex_rank_of_values(window.data(), r)];
        });
      });
  const BigRat expected(binomial_big(k, r), factorial_big(r));
  std::vector<AverageOccurrenceRow> rows;
  for (std::uint64_t t = 0; t < fact[static_cast<std::size_t>(r)]; ++t) {
    AverageOccurrenceRow row;
    row.t = pattern_at(r, t);
    row.average = BigRat(BigInt(tally[t]), factorial_big(k));
    row.expected = expected;
    row.matches = row.average == row.expected;
    rows.push_back(row);
  }
  return rows;
}

// -------- sweep drivers (the `verify` surface) --------

struct SweepResult {
  std::string suite;
  long long checks = 0;
  long long failures = 0;
  std::vector<std::string> failure_notes;  // capped at 20
  std::map<std::string, long long> stats;

  void fail(const std::string& note) {
    ++failures;
    if (failure_notes.size() < 20) failure_notes.push_back(note);
  }
};

// All overlap scenarios with universe size <= max_m, all patterns: the good
// count never exceeds 2^(2k-2r), every witness carries the forced overlap
// values, and the fixed large example behaves as documented.
inline SweepResult allotment_sweep(int max_m) {
  if (max_m > kMaxScenarioM)
    throw resource_limit_error("allotment_sweep: max_m exceeds the enumeration cap of " +
                               std::to_string(kMaxScenarioM));
  SweepResult res;
  res.suite = "allotment";
  const auto& fact = permpat::detail::factorial_table();

  for (int m = 1; m <= max_m; ++m) {
    for (int k = (m + 2) / 2; k <= m; ++k) {
      const int r = 2 * k - m;
      if (r < 1 || r > k) continue;
      const long long bound = 1LL << (2 * k - 2 * r);

      // Enumerate position-set pairs: pos_j of size k, pos_i = complement
      // plus a size-r slice of pos_j.
      std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
      permpat::detail::for_each_subset_mask(m, k, [&](std::uint32_t jmask) {
        std::vector<int> jbits;
        for (std::uint32_t mm = jmask; mm != 0; mm &= mm - 1) jbits.push_back(std::countr_zero(mm));
        permpat::detail::for_each_subset_mask(k, r, [&](std::uint32_t pick) {
          std::uint32_t shared = 0;
          for (std::uint32_t mm = pick; mm != 0; mm &= mm - 1)
            shared |= std::uint32_t{1} << jbits[static_cast<std::size_t>(std::countr_zero(mm))];
          const std::uint32_t imask = (~jmask & ((std::uint32_t{1} << m) - 1)) | shared;
          pairs.emplace_back(jmask, imask);
        });
      });

      std::vector<std::vector<long long>> counts(pairs.size(),
                                                 std::vector<long long>(fact[static_cast<std::size_t>(k)], 0));
      std::vector<int> window(static_cast<std::size_t>(k));

      permpat::detail::for_each_permutation_block(
          m, 0, fact[static_cast<std::size_t>(m)], [&](const std::vector<int>& sigma) {
            for (std::size_t p = 0; p < pairs.size(); ++p) {
              const auto [jmask, imask] = pairs[p];
              int c = 0;
              for (std::uint32_t mm = jmask; mm != 0; mm &= mm - 1)
                window[static_cast<std::size_t>(c++)] = sigma[static_cast<std::size_t>(std::countr_zero(mm))];
              const std::uint64_t wj = permpat::detail::pattern_word_of_values(window.data(), k);
              c = 0;
              for (std::uint32_t mm = imask; mm != 0; mm &= mm - 1)
                window[static_cast<std::size_t>(c++)] = sigma[static_cast<std::size_t>(std::countr_zero(mm))];
              const std::uint64_t wi = permpat::detail::pattern_word_of_values(window.data(), k);
              if (wj != wi) continue;
              ++counts[p][permpat::detail::pattern_lex_rank_of_values(window.data(), k)];

              // forced-value check for this witness
              const OverlapScenario scen{k, IndexSet::from_mask(jmask), IndexSet::from_mask(imask),
                                         reduce(std::span<const int>(window.data(), static_cast<std::size_t>(k)))};
              ++res.checks;
              try {
                overlap_values(scen, Permutation::unchecked(sigma));
              } catch (const std::logic_error& err) {
                res.fail(std::string("overlap values: ") + err.what());
              }
            }
          });

      long long max_count = 0;
      for (std::size_t p = 0; p < pairs.size(); ++p) {
        for (std::uint64_t t = 0; t < fact[static_cast<std::size_t>(k)]; ++t) {
          ++res.checks;
          max_count = std::max(max_count, counts[p][t]);
          if (counts[p][t] > bound)
            res.fail("good count " + std::to_string(counts[p][t]) + " exceeds bound " + std::to_string(bound) +
                     " at m=" + std::to_string(m) + " k=" + std::to_string(k));
        }
      }
      res.stats["max_good_count_m" + std::to_string(m) + "_k" + std::to_string(k)] = max_count;
    }
  }

  // Fixed large example: a good permutation of [15] carrying one pattern of
  // length 9 at two overlapping index sets, its forced overlap values, and
  // the cross-block swap property.
  {
    const Permutation witness =
        Permutation::from_values({7, 14, 6, 15, 5, 3, 4, 10, 9, 2, 11, 8, 1, 12, 13});
    const PatternCode pattern = parse_pattern("493265178");
    const IndexSet x = IndexSet::of({1, 2, 3, 6, 8, 9, 10, 11, 15});
    const IndexSet o = IndexSet::of({3, 4, 5, 7, 9, 12, 13, 14, 15});
    const OverlapScenario scen{9, x, o, pattern};
    ++res.checks;
    if (!occurs_at(witness, pattern, x) || !occurs_at(witness, pattern, o))
      res.fail("large fixture: pattern missing at an index set");
    ++res.checks;
    try {
      overlap_values(scen, witness);
    } catch (const std::logic_error& err) {
      res.fail(std::string("large fixture overlap values: ") + err.what());
    }
    ++res.checks;
    if (!swap_breaks_goodness(scen, witness)) res.fail("large fixture: a cross-block swap left both patterns intact");
  }
  return res;
}

// Coupling audits across every (n <= max_n, k <= max_k, j, l).
inline SweepResult coupling_sweep(int max_n, int max_k) {
  if (max_n > kMaxAuditN)
    throw resource_limit_error("coupling_sweep: max_n exceeds the sweep cap of " + std::to_string(kMaxAuditN));
  if (max_k > kMaxAuditK)
    throw resource_limit_error("coupling_sweep: max_k exceeds the friendliness cap of " +
                               std::to_string(kMaxAuditK));
  SweepResult res;
  res.suite = "coupling";
  long long friendly_events = 0;
  for (int n = 1; n <= max_n; ++n) {
    for (int k = 1; k <= std::min(max_k, n); ++k) {
      const auto& fact = permpat::detail::factorial_table();
      for (std::uint64_t li = 0; li < fact[static_cast<std::size_t>(k)]; ++li) {
        const PatternCode l = pattern_at(k, li);
        const detail::LawTable table = detail::build_law_table(n, k, l);
        permpat::detail::for_each_subset_mask(n, k, [&](std::uint32_t jmask) {
          const CouplingAudit audit = detail::audit_with_table(table, IndexSet::from_mask(jmask));
          ++res.checks;
          if (!audit.law_equal)
            res.fail("law mismatch at n=" + std::to_string(n) + " k=" + std::to_string(k) +
                     " l=" + l.to_string());
          ++res.checks;
          if (!audit.friendliness_ok)
            res.fail("unfriendly coupling event at n=" + std::to_string(n) + " k=" + std::to_string(k));
          ++res.checks;
          if (!audit.disjoint_untouched_ok)
            res.fail("disjoint subset touched at n=" + std::to_string(n) + " k=" + std::to_string(k));
          friendly_events += audit.friendly_events;
        });
      }
    }
  }
  res.stats["friendly_events"] = friendly_events;
  return res;
}

// Restriction uniformity and average occurrence counts for all k <= max_k.
inline SweepResult restriction_sweep(int max_k) {
  SweepResult res;
  res.suite = "restriction";
  for (int k = 1; k <= std::min(max_k, kMaxUniformityK); ++k) {
    for (std::uint32_t amask = 1; amask < (std::uint32_t{1} << k); ++amask) {
      const UniformityCheck u = subpattern_uniformity(k, IndexSet::from_mask(amask));
      ++res.checks;
      if (!u.uniform)
        res.fail("nonuniform restriction at k=" + std::to_string(k) + " mask=" + std::to_string(amask));
    }
  }
  for (int k = 1; k <= std::min(max_k, kMaxAverageK); ++k) {
    for (int r = 1; r <= k; ++r) {
      const auto rows = expected_occurrences_check(k, r);
      for (const auto& row : rows) {
        ++res.checks;
        if (!row.matches)
          res.fail("average occurrence mismatch at k=" + std::to_string(k) + " r=" + std::to_string(r) +
                   " t=" + row.t.to_string());
      }
    }
  }
  return res;
}

}  // namespace permpat::oracles
