#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>
#include <vector>

#include <permpat/core.hpp>
#include <permpat/rational.hpp>

using permpat::IndexSet;
using permpat::parse_pattern;
using permpat::PatternCode;
using permpat::Permutation;

TEST_CASE("reduce replaces entries by their ranks") {
  const std::vector<int> window{7, 14, 6, 3, 10, 9, 2, 11, 13};
  CHECK(permpat::reduce(window) == parse_pattern("493265178"));
  CHECK(permpat::reduce(std::vector<int>{1, 2, 3}) == parse_pattern("123"));
  CHECK(permpat::reduce(std::vector<int>{5, 3, 9}) == parse_pattern("213"));
  CHECK(permpat::reduce(std::vector<int>{}) == PatternCode{});
}

TEST_CASE("reduce rejects duplicate entries") {
  CHECK_THROWS_AS(permpat::reduce(std::vector<int>{4, 4, 1}), std::invalid_argument);
  std::vector<int> wide(20);
  for (int i = 0; i < 20; ++i) wide[static_cast<std::size_t>(i)] = i;
  wide[19] = 5;
  CHECK_THROWS_AS(permpat::reduce(wide), std::invalid_argument);
}

TEST_CASE("reduce round-trips every code up to length 8") {
  for (int k = 0; k <= 8; ++k) {
    const auto total = permpat::factorial_u64(k);
    for (std::uint64_t i = 0; i < total; ++i) {
      const PatternCode c = permpat::pattern_at(k, i);
      CHECK(permpat::reduce(c.ranks()) == c);
      CHECK(permpat::pattern_lex_index(c) == i);
    }
  }
}

TEST_CASE("pattern codes are canonical and ordered") {
  const PatternCode a = parse_pattern("312");
  const PatternCode b = permpat::reduce(std::vector<int>{9, 1, 4});
  CHECK(a == b);
  CHECK(a.hash() == b.hash());
  CHECK(parse_pattern("123") < parse_pattern("132"));
  CHECK(parse_pattern("21") < parse_pattern("123"));

  // long-pattern fallback
  std::vector<int> long_ranks(20);
  for (int i = 0; i < 20; ++i) long_ranks[static_cast<std::size_t>(i)] = 20 - i;
  const PatternCode wide = PatternCode::from_ranks(long_ranks);
  CHECK(wide.length() == 20);
  CHECK(permpat::reduce(wide.ranks()) == wide);
}

TEST_CASE("contains matches the fixed examples") {
  const Permutation pi = Permutation::parse("34152");
  CHECK(permpat::contains(pi, parse_pattern("312")));
  CHECK_FALSE(permpat::contains(pi, parse_pattern("321")));
  CHECK(permpat::contains(pi, permpat::reduce(pi.values())));
  CHECK(permpat::contains(pi, PatternCode{}));
  CHECK_FALSE(permpat::contains(pi, parse_pattern("123456")));  // longer than n
}

TEST_CASE("contains agrees with exhaustive occurrence search on S_6") {
  for (std::uint64_t pidx = 0; pidx < permpat::factorial_u64(6); ++pidx) {
    const Permutation pi = Permutation::unchecked(permpat::detail::nth_permutation(6, pidx));
    for (int k = 1; k <= 4; ++k) {  // k = 5, 6 are covered below on a subset

      for (std::uint64_t li = 0; li < permpat::factorial_u64(k); ++li) {
        const PatternCode mu = permpat::pattern_at(k, li);
        bool any = false;
        permpat::detail::for_each_subset_mask(6, k, [&](std::uint32_t mask) {
          if (!any && permpat::occurs_at(pi, mu, IndexSet::from_mask(mask))) any = true;
        });
        REQUIRE(permpat::contains(pi, mu) == any);
      }
    }
  }
}

TEST_CASE("contains handles patterns as long as the permutation") {
  for (std::uint64_t pidx = 0; pidx < permpat::factorial_u64(6); pidx += 5) {
    const Permutation pi = Permutation::unchecked(permpat::detail::nth_permutation(6, pidx));
    for (int k = 5; k <= 6; ++k) {
      for (std::uint64_t li = 0; li < permpat::factorial_u64(k); li += 3) {
        const PatternCode mu = permpat::pattern_at(k, li);
        bool any = false;
        permpat::detail::for_each_subset_mask(6, k, [&](std::uint32_t mask) {
          if (!any && permpat::occurs_at(pi, mu, IndexSet::from_mask(mask))) any = true;
        });
        REQUIRE(permpat::contains(pi, mu) == any);
      }
    }
  }
}

TEST_CASE("containment is invariant under complement on S_6 spot checks") {
  const std::vector<PatternCode> mus = {parse_pattern("132"), parse_pattern("3142"), parse_pattern("21")};
  for (std::uint64_t pidx = 0; pidx < permpat::factorial_u64(6); pidx += 7) {
    const Permutation pi = Permutation::unchecked(permpat::detail::nth_permutation(6, pidx));
    for (const auto& mu : mus)
      CHECK(permpat::contains(pi, mu) == permpat::contains(permpat::complement(pi), permpat::complement(mu)));
  }
}

TEST_CASE("count_occurrences counts position subsets") {
  CHECK(permpat::count_occurrences(parse_pattern("34152"), parse_pattern("12")) == 5);
  for (const char* s : {"1234", "4321", "2413"}) {
    const PatternCode l = parse_pattern(s);
    CHECK(permpat::count_occurrences(l, parse_pattern("1")) == l.length());
  }
  // average over all patterns of length 3 of the ascending-pair count
  long long total = 0;
  for (std::uint64_t li = 0; li < 6; ++li)
    total += permpat::count_occurrences(permpat::pattern_at(3, li), parse_pattern("12"));
  CHECK(permpat::BigRat(total, 6) == permpat::BigRat(3, 2));
}

TEST_CASE("count_occurrences never exceeds the position-subset count") {
  for (std::uint64_t li = 0; li < permpat::factorial_u64(5); li += 11) {
    const PatternCode l = permpat::pattern_at(5, li);
    for (int r = 1; r <= 5; ++r) {
      for (std::uint64_t ti = 0; ti < permpat::factorial_u64(r); ++ti) {
        const auto needle = permpat::pattern_at(r, ti);
        CHECK(permpat::count_occurrences(l, needle) <= permpat::binomial_big(5, r));
      }
    }
  }
}

TEST_CASE("occurs_at checks the fixed index sets of the long example") {
  const Permutation pi = Permutation::parse("7 14 6 15 5 3 4 10 9 2 11 8 1 12 13");
  const PatternCode mu = parse_pattern("493265178");
  CHECK(permpat::occurs_at(pi, mu, IndexSet::of({1, 2, 3, 6, 8, 9, 10, 11, 15})));
  CHECK(permpat::occurs_at(pi, mu, IndexSet::of({3, 4, 5, 7, 9, 12, 13, 14, 15})));
  CHECK_FALSE(permpat::occurs_at(Permutation::identity(5), parse_pattern("21"), IndexSet::of({1, 2})));
  CHECK_THROWS_AS(permpat::occurs_at(pi, mu, IndexSet::of({1, 2})), std::invalid_argument);
}

TEST_CASE("permutation validation and parsing") {
  CHECK(Permutation::parse("3 4 1 5 2") == Permutation::parse("34152"));
  CHECK(Permutation::parse("3,4,1,5,2") == Permutation::parse("34152"));
  CHECK(Permutation::parse("10 2 3 4 5 6 7 8 9 1").size() == 10);
  CHECK_THROWS_AS(Permutation::from_values({1, 1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(Permutation::from_values({0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(Permutation::parse("123x"), std::invalid_argument);
  CHECK(Permutation::identity(0).size() == 0);
}

TEST_CASE("index sets validate ordering") {
  CHECK_THROWS_AS(IndexSet::of({2, 2}), std::invalid_argument);
  CHECK_THROWS_AS(IndexSet::of({3, 1}), std::invalid_argument);
  CHECK(IndexSet::from_mask(0b10110).positions().size() == 3);
  CHECK(IndexSet::from_mask(0b10110) == IndexSet::of({2, 3, 5}));
}

TEST_CASE("pattern indexing is the lexicographic order of rank sequences") {
  std::vector<PatternCode> all;
  for (std::uint64_t i = 0; i < 24; ++i) all.push_back(permpat::pattern_at(4, i));
  CHECK(std::is_sorted(all.begin(), all.end()));
  CHECK(all.front() == parse_pattern("1234"));
  CHECK(all.back() == parse_pattern("4321"));
  CHECK(std::set<PatternCode>(all.begin(), all.end()).size() == 24);
}
