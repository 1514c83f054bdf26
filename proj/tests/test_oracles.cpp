#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include <permpat/oracles.hpp>

using permpat::IndexSet;
using permpat::parse_pattern;
using permpat::PatternCode;
using permpat::Permutation;
namespace orc = permpat::oracles;

namespace {

orc::OverlapScenario tiny_scenario() {
  return {2, IndexSet::of({1, 2}), IndexSet::of({2, 3}), parse_pattern("12")};
}

orc::OverlapScenario large_scenario() {
  return {9, IndexSet::of({1, 2, 3, 6, 8, 9, 10, 11, 15}), IndexSet::of({3, 4, 5, 7, 9, 12, 13, 14, 15}),
          parse_pattern("493265178")};
}

const Permutation kLargeWitness = Permutation::from_values({7, 14, 6, 15, 5, 3, 4, 10, 9, 2, 11, 8, 1, 12, 13});

}  // namespace

TEST_CASE("good count of the smallest overlap scenario") {
  const auto g = orc::good_count(tiny_scenario());
  CHECK(g.count == 1);
  CHECK(g.bound == 4);
  REQUIRE(g.witnesses.size() == 1);
  CHECK(g.witnesses.front() == Permutation::parse("123"));
}

TEST_CASE("non-isomorphic overlap restrictions admit no good permutation") {
  const orc::OverlapScenario s{3, IndexSet::of({1, 2, 3}), IndexSet::of({2, 3, 4}), parse_pattern("132")};
  // overlap ranks inside pos_j descend (3,2) while inside pos_i they ascend (1,3)
  const auto g = orc::good_count(s);
  CHECK(g.count == 0);
}

TEST_CASE("good counts stay within the bound for every length-3 low-overlap scenario") {
  // k = 3, r = 1, universe [5]: every position pair, every pattern
  long long max_count = 0;
  permpat::detail::for_each_subset_mask(5, 3, [&](std::uint32_t jmask) {
    std::vector<int> jbits;
    for (std::uint32_t mm = jmask; mm != 0; mm &= mm - 1) jbits.push_back(std::countr_zero(mm));
    for (const int keep : jbits) {
      const std::uint32_t imask = (~jmask & 0x1Fu) | (std::uint32_t{1} << keep);
      for (std::uint64_t li = 0; li < 6; ++li) {
        const orc::OverlapScenario s{3, IndexSet::from_mask(jmask), IndexSet::from_mask(imask),
                                     permpat::pattern_at(3, li)};
        const auto g = orc::good_count(s);
        REQUIRE(g.count <= 16);
        max_count = std::max(max_count, g.count);
      }
    }
  });
  CHECK(max_count > 0);
}

TEST_CASE("overlap values match the forced formula") {
  const auto tiny = orc::good_count(tiny_scenario());
  CHECK(orc::overlap_values(tiny_scenario(), tiny.witnesses.front()) == std::vector<int>{2});

  CHECK(orc::overlap_values(large_scenario(), kLargeWitness) == std::vector<int>{6, 9, 13});

  // degenerate full overlap: both index sets coincide
  const orc::OverlapScenario deg{2, IndexSet::of({1, 2}), IndexSet::of({1, 2}), parse_pattern("21")};
  CHECK(orc::overlap_values(deg, Permutation::parse("21")) == std::vector<int>{1, 2});

  CHECK_THROWS_AS(orc::overlap_values(large_scenario(), Permutation::identity(15)), std::logic_error);
}

TEST_CASE("swapping the fixed large witness across blocks breaks a pattern") {
  // the documented swap of values 8 and 11
  std::vector<int> swapped{7, 14, 6, 15, 5, 3, 4, 10, 9, 2, 8, 11, 1, 12, 13};
  const Permutation sw = Permutation::from_values(swapped);
  const auto s = large_scenario();
  CHECK(permpat::reduce(sw, s.pos_j) == parse_pattern("493276158"));
  CHECK(permpat::reduce(sw, s.pos_i) == parse_pattern("493256178"));
  CHECK(permpat::reduce(sw, s.pos_j) != s.pattern);
  CHECK(permpat::reduce(sw, s.pos_i) != s.pattern);

  CHECK(orc::swap_breaks_goodness(s, kLargeWitness));
}

TEST_CASE("swap predicate on the smallest scenario") {
  const auto g = orc::good_count(tiny_scenario());
  CHECK(orc::swap_breaks_goodness(tiny_scenario(), g.witnesses.front()));
}

TEST_CASE("swap predicate holds for every witness of every small scenario") {
  for (int m = 2; m <= 5; ++m) {
    for (int k = (m + 2) / 2; k <= m; ++k) {
      const int r = 2 * k - m;
      if (r < 1) continue;
      permpat::detail::for_each_subset_mask(m, k, [&](std::uint32_t jmask) {
        std::vector<int> jbits;
        for (std::uint32_t mm = jmask; mm != 0; mm &= mm - 1) jbits.push_back(std::countr_zero(mm));
        permpat::detail::for_each_subset_mask(k, r, [&](std::uint32_t pick) {
          std::uint32_t shared = 0;
          for (std::uint32_t mm = pick; mm != 0; mm &= mm - 1)
            shared |= std::uint32_t{1} << jbits[static_cast<std::size_t>(std::countr_zero(mm))];
          const std::uint32_t imask = (~jmask & ((std::uint32_t{1} << m) - 1)) | shared;
          for (std::uint64_t li = 0; li < permpat::factorial_u64(k); ++li) {
            const orc::OverlapScenario s{k, IndexSet::from_mask(jmask), IndexSet::from_mask(imask),
                                         permpat::pattern_at(k, li)};
            const auto g = orc::good_count(s);
            for (const auto& w : g.witnesses) REQUIRE(orc::swap_breaks_goodness(s, w));
          }
        });
      });
    }
  }
}

TEST_CASE("coupling realizes the pattern and matches the documented example") {
  const Permutation xi = Permutation::from_values({11, 9, 12, 15, 5, 2, 4, 7, 6, 3, 14, 8, 1, 10, 13});
  const auto s = large_scenario();
  const Permutation expected = Permutation::from_values({7, 14, 6, 15, 5, 3, 4, 11, 9, 2, 12, 8, 1, 10, 13});

  CHECK_FALSE(permpat::occurs_at(xi, s.pattern, s.pos_i));  // pattern absent before
  const Permutation xi_prime = orc::couple_to_pattern(xi, s.pos_j, s.pattern);
  CHECK(xi_prime == expected);
  CHECK(permpat::occurs_at(xi_prime, s.pattern, s.pos_j));
  CHECK(permpat::occurs_at(xi_prime, s.pattern, s.pos_i));  // created by the coupling
}

TEST_CASE("coupling outcome indicators") {
  const Permutation xi = Permutation::parse("35142");
  const IndexSet j = IndexSet::of({1, 2});
  const auto out = orc::coupling_outcome(xi, j, parse_pattern("21"));
  CHECK(permpat::occurs_at(out.xi_prime, parse_pattern("21"), j));
  CHECK(out.xi == xi);
}

TEST_CASE("coupling audit at the documented small case") {
  const auto audit = orc::coupling_audit(5, 2, IndexSet::of({1, 2}), parse_pattern("12"));
  CHECK(audit.law_equal);
  CHECK(audit.friendliness_ok);
  CHECK(audit.disjoint_untouched_ok);
  CHECK(audit.conditional_outcome_probability == permpat::BigRat(2, 120));
}

TEST_CASE("coupling audit across all anchors at n = 6, k = 3") {
  permpat::detail::for_each_subset_mask(6, 3, [&](std::uint32_t jmask) {
    const auto audit = orc::coupling_audit(6, 3, IndexSet::from_mask(jmask), parse_pattern("123"));
    REQUIRE(audit.law_equal);
    REQUIRE(audit.friendliness_ok);
    REQUIRE(audit.disjoint_untouched_ok);
  });
}

TEST_CASE("audit caps are loud") {
  CHECK_THROWS_AS(orc::coupling_audit(9, 2, IndexSet::of({1, 2}), parse_pattern("12")),
                  permpat::resource_limit_error);
  CHECK_THROWS_AS(orc::coupling_audit(8, 5, IndexSet::of({1, 2, 3, 4, 5}), parse_pattern("12345")),
                  permpat::resource_limit_error);
}

TEST_CASE("restriction uniformity") {
  const auto u = orc::subpattern_uniformity(4, IndexSet::of({1, 3}));
  CHECK(u.uniform);
  CHECK(u.expected_per_pattern == 12);
  CHECK(u.counts == std::vector<long long>{12, 12});

  CHECK(orc::subpattern_uniformity(5, IndexSet::of({2})).uniform);            // r = 1
  CHECK(orc::subpattern_uniformity(4, IndexSet::of({1, 2, 3, 4})).uniform);   // r = k
}

TEST_CASE("average occurrence counts") {
  const auto rows32 = orc::expected_occurrences_check(3, 2);
  REQUIRE(rows32.size() == 2);
  for (const auto& row : rows32) {
    CHECK(row.average == permpat::BigRat(3, 2));
    CHECK(row.matches);
  }
  const auto rows42 = orc::expected_occurrences_check(4, 2);
  for (const auto& row : rows42) CHECK(row.average == permpat::BigRat(3));
  const auto rowskk = orc::expected_occurrences_check(4, 4);
  for (const auto& row : rowskk) CHECK(row.average == permpat::BigRat(1, 24));
}

TEST_CASE("sweep drivers are clean at unit scale") {
  const auto allotment = orc::allotment_sweep(6);
  CHECK(allotment.failures == 0);
  CHECK(allotment.checks > 0);

  const auto coupling = orc::coupling_sweep(6, 3);
  CHECK(coupling.failures == 0);
  CHECK(coupling.stats.at("friendly_events") > 0);

  const auto restriction = orc::restriction_sweep(6);
  CHECK(restriction.failures == 0);
}

TEST_CASE("scenario validation") {
  CHECK_THROWS_AS((orc::OverlapScenario{2, IndexSet::of({1, 2}), IndexSet::of({3, 4}), parse_pattern("12")})
                      .validate(),
                  std::invalid_argument);  // disjoint sets
  CHECK_THROWS_AS((orc::OverlapScenario{2, IndexSet::of({1, 2}), IndexSet::of({2, 4}), parse_pattern("12")})
                      .validate(),
                  std::invalid_argument);  // union is not an initial segment
}
