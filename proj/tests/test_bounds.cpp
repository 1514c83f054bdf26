#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <permpat/bounds.hpp>

using permpat::BigInt;
using permpat::BigRat;
namespace bd = permpat::bounds;

// Frozen fixture value; see the threshold test below.
#define PERMPAT_FROZEN_POSITIVITY_N0 155

TEST_CASE("overlap kernel values and ratio rule") {
  CHECK(bd::overlap_kernel(3, 1) == BigRat(16, 120));
  for (int k = 2; k <= 30; ++k) {
    for (int r = 1; r < k; ++r) {
      // kernel(k, r+1)/kernel(k, r) == (2k - r) / (4(r+1)), exactly
      CHECK(bd::overlap_kernel(k, r + 1) * BigRat(4 * (r + 1)) ==
            bd::overlap_kernel(k, r) * BigRat(2 * k - r));
    }
  }
}

TEST_CASE("kernel argmax follows the ratio-rule prediction for k up to 50") {
  for (int k = 3; k <= 50; ++k) {
    const auto table = bd::overlap_kernel_table(k);
    CHECK(table.argmax_r == bd::overlap_kernel_argmax_prediction(k));
  }
  // stepping up from the floor of (2k-4)/5 strictly improves off the boundary
  CHECK(bd::overlap_kernel_table(10).argmax_r == 4);
  CHECK(bd::overlap_kernel_table(14).argmax_r == 5);
  // at the boundary (k = 2 mod 5) the two neighbours tie
  CHECK(bd::overlap_kernel(7, 2) == bd::overlap_kernel(7, 3));
  CHECK(bd::overlap_kernel_table(7).argmax_r == 2);
}

TEST_CASE("kernel log form agrees with the exact form") {
  for (int k = 2; k <= 40; k += 3) {
    for (int r = 1; r < k; r += 2) {
      const double exact = permpat::to_double(bd::overlap_kernel(k, r));
      if (exact > 0) CHECK(std::exp(bd::overlap_kernel_log(k, r)) == Catch::Approx(exact).epsilon(1e-9));
    }
  }
}

TEST_CASE("per-length lower bound sign structure") {
  for (int n : {20, 50, 100}) {
    for (int k = 1; k <= n; k += 7) {
      CHECK(bd::per_length_lower_bound(n, k) <=
            std::exp(bd::log_binomial(n, k)) * (1 + 1e-12));
    }
  }
  const int n = 400;
  CHECK(bd::per_length_lower_bound(n, 20) < 0);   // k near sqrt(n): error dominates
  CHECK(bd::per_length_lower_bound(n, 200) > 0);  // k at n/2: binomial dominates
}

TEST_CASE("exact and log-space evaluations agree on the shared range") {
  for (int n = 8; n <= 64; n += 8) {
    for (int k = 1; k <= n; k += 3) {
      const double exact = permpat::to_double(bd::per_length_lower_bound_exact(n, k));
      const double logspace = bd::per_length_lower_bound(n, k);
      if (std::abs(exact) > 1e-300)
        CHECK(logspace == Catch::Approx(exact).epsilon(1e-9));
    }
    CHECK(bd::tail_log2(n, n / 2) ==
          Catch::Approx(std::log2(permpat::to_double(bd::tail_exact(n, n / 2)))).epsilon(1e-9));
  }
}

TEST_CASE("error envelope: maximizer and closed form") {
  // derivative-zero condition 3 ln k* = ln(A n^2 / e^3), A = 1.57 e^3
  for (int n : {1000, 100000}) {
    const auto m = bd::error_envelope_max(n);
    const double lhs = 3.0 * std::log(m.k_star);
    const double rhs = std::log(1.57) + 2.0 * std::log(static_cast<double>(n));
    CHECK(lhs == Catch::Approx(rhs).epsilon(1e-9));
    // termwise identity: envelope == 3.5 * 1.57^k * (n e / k)^(2k) * (e/k)^k in logs
    for (double k : {m.k_star / 2, m.k_star, 2 * m.k_star}) {
      const double direct = std::log(3.5) + k * std::log(1.57) + 2 * k * (std::log(static_cast<double>(n)) + 1 - std::log(k)) +
                            k * (1 - std::log(k));
      CHECK(bd::error_envelope_log2(n, k) * bd::kLn2 == Catch::Approx(direct).epsilon(1e-9));
    }
  }
  const auto m6 = bd::error_envelope_max(1000000);
  CHECK(m6.log2_value / 10000.0 == Catch::Approx(5.02).epsilon(0.01));
}

TEST_CASE("discrete envelope argmax sits within one of the continuous maximizer") {
  for (int n : {1000, 10000, 100000}) {
    const auto m = bd::error_envelope_max(n);
    const long long argmax = bd::error_envelope_argmax(n);
    CHECK(std::abs(static_cast<double>(argmax) - m.k_star) <= 1.0);
  }
}

TEST_CASE("binomial tails") {
  CHECK(bd::tail_exact(10, 0) == BigInt(1024));
  CHECK(bd::tail_exact(10, 5) == BigInt(638));
  CHECK(bd::tail_exact(10, 11) == 0);
  for (int n = 1; n <= 64; ++n) {
    REQUIRE(bd::tail_exact(n, n / 2) >= permpat::pow2_big(n - 1));
  }
  for (int n : {100, 1000, 10000, 100000, 1000000}) {
    REQUIRE(bd::tail_log2(n, n / 2) >= static_cast<double>(n - 1) * (1.0 - 1e-9));
  }
  CHECK(bd::tail_log2(20, 0) == Catch::Approx(20.0).epsilon(1e-12));
}

TEST_CASE("tail split bookkeeping") {
  const auto s = bd::tail_split(1000, 500);
  CHECK(s.delta >= 0.499);
  CHECK(s.delta + s.epsilon == s.tail_ratio);  // by construction
  CHECK(bd::envelope_mass_ratio(27) > 1.0);    // vacuous at small n, reported not asserted
  const auto s27 = bd::tail_split(27, 13);
  CHECK(s27.delta < 0);
}

TEST_CASE("headline bound ratio and positivity threshold") {
  const int n0 = bd::positivity_threshold();
  CHECK(n0 == PERMPAT_FROZEN_POSITIVITY_N0);
  CHECK(bd::expected_total_lower_bound_ratio(n0) > 0);
  CHECK(bd::expected_total_lower_bound_ratio(n0 - 1) <= 0);
  // monotone approach to 1 along a scan
  double prev = bd::expected_total_lower_bound_ratio(n0);
  for (int n = n0 + 10; n <= 4000; n += 200) {
    const double r = bd::expected_total_lower_bound_ratio(n);
    CHECK(r >= prev);
    prev = r;
  }
  const double r6 = bd::expected_total_lower_bound_ratio(1000000);
  CHECK(r6 >= 1.0 - 1e-6);
  CHECK(r6 <= 1.0);
  // the bound always sits below the known upper reference line
  for (int n = n0; n <= 3000; n += 97) {
    CHECK(bd::expected_total_lower_bound_log2(n) < static_cast<double>(n) + std::log2(0.608));
  }
}

TEST_CASE("consecutive reference bound") {
  const double v100 = bd::consecutive_lower_bound(100);
  CHECK(v100 == Catch::Approx(5000.0 * (1.0 - 17.0 * std::log(100.0) / 100.0)).epsilon(1e-12));
  CHECK(v100 == Catch::Approx(1085.6).margin(0.1));
  CHECK(bd::consecutive_lower_bound(50) < 0);  // vacuous for small n
  CHECK(bd::consecutive_lower_bound(1000000) / (1e12 / 2) == Catch::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("cutoff case table replicates the expected verdicts at n = 1000") {
  const auto rows = bd::cutoff_case_table(1000);
  REQUIRE(rows.size() == 6);
  for (const auto& c : rows) {
    if (c.label == "k0=1") CHECK(c.verdict == "contradiction");
    if (c.label == "k0=4n^(2/3)") CHECK(c.verdict == "contradiction");
    if (c.label == "k0=floor(n/2)") {
      CHECK(c.tail_ratio >= 0.5);
      CHECK(c.verdict == "valid");
    }
    if (c.label.find("0.6") != std::string::npos) CHECK((c.verdict == "weaker" || c.verdict == "vacuous"));
  }
}

TEST_CASE("cutoff case inequalities at moderate n") {
  // tail at the midpoint stays at or above one half for several n
  for (int n : {8, 50, 200, 1000}) {
    const auto split = bd::tail_split(n, n / 2);
    CHECK(split.tail_ratio >= 0.5);
  }
  // binomial majorants used by the two early cutoffs
  {
    const int n = 1000;
    const auto k0 = static_cast<int>(std::ceil(4.0 * std::pow(n, 2.0 / 3.0)));
    CHECK(bd::log_binomial(n, k0) <= 4.0 / 3.0 * std::pow(n, 2.0 / 3.0) * std::log(n));
  }
  {
    const int n = 200;
    const double alpha = 0.4;
    const double lnB = -alpha * std::log(alpha) - (1 - alpha) * std::log(1 - alpha);
    CHECK(std::log(2.0) + bd::log_binomial(n, 80) <= std::log(2.0) + n * lnB);
  }
}

TEST_CASE("binomial threshold solver") {
  CHECK_THROWS_AS(bd::solve_binomial_threshold(8), std::domain_error);
  double prev = 0;
  for (int n : {10000, 30000, 100000, 300000, 1000000}) {
    const double x = bd::solve_binomial_threshold(n);
    CHECK(x > prev);
    prev = x;
    const double target = (static_cast<double>(n) - std::sqrt(static_cast<double>(n))) * bd::kLn2;
    CHECK(std::abs(bd::log_binomial(n, n / 2.0 - x) - target) < 1e-6);
  }
  const double r5 = bd::solve_binomial_threshold(100000) / std::pow(100000.0, 0.75);
  const double r6 = bd::solve_binomial_threshold(1000000) / std::pow(1000000.0, 0.75);
  CHECK(std::abs(r6 - r5) / r5 < 0.05);
}

TEST_CASE("summed lower bounds dominate the tail minus the summed error") {
  const int n = 64, k0 = 32;
  double lhs = 0, tail = 0, err = 0;
  for (int k = k0; k <= n; ++k) {
    lhs += bd::per_length_lower_bound(n, k);
    tail += std::exp(bd::log_binomial(n, k));
    err += bd::per_length_error(n, k);
  }
  CHECK(lhs >= (tail - err) * (1 - 1e-12) - 1e-9);
}

TEST_CASE("bound report fields") {
  const auto r = bd::bound_report(1000, 500, true);
  CHECK(r.delta >= 0.499);
  CHECK(r.rows.size() == 501);
  CHECK(r.rows.front().k == 500);
  CHECK(r.positivity_n0.has_value());
  for (const auto& row : r.rows) {
    if (row.lower_bound_sign > 0)
      CHECK(row.lower_bound_log2_abs <= bd::log2_binomial(1000, row.k) + 1e-9);
  }
}
