#pragma once

// Seeded Monte Carlo estimation of expected distinct-pattern counts, with
// standard errors and normal-approximation confidence intervals. Per-sample
// generator streams are derived from (seed, sample index) alone, so results
// are bit-identical for any worker count.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "constants.hpp"
#include "core.hpp"
#include "enumerate.hpp"
#include "parallel.hpp"

namespace permpat::montecarlo {

enum class Mode { consecutive, nonconsecutive };
enum class Convention { with_empty, without_empty };

inline const char* to_string(Mode m) { return m == Mode::consecutive ? "consecutive" : "nonconsecutive"; }
inline const char* to_string(Convention c) { return c == Convention::with_empty ? "with_empty" : "without_empty"; }

inline Mode mode_from_string(const std::string& s) {
  if (s == "consecutive") return Mode::consecutive;
  if (s == "nonconsecutive") return Mode::nonconsecutive;
  throw std::invalid_argument("mode must be 'consecutive' or 'nonconsecutive'");
}

inline Convention convention_from_string(const std::string& s) {
  if (s == "with_empty") return Convention::with_empty;
  if (s == "without_empty") return Convention::without_empty;
  throw std::invalid_argument("convention must be 'with_empty' or 'without_empty'");
}

struct SamplerConfig {
  int n = 1;
  long long samples = 1;
  std::uint64_t seed = 0;
  int workers = 1;
  Mode mode = Mode::nonconsecutive;
  Convention convention = Convention::with_empty;

  void validate() const {
    if (n < 1) throw std::invalid_argument("SamplerConfig: n must be >= 1");
    if (samples < 1) throw std::invalid_argument("SamplerConfig: samples must be >= 1");
    if (workers < 1) throw std::invalid_argument("SamplerConfig: workers must be >= 1");
    if (mode == Mode::nonconsecutive && n > enumerate::kMaxSubsetN)
      throw resource_limit_error("SamplerConfig: nonconsecutive mode requires n <= " +
                                 std::to_string(enumerate::kMaxSubsetN));
  }
};

struct SplitMix64 {
  std::uint64_t state = 0;
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
};

// The first draw of the stream is the splitmix64 output mix applied to
// (seed XOR sample index); later draws advance the state by the usual
// golden-ratio increment.
inline SplitMix64 sample_stream(std::uint64_t seed, std::uint64_t sample_index) {
  return SplitMix64{seed ^ sample_index};
}

// Uniform sample from S_n via a Fisher-Yates shuffle of the identity.
// Bounded draws use the rejection-free multiply-shift reduction.
inline Permutation sample_permutation(int n, SplitMix64& stream) {
  if (n < 1) throw std::invalid_argument("sample_permutation: n must be >= 1");
  std::vector<int> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i + 1;
  for (int i = n - 1; i > 0; --i) {
    const std::uint64_t r = stream.next();
    const auto j = static_cast<int>((static_cast<unsigned __int128>(r) *
                                     static_cast<unsigned __int128>(i + 1)) >>
                                    64);
    std::swap(v[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(j)]);
  }
  return Permutation::unchecked(std::move(v));
}

struct EstimateResult {
  SamplerConfig config;
  double mean = 0;
  double stderr_value = 0;
  double ci95_low = 0;
  double ci95_high = 0;
  double sample_variance = 0;
  double elapsed_seconds = 0;
};

// Sample mean of the distinct-pattern total over `samples` independent
// permutations. Moments accumulate in integers, so the merged result is
// independent of worker count and scheduling.
inline EstimateResult estimate(const SamplerConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();

  struct Moments {
    unsigned long long sum = 0;
    unsigned __int128 sumsq = 0;
  };
  std::vector<Moments> lanes(static_cast<std::size_t>(std::max(1, cfg.workers)));
  parallel_blocks(cfg.samples, cfg.workers, [&](int w, long long b, long long e) {
    auto& m = lanes[static_cast<std::size_t>(w)];
    for (long long s = b; s < e; ++s) {
      SplitMix64 g = sample_stream(cfg.seed, static_cast<std::uint64_t>(s));
      const Permutation pi = sample_permutation(cfg.n, g);
      const enumerate::PatternTally tally =
          cfg.mode == Mode::consecutive ? enumerate::distinct_consecutive(pi)
                                        : enumerate::distinct_nonconsecutive(pi);
      const long long v = cfg.convention == Convention::with_empty ? tally.total_with_empty
                                                                   : tally.total_without_empty;
      m.sum += static_cast<unsigned long long>(v);
      m.sumsq += static_cast<unsigned __int128>(v) * static_cast<unsigned __int128>(v);
    }
  });
  unsigned long long sum = 0;
  unsigned __int128 sumsq = 0;
  for (const auto& m : lanes) {
    sum += m.sum;
    sumsq += m.sumsq;
  }

  EstimateResult r;
  r.config = cfg;
  const auto nsamp = static_cast<double>(cfg.samples);
  r.mean = static_cast<double>(sum) / nsamp;
  if (cfg.samples > 1) {
    const auto num = static_cast<__int128>(cfg.samples) * static_cast<__int128>(sumsq) -
                     static_cast<__int128>(static_cast<unsigned __int128>(sum) * sum);
    r.sample_variance = static_cast<double>(num) / (nsamp * (nsamp - 1.0));
    if (r.sample_variance < 0) r.sample_variance = 0;  // integer math makes this exact; guard anyway
  }
  r.stderr_value = std::sqrt(r.sample_variance / nsamp);
  r.ci95_low = r.mean - kCiMultiplier * r.stderr_value;
  r.ci95_high = r.mean + kCiMultiplier * r.stderr_value;
  r.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

struct RatioRow {
  int n = 0;
  bool exact = false;
  long long samples = 0;
  double mean = 0;
  double stderr_value = 0;
  double ratio = 0;     // mean / 2^n
  double ci_low = 0;    // ratio CI (degenerate when exact)
  double ci_high = 0;
};

// mean/2^n per n, exact for n small enough to sweep when `prefer_exact` is
// set, sampled otherwise. No limit assertion is made; reports print the 0.5
// and 0.608 reference lines alongside.
inline std::vector<RatioRow> ratio_report(const std::vector<int>& ns, SamplerConfig tmpl,
                                          bool prefer_exact = true) {
  std::vector<RatioRow> rows;
  rows.reserve(ns.size());
  for (const int n : ns) {
    RatioRow row;
    row.n = n;
    const double scale = std::exp2(static_cast<double>(n));
    if (prefer_exact && n <= enumerate::kMaxExactN && tmpl.mode == Mode::nonconsecutive) {
      const auto exact = enumerate::exact_expected(n, tmpl.workers);
      row.exact = true;
      row.samples = 0;
      row.mean = to_double(tmpl.convention == Convention::with_empty ? exact.total_with_empty
                                                                     : exact.total_without_empty);
      row.ratio = row.mean / scale;
      row.ci_low = row.ci_high = row.ratio;
    } else {
      tmpl.n = n;
      const EstimateResult est = estimate(tmpl);
      row.samples = tmpl.samples;
      row.mean = est.mean;
      row.stderr_value = est.stderr_value;
      row.ratio = est.mean / scale;
      row.ci_low = est.ci95_low / scale;
      row.ci_high = est.ci95_high / scale;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace permpat::montecarlo
