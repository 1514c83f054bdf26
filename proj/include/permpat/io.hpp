#pragma once

// JSON and CSV emitters for the report types, plus the output envelope shared
// by every CLI subcommand.

#include <cmath>
#include <sstream>
#include <string>

#include <json.hpp>

#include "bounds.hpp"
#include "constants.hpp"
#include "enumerate.hpp"
#include "montecarlo.hpp"
#include "oracles.hpp"
#include "steinchen.hpp"

namespace permpat::io {

using Json = nlohmann::ordered_json;

inline Json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

inline std::string rational_string(const BigRat& q) {
  std::ostringstream out;
  out << q;
  return out.str();
}

inline Json constants_json() {
  Json c;
  c["error_growth_base"] = kErrorGrowthBase;
  c["error_coefficient"] = kErrorCoefficient;
  c["envelope_exponent"] = kEnvelopeExponent;
  c["consecutive_log_coefficient"] = kConsecutiveLogCoefficient;
  c["ref_line_half"] = kRefLineHalf;
  c["ref_line_upper"] = kRefLineUpper;
  c["ci_multiplier"] = kCiMultiplier;
  c["subset_cap_n"] = enumerate::kMaxSubsetN;
  c["exact_sweep_cap_n"] = enumerate::kMaxExactN;
  return c;
}

inline Json make_envelope(const std::string& command, Json payload, double elapsed_seconds) {
  Json e;
  e["command"] = command;
  e["version"] = kVersion;
  e["schema_version"] = kSchemaVersion;
  e["constants"] = constants_json();
  e["payload"] = std::move(payload);
  e["elapsed_seconds"] = elapsed_seconds;
  return e;
}

// ---- tallies ----

inline Json json_of(const enumerate::PatternTally& t) {
  Json j;
  j["n"] = t.n;
  j["per_length"] = t.per_length;
  j["total_with_empty"] = t.total_with_empty;
  j["total_without_empty"] = t.total_without_empty;
  return j;
}

inline std::string csv_of(const enumerate::PatternTally& t) {
  std::ostringstream out;
  out << "k,count\n";
  for (std::size_t k = 0; k < t.per_length.size(); ++k) out << k << "," << t.per_length[k] << "\n";
  return out.str();
}

inline Json json_of(const enumerate::ExactExpectation& e) {
  Json j;
  j["n"] = e.n;
  Json rows = Json::array();
  for (std::size_t k = 0; k < e.per_k.size(); ++k) {
    Json row;
    row["k"] = k;
    row["expectation"] = rational_string(e.per_k[k]);
    row["value"] = to_double(e.per_k[k]);
    rows.push_back(row);
  }
  j["per_k"] = rows;
  j["total_with_empty"] = rational_string(e.total_with_empty);
  j["total_without_empty"] = rational_string(e.total_without_empty);
  j["total_with_empty_value"] = to_double(e.total_with_empty);
  j["total_without_empty_value"] = to_double(e.total_without_empty);
  return j;
}

inline std::string csv_of(const enumerate::ExactExpectation& e) {
  std::ostringstream out;
  out << "k,numerator,denominator,value\n";
  for (std::size_t k = 0; k < e.per_k.size(); ++k) {
    out << k << "," << boost::multiprecision::numerator(e.per_k[k]) << ","
        << boost::multiprecision::denominator(e.per_k[k]) << "," << to_double(e.per_k[k]) << "\n";
  }
  return out.str();
}

// ---- estimates ----

inline Json json_of(const montecarlo::EstimateResult& r) {
  Json cfg;
  cfg["n"] = r.config.n;
  cfg["samples"] = r.config.samples;
  cfg["seed"] = r.config.seed;
  cfg["workers"] = r.config.workers;
  cfg["mode"] = montecarlo::to_string(r.config.mode);
  cfg["convention"] = montecarlo::to_string(r.config.convention);
  Json j;
  j["config"] = cfg;
  j["mean"] = r.mean;
  j["stderr"] = r.stderr_value;
  j["ci95_low"] = r.ci95_low;
  j["ci95_high"] = r.ci95_high;
  j["sample_variance"] = r.sample_variance;
  j["elapsed_seconds"] = r.elapsed_seconds;
  return j;
}

inline std::string csv_of(const montecarlo::EstimateResult& r) {
  std::ostringstream out;
  out << "n,samples,seed,workers,mode,convention,mean,stderr,ci95_low,ci95_high,sample_variance\n"
      << r.config.n << "," << r.config.samples << "," << r.config.seed << "," << r.config.workers << ","
      << montecarlo::to_string(r.config.mode) << "," << montecarlo::to_string(r.config.convention) << ","
      << r.mean << "," << r.stderr_value << "," << r.ci95_low << "," << r.ci95_high << ","
      << r.sample_variance << "\n";
  return out.str();
}

inline Json json_of(const std::vector<montecarlo::RatioRow>& rows) {
  Json arr = Json::array();
  for (const auto& r : rows) {
    Json j;
    j["n"] = r.n;
    j["exact"] = r.exact;
    j["samples"] = r.samples;
    j["mean"] = r.mean;
    j["stderr"] = r.stderr_value;
    j["ratio"] = r.ratio;
    j["ci_low"] = r.ci_low;
    j["ci_high"] = r.ci_high;
    arr.push_back(j);
  }
  return arr;
}

inline std::string csv_of(const std::vector<montecarlo::RatioRow>& rows) {
  std::ostringstream out;
  out << "n,exact,samples,mean,stderr,ratio,ci_low,ci_high,ref_half,ref_upper\n";
  for (const auto& r : rows) {
    out << r.n << "," << (r.exact ? 1 : 0) << "," << r.samples << "," << r.mean << "," << r.stderr_value << ","
        << r.ratio << "," << r.ci_low << "," << r.ci_high << "," << kRefLineHalf << "," << kRefLineUpper << "\n";
  }
  return out.str();
}

// ---- total variation ----

inline Json json_of(const steinchen::TvReport& r) {
  Json j;
  j["n"] = r.n;
  j["k"] = r.k;
  j["pattern"] = r.pattern.to_string();
  j["pattern_index"] = pattern_lex_index(r.pattern) + 1;  // 1-based in reports
  j["lambda"] = r.lambda;
  j["exact_dtv"] = r.exact_dtv;
  j["bound_b1"] = r.bound_b1;
  j["bound_b2"] = r.bound_b2;
  j["bound_b3"] = r.bound_b3;
  j["b3_is_averaged_proxy"] = r.b3_is_averaged_proxy;
  j["bound_total"] = r.bound_total;
  j["p_ge_1_exact"] = r.p_ge_1_exact;
  j["p_ge_1_lower"] = r.p_ge_1_lower;
  j["vacuous"] = r.vacuous;
  return j;
}

inline std::string tv_csv_header() {
  return "n,k,pattern_index,pattern,lambda,exact_dtv,b1,b2,b3_proxy,bound_total,p_ge_1_exact,p_ge_1_lower,"
         "vacuous\n";
}

inline std::string csv_row_of(const steinchen::TvReport& r) {
  std::ostringstream out;
  out << r.n << "," << r.k << "," << pattern_lex_index(r.pattern) + 1 << "," << r.pattern.to_string() << ","
      << r.lambda << "," << r.exact_dtv << "," << r.bound_b1 << "," << r.bound_b2 << "," << r.bound_b3 << ","
      << r.bound_total << "," << r.p_ge_1_exact << "," << r.p_ge_1_lower << "," << (r.vacuous ? 1 : 0) << "\n";
  return out.str();
}

inline Json json_of(const steinchen::OccurrenceLaw& law) {
  Json j;
  j["n"] = law.n;
  j["k"] = law.k;
  j["pattern"] = law.pattern.to_string();
  j["lambda"] = rational_string(law.lambda);
  j["lambda_value"] = to_double(law.lambda);
  Json pmf = Json::array();
  for (std::size_t s = 0; s < law.pmf.size(); ++s) {
    Json row;
    row["s"] = s;
    row["p"] = rational_string(law.pmf[s]);
    row["value"] = to_double(law.pmf[s]);
    pmf.push_back(row);
  }
  j["pmf"] = pmf;
  return j;
}

// ---- bounds ----

inline Json json_of(const bounds::BoundReport& r) {
  Json j;
  j["n"] = r.n;
  j["k0"] = r.k0;
  j["epsilon"] = r.epsilon;
  j["delta"] = r.delta;
  j["tail_ratio"] = r.tail_ratio;
  j["tail_log2"] = finite_or_null(r.tail_log2_value);
  j["total_bound_ratio"] = r.total_bound_ratio;
  j["total_bound_log2"] = finite_or_null(r.total_bound_log2);
  if (r.positivity_n0) j["positivity_n0"] = *r.positivity_n0;
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json x;
    x["k"] = row.k;
    x["lambda_log2"] = finite_or_null(row.lambda_log2);
    x["lower_bound"] = finite_or_null(row.lower_bound);
    x["lower_bound_sign"] = row.lower_bound_sign;
    x["lower_bound_log2_abs"] = finite_or_null(row.lower_bound_log2_abs);
    x["error_log2"] = finite_or_null(row.error_log2);
    rows.push_back(x);
  }
  j["per_k"] = rows;
  return j;
}

inline std::string csv_of(const bounds::BoundReport& r) {
  std::ostringstream out;
  out << "k,lambda_log2,lower_bound,lower_bound_sign,lower_bound_log2_abs,error_log2\n";
  for (const auto& row : r.rows) {
    out << row.k << "," << row.lambda_log2 << "," << row.lower_bound << "," << row.lower_bound_sign << ","
        << row.lower_bound_log2_abs << "," << row.error_log2 << "\n";
  }
  return out.str();
}

inline Json json_of(const std::vector<bounds::CutoffCase>& rows) {
  Json arr = Json::array();
  for (const auto& c : rows) {
    Json j;
    j["label"] = c.label;
    j["k0"] = c.k0;
    j["tail_ratio"] = finite_or_null(c.tail_ratio);
    j["bound_ratio"] = finite_or_null(c.bound_ratio);
    j["verdict"] = c.verdict;
    j["note"] = c.note;
    arr.push_back(j);
  }
  return arr;
}

inline std::string csv_of(const std::vector<bounds::CutoffCase>& rows) {
  std::ostringstream out;
  out << "label,k0,tail_ratio,bound_ratio,verdict\n";
  for (const auto& c : rows)
    out << c.label << "," << c.k0 << "," << c.tail_ratio << "," << c.bound_ratio << "," << c.verdict << "\n";
  return out.str();
}

// ---- verification sweeps ----

inline Json json_of(const oracles::SweepResult& r) {
  Json j;
  j["suite"] = r.suite;
  j["checks"] = r.checks;
  j["failures"] = r.failures;
  j["failure_notes"] = r.failure_notes;
  Json stats;
  for (const auto& [key, value] : r.stats) stats[key] = value;
  j["stats"] = stats;
  j["pass"] = r.failures == 0;
  return j;
}

inline std::string csv_of(const std::vector<oracles::SweepResult>& results) {
  std::ostringstream out;
  out << "suite,checks,failures,pass\n";
  for (const auto& r : results)
    out << r.suite << "," << r.checks << "," << r.failures << "," << (r.failures == 0 ? 1 : 0) << "\n";
  return out.str();
}

}  // namespace permpat::io
