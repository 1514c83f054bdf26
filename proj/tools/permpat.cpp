// Command-line front end: every module surfaced as a subcommand with
// reproducible seeding and machine-readable output (json | csv | plain).
//
// Exit codes: 0 success, 1 usage error, 2 resource-cap violation,
// 3 verification failure (an oracle sweep reported a failed check).

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <permpat/bounds.hpp>
#include <permpat/constants.hpp>
#include <permpat/core.hpp>
#include <permpat/enumerate.hpp>
#include <permpat/io.hpp>
#include <permpat/montecarlo.hpp>
#include <permpat/oracles.hpp>
#include <permpat/steinchen.hpp>

namespace {

using permpat::io::Json;

struct OutputOptions {
  std::string format = "json";
  std::string out_path;
};

void add_output_flags(CLI::App* cmd, OutputOptions& opts) {
  cmd->add_option("--format", opts.format, "Output format")
      ->check(CLI::IsMember({"json", "csv", "plain"}))
      ->capture_default_str();
  cmd->add_option("--out", opts.out_path, "Write output to FILE instead of stdout");
}

void write_output(const OutputOptions& opts, const std::string& text) {
  if (opts.out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(opts.out_path);
  if (!out) throw std::runtime_error("cannot open output file: " + opts.out_path);
  out << text;
}

// csv and plain carry the envelope as comment lines so every output remains
// self-describing.
std::string envelope_comment(const std::string& command, double elapsed) {
  std::ostringstream out;
  out << "# command=" << command << " version=" << permpat::kVersion << "\n";
  const Json c = permpat::io::constants_json();
  out << "#";
  for (const auto& [key, value] : c.items()) out << " " << key << "=" << value.dump();
  out << "\n# elapsed_seconds=" << elapsed << "\n";
  return out.str();
}

void emit(const OutputOptions& opts, const std::string& command, const Json& payload,
          const std::string& csv_body, const std::string& plain_body, double elapsed) {
  if (opts.format == "json") {
    write_output(opts, permpat::io::make_envelope(command, payload, elapsed).dump(2));
  } else if (opts.format == "csv") {
    write_output(opts, envelope_comment(command, elapsed) + csv_body);
  } else {
    write_output(opts, envelope_comment(command, elapsed) + plain_body);
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<int> range_list(int lo, int hi, int step) {
  std::vector<int> out;
  for (int n = lo; n <= hi; n += step) out.push_back(n);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"permpat: distinct pattern counts, estimates, and bounds for permutations"};
  app.require_subcommand(1);

  // ---- count ----
  std::string count_perm;
  std::string count_mode = "nonconsecutive";
  OutputOptions count_out;
  auto* count_cmd = app.add_subcommand("count", "Distinct-pattern tally of one permutation");
  count_cmd->add_option("--perm", count_perm, "Permutation in one-line notation, e.g. \"3 4 1 5 2\"")
      ->required();
  count_cmd->add_option("--mode", count_mode, "consecutive | nonconsecutive")
      ->check(CLI::IsMember({"consecutive", "nonconsecutive"}))
      ->capture_default_str();
  add_output_flags(count_cmd, count_out);

  // ---- estimate ----
  permpat::montecarlo::SamplerConfig est_cfg;
  est_cfg.n = 8;
  est_cfg.samples = 1000;
  std::string est_mode = "nonconsecutive";
  std::string est_convention = "with_empty";
  OutputOptions est_out;
  auto* est_cmd = app.add_subcommand("estimate", "Monte Carlo estimate of the expected tally");
  est_cmd->add_option("--n", est_cfg.n, "Permutation length")->required();
  est_cmd->add_option("--samples", est_cfg.samples, "Sample count")->capture_default_str();
  est_cmd->add_option("--seed", est_cfg.seed, "Seed")->capture_default_str();
  est_cmd->add_option("--workers", est_cfg.workers, "Worker threads")->capture_default_str();
  est_cmd->add_option("--mode", est_mode, "consecutive | nonconsecutive")
      ->check(CLI::IsMember({"consecutive", "nonconsecutive"}))
      ->capture_default_str();
  est_cmd->add_option("--convention", est_convention, "with_empty | without_empty")
      ->check(CLI::IsMember({"with_empty", "without_empty"}))
      ->capture_default_str();
  add_output_flags(est_cmd, est_out);

  // ---- exact ----
  int exact_n = 5;
  int exact_workers = 1;
  OutputOptions exact_out;
  auto* exact_cmd = app.add_subcommand("exact", "Exact expected tally by full enumeration");
  exact_cmd->add_option("--n", exact_n, "Permutation length (<= 9)")->required();
  exact_cmd->add_option("--workers", exact_workers, "Worker threads")->capture_default_str();
  add_output_flags(exact_cmd, exact_out);

  // ---- bounds ----
  int bounds_n = 100;
  std::string bounds_k0 = "half";
  bool bounds_cases = false;
  bool bounds_solve = false;
  bool bounds_threshold = false;
  OutputOptions bounds_out;
  auto* bounds_cmd = app.add_subcommand("bounds", "Analytic bound report, cutoff cases, threshold solver");
  bounds_cmd->add_option("--n", bounds_n, "Permutation length")->required();
  bounds_cmd->add_option("--k0", bounds_k0, "Cutoff: 'half' or an integer")->capture_default_str();
  bounds_cmd->add_flag("--cases", bounds_cases, "Emit the cutoff case table instead of the report");
  bounds_cmd->add_flag("--solve-threshold", bounds_solve,
                       "Solve C(n, n/2 - x) = 2^(n - sqrt(n)) for x instead of the report");
  bounds_cmd->add_flag("--threshold", bounds_threshold, "Include the positivity threshold in the report");
  add_output_flags(bounds_cmd, bounds_out);

  // ---- tv ----
  int tv_n = 7;
  int tv_k = 3;
  std::string tv_pattern;
  bool tv_all = false;
  int tv_workers = 1;
  OutputOptions tv_out;
  auto* tv_cmd = app.add_subcommand("tv", "Total-variation report against the matched Poisson law");
  tv_cmd->add_option("--n", tv_n, "Permutation length (<= 9)")->required();
  tv_cmd->add_option("--k", tv_k, "Pattern length")->required();
  tv_cmd->add_option("--pattern", tv_pattern, "Pattern, e.g. 1234 (default: identity of length k)");
  tv_cmd->add_flag("--all", tv_all, "One report per pattern of length k");
  tv_cmd->add_option("--workers", tv_workers, "Worker threads")->capture_default_str();
  add_output_flags(tv_cmd, tv_out);

  // ---- verify ----
  std::string verify_suite = "all";
  int verify_max_m = 6;
  int verify_max_n = 6;
  int verify_max_k = 3;
  OutputOptions verify_out;
  auto* verify_cmd = app.add_subcommand("verify", "Brute-force conformance sweeps");
  verify_cmd->add_option("--suite", verify_suite, "allotment | coupling | restriction | all")
      ->check(CLI::IsMember({"allotment", "coupling", "restriction", "all"}))
      ->capture_default_str();
  verify_cmd->add_option("--max-m", verify_max_m, "Universe cap for the allotment sweep")
      ->capture_default_str();
  verify_cmd->add_option("--max-n", verify_max_n, "Length cap for the coupling sweep")->capture_default_str();
  verify_cmd->add_option("--max-k", verify_max_k, "Pattern cap for the coupling/restriction sweeps")
      ->capture_default_str();
  add_output_flags(verify_cmd, verify_out);

  // ---- sweep ----
  std::string sweep_what = "ratio";
  int sweep_n_min = 4;
  int sweep_n_max = 12;
  int sweep_n_step = 1;
  int sweep_k = 3;
  long long sweep_samples = 500;
  std::uint64_t sweep_seed = 0;
  int sweep_workers = 1;
  std::string sweep_convention = "without_empty";
  OutputOptions sweep_out;
  auto* sweep_cmd = app.add_subcommand("sweep", "CSV-oriented emitters over ranges");
  sweep_cmd->add_option("--what", sweep_what, "ratio | tv | kernel | tail")
      ->check(CLI::IsMember({"ratio", "tv", "kernel", "tail"}))
      ->capture_default_str();
  sweep_cmd->add_option("--n-min", sweep_n_min, "Range start")->capture_default_str();
  sweep_cmd->add_option("--n-max", sweep_n_max, "Range end (inclusive)")->capture_default_str();
  sweep_cmd->add_option("--n-step", sweep_n_step, "Range step")->capture_default_str();
  sweep_cmd->add_option("--k", sweep_k, "Pattern length (tv/kernel sweeps)")->capture_default_str();
  sweep_cmd->add_option("--samples", sweep_samples, "Samples per point (ratio sweep)")->capture_default_str();
  sweep_cmd->add_option("--seed", sweep_seed, "Seed (ratio sweep)")->capture_default_str();
  sweep_cmd->add_option("--workers", sweep_workers, "Worker threads")->capture_default_str();
  sweep_cmd->add_option("--convention", sweep_convention, "with_empty | without_empty")
      ->check(CLI::IsMember({"with_empty", "without_empty"}))
      ->capture_default_str();
  add_output_flags(sweep_cmd, sweep_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const auto t0 = std::chrono::steady_clock::now();

    if (count_cmd->parsed()) {
      const permpat::Permutation pi = permpat::Permutation::parse(count_perm);
      const auto tally = count_mode == "consecutive" ? permpat::enumerate::distinct_consecutive(pi)
                                                     : permpat::enumerate::distinct_nonconsecutive(pi);
      std::ostringstream plain;
      plain << "n=" << tally.n << " mode=" << count_mode << "\n";
      for (std::size_t k = 0; k < tally.per_length.size(); ++k)
        plain << "  k=" << k << ": " << tally.per_length[k] << "\n";
      plain << "total_with_empty=" << tally.total_with_empty
            << " total_without_empty=" << tally.total_without_empty << "\n";
      emit(count_out, "count", permpat::io::json_of(tally), permpat::io::csv_of(tally), plain.str(),
           seconds_since(t0));
      return 0;
    }

    if (est_cmd->parsed()) {
      est_cfg.mode = permpat::montecarlo::mode_from_string(est_mode);
      est_cfg.convention = permpat::montecarlo::convention_from_string(est_convention);
      const auto result = permpat::montecarlo::estimate(est_cfg);
      std::ostringstream plain;
      plain << "mean=" << result.mean << " stderr=" << result.stderr_value << " ci95=[" << result.ci95_low
            << ", " << result.ci95_high << "]\n";
      emit(est_out, "estimate", permpat::io::json_of(result), permpat::io::csv_of(result), plain.str(),
           seconds_since(t0));
      return 0;
    }

    if (exact_cmd->parsed()) {
      const auto result = permpat::enumerate::exact_expected(exact_n, exact_workers);
      std::ostringstream plain;
      plain << "n=" << exact_n << " total_without_empty=" << permpat::io::rational_string(result.total_without_empty)
            << " (" << permpat::to_double(result.total_without_empty) << ")\n";
      emit(exact_out, "exact", permpat::io::json_of(result), permpat::io::csv_of(result), plain.str(),
           seconds_since(t0));
      return 0;
    }

    if (bounds_cmd->parsed()) {
      if (bounds_solve) {
        const double x = permpat::bounds::solve_binomial_threshold(bounds_n);
        Json payload;
        payload["n"] = bounds_n;
        payload["x"] = x;
        payload["x_over_n_3_4"] = x / std::pow(static_cast<double>(bounds_n), 0.75);
        std::ostringstream csv, plain;
        csv << "n,x,x_over_n_3_4\n"
            << bounds_n << "," << x << "," << x / std::pow(static_cast<double>(bounds_n), 0.75) << "\n";
        plain << "x=" << x << " x/n^(3/4)=" << x / std::pow(static_cast<double>(bounds_n), 0.75) << "\n";
        emit(bounds_out, "bounds", payload, csv.str(), plain.str(), seconds_since(t0));
        return 0;
      }
      if (bounds_cases) {
        const auto rows = permpat::bounds::cutoff_case_table(bounds_n);
        std::ostringstream plain;
        for (const auto& c : rows)
          plain << c.label << ": k0=" << c.k0 << " tail_ratio=" << c.tail_ratio
                << " bound_ratio=" << c.bound_ratio << " verdict=" << c.verdict << "\n";
        emit(bounds_out, "bounds", permpat::io::json_of(rows), permpat::io::csv_of(rows), plain.str(),
             seconds_since(t0));
        return 0;
      }
      const int k0 = bounds_k0 == "half" ? bounds_n / 2 : std::stoi(bounds_k0);
      const auto report = permpat::bounds::bound_report(bounds_n, k0, bounds_threshold);
      std::ostringstream plain;
      plain << "n=" << report.n << " k0=" << report.k0 << " epsilon=" << report.epsilon
            << " delta=" << report.delta << " tail_ratio=" << report.tail_ratio << "\n";
      emit(bounds_out, "bounds", permpat::io::json_of(report), permpat::io::csv_of(report), plain.str(),
           seconds_since(t0));
      return 0;
    }

    if (tv_cmd->parsed()) {
      if (tv_all) {
        const auto hists = permpat::steinchen::occurrence_histograms(tv_n, tv_k, tv_workers);
        Json arr = Json::array();
        std::string csv = permpat::io::tv_csv_header();
        const auto nfact = permpat::factorial_big(tv_n);
        for (std::uint64_t li = 0; li < hists.size(); ++li) {
          permpat::steinchen::OccurrenceLaw law;
          law.n = tv_n;
          law.k = tv_k;
          law.pattern = permpat::pattern_at(tv_k, li);
          law.lambda = permpat::BigRat(permpat::binomial_big(tv_n, tv_k), permpat::factorial_big(tv_k));
          law.pmf.resize(hists[li].size());
          for (std::size_t s = 0; s < hists[li].size(); ++s)
            law.pmf[s] = permpat::BigRat(permpat::BigInt(hists[li][s]), nfact);
          const auto report = permpat::steinchen::tv_report_from_law(law);
          arr.push_back(permpat::io::json_of(report));
          csv += permpat::io::csv_row_of(report);
        }
        emit(tv_out, "tv", arr, csv, "see csv/json formats\n", seconds_since(t0));
        return 0;
      }
      const permpat::PatternCode pattern = tv_pattern.empty()
                                               ? permpat::pattern_at(tv_k, 0)
                                               : permpat::parse_pattern(tv_pattern);
      const auto report = permpat::steinchen::tv_report(tv_n, tv_k, pattern, tv_workers);
      std::ostringstream plain;
      plain << "pattern=" << report.pattern.to_string() << " lambda=" << report.lambda
            << " exact_dtv=" << report.exact_dtv << " bound_total=" << report.bound_total
            << " p_ge_1_exact=" << report.p_ge_1_exact << " p_ge_1_lower=" << report.p_ge_1_lower << "\n";
      emit(tv_out, "tv", permpat::io::json_of(report), permpat::io::tv_csv_header() + permpat::io::csv_row_of(report),
           plain.str(), seconds_since(t0));
      return 0;
    }

    if (verify_cmd->parsed()) {
      std::vector<permpat::oracles::SweepResult> results;
      if (verify_suite == "allotment" || verify_suite == "all")
        results.push_back(permpat::oracles::allotment_sweep(verify_max_m));
      if (verify_suite == "coupling" || verify_suite == "all")
        results.push_back(permpat::oracles::coupling_sweep(verify_max_n, verify_max_k));
      if (verify_suite == "restriction" || verify_suite == "all")
        results.push_back(permpat::oracles::restriction_sweep(verify_max_k));

      Json arr = Json::array();
      long long failures = 0;
      std::ostringstream plain;
      for (const auto& r : results) {
        arr.push_back(permpat::io::json_of(r));
        failures += r.failures;
        plain << r.suite << ": " << r.checks << " checks, " << r.failures << " failures\n";
      }
      emit(verify_out, "verify", arr, permpat::io::csv_of(results), plain.str(), seconds_since(t0));
      return failures == 0 ? 0 : 3;
    }

    if (sweep_cmd->parsed()) {
      const auto ns = range_list(sweep_n_min, sweep_n_max, sweep_n_step);
      if (sweep_what == "ratio") {
        permpat::montecarlo::SamplerConfig tmpl;
        tmpl.samples = sweep_samples;
        tmpl.seed = sweep_seed;
        tmpl.workers = sweep_workers;
        tmpl.mode = permpat::montecarlo::Mode::nonconsecutive;
        tmpl.convention = permpat::montecarlo::convention_from_string(sweep_convention);
        const auto rows = permpat::montecarlo::ratio_report(ns, tmpl, true);
        std::ostringstream plain;
        for (const auto& r : rows)
          plain << "n=" << r.n << " ratio=" << r.ratio << (r.exact ? " (exact)" : "")
                << "  [ref " << permpat::kRefLineHalf << " / " << permpat::kRefLineUpper << "]\n";
        emit(sweep_out, "sweep", permpat::io::json_of(rows), permpat::io::csv_of(rows), plain.str(),
             seconds_since(t0));
        return 0;
      }
      if (sweep_what == "tv") {
        std::string csv = permpat::io::tv_csv_header();
        Json arr = Json::array();
        for (const int n : ns) {
          const auto hists = permpat::steinchen::occurrence_histograms(n, sweep_k, sweep_workers);
          const auto nfact = permpat::factorial_big(n);
          for (std::uint64_t li = 0; li < hists.size(); ++li) {
            permpat::steinchen::OccurrenceLaw law;
            law.n = n;
            law.k = sweep_k;
            law.pattern = permpat::pattern_at(sweep_k, li);
            law.lambda = permpat::BigRat(permpat::binomial_big(n, sweep_k), permpat::factorial_big(sweep_k));
            law.pmf.resize(hists[li].size());
            for (std::size_t s = 0; s < hists[li].size(); ++s)
              law.pmf[s] = permpat::BigRat(permpat::BigInt(hists[li][s]), nfact);
            const auto report = permpat::steinchen::tv_report_from_law(law);
            arr.push_back(permpat::io::json_of(report));
            csv += permpat::io::csv_row_of(report);
          }
        }
        emit(sweep_out, "sweep", arr, csv, "see csv/json formats\n", seconds_since(t0));
        return 0;
      }
      if (sweep_what == "kernel") {
        std::ostringstream csv;
        csv << "k,argmax_r,predicted_r\n";
        Json arr = Json::array();
        for (int k = std::max(2, sweep_n_min); k <= sweep_n_max; k += sweep_n_step) {
          const auto table = permpat::bounds::overlap_kernel_table(k);
          const int predicted = permpat::bounds::overlap_kernel_argmax_prediction(k);
          Json j;
          j["k"] = k;
          j["argmax_r"] = table.argmax_r;
          j["predicted_r"] = predicted;
          arr.push_back(j);
          csv << k << "," << table.argmax_r << "," << predicted << "\n";
        }
        emit(sweep_out, "sweep", arr, csv.str(), "see csv/json formats\n", seconds_since(t0));
        return 0;
      }
      // tail sweep
      std::ostringstream csv;
      csv << "n,k0,tail_log2,tail_ratio,epsilon,delta\n";
      Json arr = Json::array();
      for (const int n : ns) {
        const auto split = permpat::bounds::tail_split(n, n / 2);
        Json j;
        j["n"] = n;
        j["k0"] = n / 2;
        j["tail_log2"] = permpat::bounds::tail_log2(n, n / 2);
        j["tail_ratio"] = split.tail_ratio;
        j["epsilon"] = split.epsilon;
        j["delta"] = split.delta;
        arr.push_back(j);
        csv << n << "," << n / 2 << "," << permpat::bounds::tail_log2(n, n / 2) << "," << split.tail_ratio << ","
            << split.epsilon << "," << split.delta << "\n";
      }
      emit(sweep_out, "sweep", arr, csv.str(), "see csv/json formats\n", seconds_since(t0));
      return 0;
    }
  } catch (const permpat::resource_limit_error& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
