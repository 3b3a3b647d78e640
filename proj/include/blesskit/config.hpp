#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "blesskit/bless.hpp"
#include "blesskit/dataset_io.hpp"

namespace blesskit {

/// Library version embedded in every report.
inline constexpr const char* kVersion = "0.1.0";

/// Dictionary samplers known to the harness. `full` is J = [n], A = I,
/// which makes approximate and exact scores coincide.
enum class Algorithm { bless, bless_r, two_pass, uniform, exact_rls, full };

std::string to_string(Algorithm algo);
/// Accepts bless, bless-r, two-pass, uniform, exact-rls, full.
Algorithm parse_algorithm(const std::string& name);

/// Everything an experiment run depends on. Reports echo it with every
/// default filled in, so a report is enough to rerun itself.
struct ExperimentConfig {
  std::string data_path;  // empty when the dataset is supplied in-process
  DataFormat format = DataFormat::csv;
  int label_column = 0;   // csv only; kNoLabel for unlabeled data

  std::string kernel = "gaussian";
  double sigma = 1.0;

  Algorithm algorithm = Algorithm::bless;
  double lambda = 1e-3;
  std::optional<double> lambda_bless;   // learning runs
  std::optional<double> lambda_falkon;  // learning runs
  BlessParams bless;                    // bless.seed is overridden per seed
  /// Dictionary size for uniform / exact-rls and M2 for two-pass;
  /// 0 picks the automatic size.
  Index dictionary_size = 0;
  /// First-pass size for two-pass; 0 picks min(ceil(4 / lambda), n).
  Index first_pass_size = 0;

  int cg_iters = 20;
  std::vector<std::uint64_t> seeds{0};
  Index oracle_cap = kDefaultOracleCap;
  double split = 0.8;  // training fraction for learning runs

  // Runtime runs.
  std::vector<Index> n_grid;
  std::vector<Algorithm> algorithms;  // empty: just `algorithm`
  int repeats = 3;
  /// A cell whose warm-up run already took this long is timed by that
  /// single run instead of warm-up + median of `repeats`.
  double single_run_seconds = 5.0;

  std::string out;
  std::string out_format = "json";
  bool include_timings = true;

  /// Throws InvalidArgument on inconsistent settings.
  void validate() const;
  /// lambda_bless, falling back to lambda.
  double bless_lambda() const { return lambda_bless.value_or(lambda); }
  /// lambda_falkon, falling back to lambda.
  double falkon_lambda() const { return lambda_falkon.value_or(lambda); }
};

}  // namespace blesskit
