#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "blesskit/bless.hpp"
#include "blesskit/config.hpp"
#include "blesskit/falkon.hpp"

namespace blesskit {

/// Kernel named by the config; the linear bound comes from `data`.
KernelSpec make_kernel(const ExperimentConfig& config, const Dataset& data);

struct SampleOutcome {
  Dictionary dictionary;               // the final level
  std::optional<DictionaryPath> path;  // bless and bless-r only
  double seconds = 0.0;
};

/// Runs one sampler at `lambda` with the config's parameters and `seed`.
///
/// Automatic sizes (config.dictionary_size == 0): uniform draws
/// min(n, ceil(1 / lambda)) points; exact-rls draws ceil(q2 d_eff);
/// two-pass draws ceil(q2 * sum of first-pass scores) in the second pass.
SampleOutcome sample_dictionary(const Dataset& data, const KernelSpec& spec, Algorithm algo,
                                double lambda, const ExperimentConfig& config,
                                std::uint64_t seed);

struct ScoreSeedResult {
  std::uint64_t seed = 0;
  Index dictionary_size = 0;
  Eigen::VectorXd approx;  // l~_J(i, lambda) for every i
  Eigen::VectorXd ratios;  // approx / exact (0 / 0 counts as 1)
  double mean = 0.0;
  double q05 = 0.0;
  double q95 = 0.0;
  double min = 0.0;
  double max = 0.0;
  bool sandwich = false;  // every ratio in [1/2, 2]
  std::size_t clamped = 0;
  double seconds = 0.0;
  std::optional<DictionaryPath> path;
};

struct ScoreReport {
  ExperimentConfig config;
  Index n = 0;
  double d_eff = 0.0;
  double d_inf = 0.0;
  Eigen::VectorXd exact;
  std::vector<ScoreSeedResult> seeds;  // in config.seeds order
  // Pooled over every point of every seed.
  double mean = 0.0;
  double q05 = 0.0;
  double q95 = 0.0;
  // Median over seeds of the per-seed mean ratio.
  double median_seed_mean = 0.0;
  Index sandwich_seeds = 0;
};

/// Accuracy protocol: per seed, sample to config.lambda, score every point
/// out of sample, and divide by the exact scores.
/// Throws ResourceLimit when n exceeds config.oracle_cap.
ScoreReport run_scores_experiment(const Dataset& data, const ExperimentConfig& config);

struct RuntimeCell {
  Index n = 0;
  double seconds = 0.0;          // median of `samples`
  std::vector<double> samples;   // timed runs (warm-up excluded unless single_run)
  bool single_run = false;       // the warm-up was slow enough to be the timing
  Index dictionary_size = 0;
};

struct RuntimeSeries {
  Algorithm algorithm = Algorithm::bless;
  std::vector<RuntimeCell> cells;  // one per n_grid entry
  double ratio = 0.0;   // time(largest n) / time(smallest n)
  double spread = 0.0;  // max time / min time over the grid
};

struct RuntimeReport {
  ExperimentConfig config;
  std::vector<RuntimeSeries> series;
};

/// Timing protocol: for every n in config.n_grid (default: the whole
/// source) the first n points of `source` are sampled to config.lambda with
/// every configured algorithm, using the first seed.
RuntimeReport run_runtime_experiment(const Dataset& source, const ExperimentConfig& config);

struct LearningCurve {
  std::string name;  // "falkon-<algorithm>"
  Index dictionary_size = 0;
  std::vector<double> auc;    // entry t: after t CG iterations (t = 0 is alpha = 0)
  std::vector<double> error;  // test classification error, same indexing
  int iterations_to_99 = 0;   // first t with auc[t] >= 0.99 auc.back()
  double seconds = 0.0;
};

struct LearningSeedResult {
  std::uint64_t seed = 0;
  Index n_train = 0;
  Index n_test = 0;
  LearningCurve sampled;  // dictionary from config.algorithm at lambda_bless
  LearningCurve uniform;  // uniform dictionary of the same size
};

struct LearningReport {
  ExperimentConfig config;
  std::vector<LearningSeedResult> seeds;
  double median_iterations_sampled = 0.0;
  double median_iterations_uniform = 0.0;
};

/// Learning protocol: per seed, split the data, sample centres at
/// lambda_bless, train FALKON at lambda_falkon for cg_iters iterations and
/// record test AUC and classification error after each one; repeat with a
/// uniform dictionary of the same size. Labels must take two values.
LearningReport run_learning_experiment(const Dataset& data, const ExperimentConfig& config);

/// Seeded train/test split: a permutation of [n] cut at round(split * n),
/// both parts non-empty.
std::pair<IndexList, IndexList> train_test_split(Index n, double split, std::uint64_t seed);

}  // namespace blesskit
