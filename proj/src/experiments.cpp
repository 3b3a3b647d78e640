#include "blesskit/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <string>

#include "blesskit/baselines.hpp"
#include "blesskit/error.hpp"
#include "blesskit/metrics.hpp"
#include "blesskit/parallel.hpp"
#include "blesskit/rng.hpp"

namespace blesskit {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

constexpr std::uint64_t kSplitStream = 0x73706c6974ULL;

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

// Runs body(k) for k in [0, count) on up to thread_count() threads and
// rethrows the first failure (lowest k) afterwards.
template <typename Body>
void for_each_seed(std::size_t count, Body body) {
  std::vector<std::exception_ptr> errors(count);
  const int threads = std::max(1, std::min<int>(thread_count(), static_cast<int>(count)));
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::size_t k = 0; k < count; ++k) {
    try {
      body(k);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

KernelSpec make_kernel(const ExperimentConfig& config, const Dataset& data) {
  return parse_kernel_family(config.kernel) == KernelFamily::gaussian
             ? KernelSpec::gaussian(config.sigma)
             : KernelSpec::linear(data);
}

SampleOutcome sample_dictionary(const Dataset& data, const KernelSpec& spec, Algorithm algo,
                                double lambda, const ExperimentConfig& config,
                                std::uint64_t seed) {
  const Index n = data.size();
  BlessParams params = config.bless;
  params.seed = seed;
  SampleOutcome out;
  const auto start = Clock::now();
  switch (algo) {
    case Algorithm::bless:
    case Algorithm::bless_r: {
      DictionaryPath path = algo == Algorithm::bless ? bless(data, spec, lambda, params)
                                                     : bless_r(data, spec, lambda, params);
      out.dictionary = path.final_level();
      out.path = std::move(path);
      break;
    }
    case Algorithm::uniform: {
      Index m = config.dictionary_size;
      if (m == 0) m = std::min<Index>(n, static_cast<Index>(std::ceil(1.0 / lambda)));
      out.dictionary = uniform_dict(data, m, lambda, seed);
      break;
    }
    case Algorithm::two_pass: {
      const Index m1 = config.first_pass_size > 0 ? config.first_pass_size
                                                  : default_two_pass_first_size(lambda, n);
      out.dictionary = config.dictionary_size > 0
                           ? two_pass(data, spec, lambda, m1, config.dictionary_size, seed)
                           : two_pass_auto(data, spec, lambda, m1, params.q2, seed);
      break;
    }
    case Algorithm::exact_rls:
      out.dictionary =
          config.dictionary_size > 0
              ? exact_rls_dict(data, spec, lambda, config.dictionary_size, seed, config.oracle_cap)
              : exact_rls_dict_auto(data, spec, lambda, params.q2, seed, config.oracle_cap);
      break;
    case Algorithm::full:
      out.dictionary = Dictionary::full(n, lambda);
      break;
  }
  out.seconds = seconds_since(start);
  return out;
}

ScoreReport run_scores_experiment(const Dataset& data, const ExperimentConfig& config) {
  config.validate();
  const KernelSpec spec = make_kernel(config, data);
  const Index n = data.size();
  const double lambda = config.lambda;

  ScoreReport report;
  report.config = config;
  report.n = n;
  const ScoreVector exact = exact_scores(data, spec, lambda, config.oracle_cap);
  report.exact = exact.values;
  const ScoreSummary summary = score_summaries(exact, n);
  report.d_eff = summary.d_eff;
  report.d_inf = summary.d_inf;

  report.seeds.resize(config.seeds.size());
  const IndexList all = iota_indices(n);
  for_each_seed(config.seeds.size(), [&](std::size_t k) {
    ScoreSeedResult& r = report.seeds[k];
    r.seed = config.seeds[k];
    const auto start = Clock::now();
    SampleOutcome sample = sample_dictionary(data, spec, config.algorithm, lambda, config, r.seed);
    const GeneratorHandle handle = prepare_generator(data, spec, sample.dictionary, lambda);
    const ScoreVector approx = oos_scores(handle, all, lambda);
    r.seconds = seconds_since(start);
    r.dictionary_size = sample.dictionary.size();
    r.path = std::move(sample.path);
    r.approx = approx.values;
    r.clamped = approx.clamped;
    r.ratios.resize(n);
    for (Index i = 0; i < n; ++i) {
      const double e = exact.values(i);
      const double a = approx.values(i);
      r.ratios(i) = (e == 0.0 && a == 0.0) ? 1.0 : a / e;
      if (!std::isfinite(r.ratios(i))) {
        throw NumericError("point " + std::to_string(i) + " has exact score 0 but approximate " +
                           std::to_string(a));
      }
    }
    const std::vector<double> ratios = to_std(r.ratios);
    r.mean = r.ratios.mean();
    r.q05 = quantile(ratios, 0.05);
    r.q95 = quantile(ratios, 0.95);
    r.min = r.ratios.minCoeff();
    r.max = r.ratios.maxCoeff();
    r.sandwich = r.min >= 0.5 && r.max <= 2.0;
  });

  std::vector<double> pooled;
  std::vector<double> seed_means;
  pooled.reserve(static_cast<std::size_t>(n) * report.seeds.size());
  for (const auto& r : report.seeds) {
    pooled.insert(pooled.end(), r.ratios.data(), r.ratios.data() + r.ratios.size());
    seed_means.push_back(r.mean);
    if (r.sandwich) ++report.sandwich_seeds;
  }
  if (!pooled.empty()) {
    double total = 0.0;
    for (double v : pooled) total += v;
    report.mean = total / static_cast<double>(pooled.size());
    report.q05 = quantile(pooled, 0.05);
    report.q95 = quantile(pooled, 0.95);
    report.median_seed_mean = median(seed_means);
  }
  return report;
}

RuntimeReport run_runtime_experiment(const Dataset& source, const ExperimentConfig& config) {
  config.validate();
  std::vector<Index> grid = config.n_grid;
  if (grid.empty()) grid.push_back(source.size());
  for (Index n : grid) {
    if (n > source.size()) {
      throw InvalidArgument("n_grid entry " + std::to_string(n) + " exceeds the source size " +
                            std::to_string(source.size()));
    }
  }
  std::vector<Algorithm> algos = config.algorithms;
  if (algos.empty()) algos.push_back(config.algorithm);
  const std::uint64_t seed = config.seeds.front();

  RuntimeReport report;
  report.config = config;
  for (Algorithm algo : algos) {
    RuntimeSeries series;
    series.algorithm = algo;
    for (Index n : grid) {
      const Dataset data = source.subset(iota_indices(n));
      const KernelSpec spec = make_kernel(config, data);
      RuntimeCell cell;
      cell.n = n;
      const SampleOutcome warm = sample_dictionary(data, spec, algo, config.lambda, config, seed);
      cell.dictionary_size = warm.dictionary.size();
      if (warm.seconds >= config.single_run_seconds) {
        cell.single_run = true;
        cell.samples.push_back(warm.seconds);
      } else {
        for (int r = 0; r < config.repeats; ++r) {
          cell.samples.push_back(
              sample_dictionary(data, spec, algo, config.lambda, config, seed).seconds);
        }
      }
      cell.seconds = median(cell.samples);
      series.cells.push_back(std::move(cell));
    }
    double lo = series.cells.front().seconds;
    double hi = lo;
    for (const auto& c : series.cells) {
      lo = std::min(lo, c.seconds);
      hi = std::max(hi, c.seconds);
    }
    const auto by_n = std::minmax_element(
        series.cells.begin(), series.cells.end(),
        [](const RuntimeCell& a, const RuntimeCell& b) { return a.n < b.n; });
    series.ratio = by_n.second->seconds / by_n.first->seconds;
    series.spread = hi / lo;
    report.series.push_back(std::move(series));
  }
  return report;
}

std::pair<IndexList, IndexList> train_test_split(Index n, double split, std::uint64_t seed) {
  if (n < 2) throw InvalidArgument("a train/test split needs at least two points");
  if (!(split > 0.0 && split < 1.0)) throw InvalidArgument("split must lie in (0, 1)");
  CounterRng rng(seed, kSplitStream);
  IndexList perm = iota_indices(n);
  for (Index k = n - 1; k > 0; --k) {
    const auto j = static_cast<Index>(rng.below(static_cast<std::uint64_t>(k + 1)));
    std::swap(perm[static_cast<std::size_t>(k)], perm[static_cast<std::size_t>(j)]);
  }
  const Index cut = std::clamp<Index>(static_cast<Index>(std::llround(split * static_cast<double>(n))),
                                      1, n - 1);
  return {IndexList(perm.begin(), perm.begin() + cut), IndexList(perm.begin() + cut, perm.end())};
}

namespace {

LearningCurve learning_curve(const Dataset& train, const Dataset& test, const KernelSpec& spec,
                             const Dictionary& dict, const ExperimentConfig& config,
                             std::string name) {
  LearningCurve curve;
  curve.name = std::move(name);
  curve.dictionary_size = dict.size();
  FalkonOptions options;
  options.iterations = config.cg_iters;
  options.keep_snapshots = true;
  const auto start = Clock::now();
  const FalkonModel model = falkon_train(train, spec, dict, config.falkon_lambda(), options);
  curve.seconds = seconds_since(start);

  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(test.size());
  curve.auc.push_back(auc(zero, test.labels()));
  curve.error.push_back(classification_error(zero, test.labels()));
  for (const auto& alpha : model.snapshots) {
    const Eigen::VectorXd scores = predict(spec, model.center_points, alpha, test.points());
    curve.auc.push_back(auc(scores, test.labels()));
    curve.error.push_back(classification_error(scores, test.labels()));
  }
  const double target = 0.99 * curve.auc.back();
  curve.iterations_to_99 = static_cast<int>(curve.auc.size()) - 1;
  for (std::size_t t = 0; t < curve.auc.size(); ++t) {
    if (curve.auc[t] >= target) {
      curve.iterations_to_99 = static_cast<int>(t);
      break;
    }
  }
  return curve;
}

}  // namespace

LearningReport run_learning_experiment(const Dataset& data, const ExperimentConfig& config) {
  config.validate();
  const Dataset labeled(data.points(), binary_labels(data.labels()));
  const KernelSpec spec = make_kernel(config, labeled);

  LearningReport report;
  report.config = config;
  report.seeds.resize(config.seeds.size());
  for_each_seed(config.seeds.size(), [&](std::size_t k) {
    LearningSeedResult& r = report.seeds[k];
    r.seed = config.seeds[k];
    const auto [train_idx, test_idx] = train_test_split(labeled.size(), config.split, r.seed);
    const Dataset train = labeled.subset(train_idx);
    const Dataset test = labeled.subset(test_idx);
    r.n_train = train.size();
    r.n_test = test.size();

    const SampleOutcome sample =
        sample_dictionary(train, spec, config.algorithm, config.bless_lambda(), config, r.seed);
    r.sampled = learning_curve(train, test, spec, sample.dictionary, config,
                               "falkon-" + to_string(config.algorithm));
    const Index m = std::min(sample.dictionary.size(), train.size());
    const Dictionary uni = uniform_dict(train, m, config.bless_lambda(), r.seed);
    r.uniform = learning_curve(train, test, spec, uni, config, "falkon-uniform");
  });

  std::vector<double> sampled_iters;
  std::vector<double> uniform_iters;
  for (const auto& r : report.seeds) {
    sampled_iters.push_back(r.sampled.iterations_to_99);
    uniform_iters.push_back(r.uniform.iterations_to_99);
  }
  if (!report.seeds.empty()) {
    report.median_iterations_sampled = median(sampled_iters);
    report.median_iterations_uniform = median(uniform_iters);
  }
  return report;
}

}  // namespace blesskit
