// blesskit: leverage score sampling, FALKON training and the benchmark
// protocols from the command line.
//
// Exit codes: 0 ok, 2 bad configuration, 3 bad or unreadable data,
// 4 numerical failure.

#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "blesskit/dataset_io.hpp"
#include "blesskit/error.hpp"
#include "blesskit/experiments.hpp"
#include "blesskit/parallel.hpp"
#include "blesskit/report.hpp"
#include "blesskit/serialize.hpp"
#include "blesskit/synthetic.hpp"

namespace {

using namespace blesskit;

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

// Flags left unset keep the value from --config (or the built-in default).
struct Flags {
  std::optional<std::string> config_path;
  std::optional<std::string> data;
  std::optional<std::string> format;
  std::optional<int> label_column;
  std::optional<std::string> kernel;
  std::optional<double> sigma;
  std::optional<std::string> algo;
  std::optional<double> lambda;
  std::optional<double> lambda_bless;
  std::optional<double> lambda_falkon;
  std::optional<double> q;
  std::optional<double> q1;
  std::optional<double> q2;
  std::optional<double> t_accuracy;
  std::optional<Index> dict_size;
  std::optional<Index> first_pass_size;
  std::optional<int> iters;
  std::optional<std::uint64_t> seed;
  std::vector<std::uint64_t> seeds;
  std::optional<std::string> out;
  std::optional<std::string> out_format;
  std::optional<Index> oracle_cap;
  std::optional<double> split;
  std::vector<Index> grid;
  std::vector<std::string> algos;
  std::optional<int> repeats;
  bool omit_timings = false;
  int threads = 0;
};

void add_data_options(CLI::App* app, Flags& f) {
  app->add_option("--data", f.data, "Input dataset path");
  app->add_option("--format", f.format, "Dataset format: csv or libsvm (default csv)");
  app->add_option("--label-column", f.label_column,
                  "0-based csv label column, -1 for none (default 0)");
}

void add_kernel_options(CLI::App* app, Flags& f) {
  app->add_option("--kernel", f.kernel, "Kernel family: gaussian or linear (default gaussian)");
  app->add_option("--sigma", f.sigma, "Gaussian bandwidth (default 1)");
}

void add_sampler_options(CLI::App* app, Flags& f) {
  app->add_option("--algo", f.algo,
                  "Sampler: bless, bless-r, two-pass, uniform, exact-rls, full (default bless)");
  app->add_option("--q", f.q, "Regularization path step (default 2)");
  app->add_option("--q1", f.q1, "BLESS candidate oversampling (default 4)");
  app->add_option("--q2", f.q2, "Dictionary oversampling (default 20)");
  app->add_option("--t-accuracy", f.t_accuracy, "Target accuracy t (default 1)");
  app->add_option("--dict-size", f.dict_size, "Dictionary size for uniform/exact-rls/two-pass");
  app->add_option("--first-pass-size", f.first_pass_size, "Two-pass first pass size");
  app->add_option("--oracle-cap", f.oracle_cap, "Largest n for dense exact computations");
}

void add_seed_options(CLI::App* app, Flags& f) {
  app->add_option("--seed", f.seed, "Single RNG seed");
  app->add_option("--seeds", f.seeds, "Seed list, e.g. 0,1,2")->delimiter(',');
}

void add_output_options(CLI::App* app, Flags& f, bool report) {
  app->add_option("--out", f.out, "Output path, - for stdout (default -)");
  if (report) {
    app->add_option("--out-format", f.out_format, "Report format: json or csv (default json)");
    app->add_flag("--omit-timings", f.omit_timings, "Leave wall-clock fields out of the report");
  }
}

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config_path, "JSON experiment config; flags override it");
  app->add_option("--threads", f.threads, "Thread cap (overrides BLESSKIT_THREADS)");
}

template <typename T>
void apply(const std::optional<T>& flag, T& target) {
  if (flag) target = *flag;
}

ExperimentConfig resolve(const Flags& f) {
  ExperimentConfig c;
  if (f.config_path) c = config_from_json(read_json_file(*f.config_path));
  apply(f.data, c.data_path);
  if (f.format) c.format = parse_data_format(*f.format);
  apply(f.label_column, c.label_column);
  apply(f.kernel, c.kernel);
  apply(f.sigma, c.sigma);
  if (f.algo) c.algorithm = parse_algorithm(*f.algo);
  apply(f.lambda, c.lambda);
  if (f.lambda_bless) c.lambda_bless = *f.lambda_bless;
  if (f.lambda_falkon) c.lambda_falkon = *f.lambda_falkon;
  apply(f.q, c.bless.q);
  apply(f.q1, c.bless.q1);
  apply(f.q2, c.bless.q2);
  apply(f.t_accuracy, c.bless.accuracy_t);
  apply(f.dict_size, c.dictionary_size);
  apply(f.first_pass_size, c.first_pass_size);
  apply(f.iters, c.cg_iters);
  if (f.seed && !f.seeds.empty()) throw InvalidArgument("give either --seed or --seeds");
  if (f.seed) c.seeds = {*f.seed};
  if (!f.seeds.empty()) c.seeds = f.seeds;
  apply(f.out, c.out);
  apply(f.out_format, c.out_format);
  apply(f.oracle_cap, c.oracle_cap);
  apply(f.split, c.split);
  if (!f.grid.empty()) c.n_grid = f.grid;
  if (!f.algos.empty()) {
    c.algorithms.clear();
    for (const auto& a : f.algos) c.algorithms.push_back(parse_algorithm(a));
  }
  apply(f.repeats, c.repeats);
  if (f.omit_timings) c.include_timings = false;
  c.validate();
  return c;
}

Dataset load(const ExperimentConfig& c) {
  if (c.data_path.empty()) throw InvalidArgument("--data is required");
  return load_dataset(c.data_path, c.format, c.label_column);
}

std::string output_path(const ExperimentConfig& c) { return c.out.empty() ? "-" : c.out; }

void emit_json(const Json& j, const std::string& path) { write_text(j.dump(2) + "\n", path); }

int cmd_scores(const Flags& f) {
  const ExperimentConfig c = resolve(f);
  const Dataset data = load(c);
  emit_report(run_scores_experiment(data, c), output_path(c), c.out_format);
  return 0;
}

int cmd_sample(const Flags& f) {
  const ExperimentConfig c = resolve(f);
  const Dataset data = load(c);
  const KernelSpec spec = make_kernel(c, data);
  const std::uint64_t seed = c.seeds.front();
  const SampleOutcome s = sample_dictionary(data, spec, c.algorithm, c.lambda, c, seed);
  Json j;
  j["version"] = kVersion;
  j["algorithm"] = to_string(c.algorithm);
  j["kernel"] = to_json(spec);
  j["n"] = data.size();
  j["lambda"] = c.lambda;
  j["seed"] = seed;
  j["dictionary"] = to_json(s.dictionary);
  if (s.path) j["path"] = to_json(*s.path, false);
  emit_json(j, output_path(c));
  return 0;
}

int cmd_train(const Flags& f, const std::optional<std::string>& dict_path) {
  ExperimentConfig c = resolve(f);
  const Dataset data = load(c);
  const KernelSpec spec = make_kernel(c, data);
  Dictionary dict;
  if (dict_path) {
    const Json doc = read_json_file(*dict_path);
    dict = dictionary_from_json(doc.contains("dictionary") ? doc.at("dictionary") : doc);
    dict.validate(data.size());
  } else {
    dict = sample_dictionary(data, spec, c.algorithm, c.bless_lambda(), c, c.seeds.front())
               .dictionary;
  }
  FalkonOptions options;
  options.iterations = c.cg_iters;
  const FalkonModel model = falkon_train(data, spec, dict, c.falkon_lambda(), options);
  Json j = to_json(model);
  j["version"] = kVersion;
  emit_json(j, output_path(c));
  return 0;
}

int cmd_predict(const Flags& f, const std::string& model_path) {
  const ExperimentConfig c = resolve(f);
  const FalkonModel model = model_from_json(read_json_file(model_path));
  const Dataset data = load(c);
  const Eigen::VectorXd scores = predict(model, data.points());
  std::ostringstream out;
  if (c.out_format == "json") {
    Json j = Json::array();
    for (Index i = 0; i < scores.size(); ++i) j.push_back(scores(i));
    out << j.dump() << '\n';
  } else {
    out.precision(17);
    for (Index i = 0; i < scores.size(); ++i) out << scores(i) << '\n';
  }
  write_text(out.str(), output_path(c));
  return 0;
}

int cmd_bench(const Flags& f) {
  const ExperimentConfig c = resolve(f);
  const Dataset data = load(c);
  emit_report(run_runtime_experiment(data, c), output_path(c), c.out_format);
  return 0;
}

int cmd_learn(const Flags& f) {
  const ExperimentConfig c = resolve(f);
  const Dataset data = load(c);
  emit_report(run_learning_experiment(data, c), output_path(c), c.out_format);
  return 0;
}

struct SynthFlags {
  std::string kind = "gaussian";
  Index n = 1000;
  Index d = 2;
  double separation = 10.0;
  std::uint64_t seed = 0;
  std::string out = "-";
  std::string format = "csv";
};

int cmd_synth(const SynthFlags& s) {
  std::optional<Dataset> data;
  if (s.kind == "gaussian") {
    data.emplace(gaussian_points(s.n, s.d, s.seed));
  } else if (s.kind == "blobs") {
    data.emplace(gaussian_blobs(s.n, s.d, s.separation, s.seed));
  } else if (s.kind == "halo") {
    HaloOptions o;
    o.d = s.d;
    data.emplace(halo_task(s.n, s.seed, o));
  } else {
    throw InvalidArgument("unknown synthetic kind '" + s.kind + "' (gaussian, blobs, halo)");
  }
  std::ostringstream out;
  write_dataset(*data, out, parse_data_format(s.format));
  write_text(out.str(), s.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bottom-up leverage score sampling and FALKON kernel ridge regression"};
  app.require_subcommand(1);
  Flags f;
  std::string model_path;
  std::optional<std::string> dict_path;
  SynthFlags synth;

  auto* scores = app.add_subcommand("scores", "Approximate vs exact leverage scores (R-ACC)");
  add_common(scores, f);
  add_data_options(scores, f);
  add_kernel_options(scores, f);
  add_sampler_options(scores, f);
  add_seed_options(scores, f);
  add_output_options(scores, f, true);
  scores->add_option("--lambda", f.lambda, "Target regularization (default 1e-3)");

  auto* sample = app.add_subcommand("sample", "Sample a dictionary and write it as JSON");
  add_common(sample, f);
  add_data_options(sample, f);
  add_kernel_options(sample, f);
  add_sampler_options(sample, f);
  add_seed_options(sample, f);
  add_output_options(sample, f, false);
  sample->add_option("--lambda", f.lambda, "Target regularization (default 1e-3)");

  auto* train = app.add_subcommand("train", "Train FALKON on a sampled or given dictionary");
  add_common(train, f);
  add_data_options(train, f);
  add_kernel_options(train, f);
  add_sampler_options(train, f);
  add_seed_options(train, f);
  add_output_options(train, f, false);
  train->add_option("--dict", dict_path, "Dictionary JSON from `sample` (else sampled inline)");
  train->add_option("--lambda", f.lambda, "Regularization for both stages when not split");
  train->add_option("--lambda-bless", f.lambda_bless, "Regularization for sampling");
  train->add_option("--lambda-falkon", f.lambda_falkon, "Regularization for the solver");
  train->add_option("--iters", f.iters, "Conjugate gradient iterations (default 20)");

  auto* pred = app.add_subcommand("predict", "Evaluate a trained model on a dataset");
  add_common(pred, f);
  add_data_options(pred, f);
  pred->add_option("--model", model_path, "Model JSON from `train`")->required();
  pred->add_option("--out", f.out, "Output path, - for stdout (default -)");
  pred->add_option("--out-format", f.out_format, "json or csv (one value per line)");

  auto* bench = app.add_subcommand("bench", "Sampling wall time over a grid of n");
  add_common(bench, f);
  add_data_options(bench, f);
  add_kernel_options(bench, f);
  add_sampler_options(bench, f);
  add_seed_options(bench, f);
  add_output_options(bench, f, true);
  bench->add_option("--lambda", f.lambda, "Target regularization (default 1e-3)");
  bench->add_option("--grid", f.grid, "Comma separated n values")->delimiter(',');
  bench->add_option("--algos", f.algos, "Comma separated samplers")->delimiter(',');
  bench->add_option("--repeats", f.repeats, "Timed repeats per cell (default 3)");

  auto* learn = app.add_subcommand("learn", "Test AUC / error per CG iteration");
  add_common(learn, f);
  add_data_options(learn, f);
  add_kernel_options(learn, f);
  add_sampler_options(learn, f);
  add_seed_options(learn, f);
  add_output_options(learn, f, true);
  learn->add_option("--lambda-bless", f.lambda_bless, "Regularization for sampling");
  learn->add_option("--lambda-falkon", f.lambda_falkon, "Regularization for the solver");
  learn->add_option("--iters", f.iters, "Conjugate gradient iterations (default 20)");
  learn->add_option("--split", f.split, "Training fraction (default 0.8)");

  auto* syn = app.add_subcommand("synth", "Write a synthetic dataset");
  syn->add_option("--kind", synth.kind, "gaussian, blobs or halo")->capture_default_str();
  syn->add_option("--n", synth.n, "Number of points")->capture_default_str();
  syn->add_option("--d", synth.d, "Dimension")->capture_default_str();
  syn->add_option("--separation", synth.separation, "Blob centre distance")->capture_default_str();
  syn->add_option("--seed", synth.seed, "RNG seed")->capture_default_str();
  syn->add_option("--out", synth.out, "Output path, - for stdout")->capture_default_str();
  syn->add_option("--format", synth.format, "csv or libsvm")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (f.threads > 0) set_thread_count(f.threads);
    if (*scores) return cmd_scores(f);
    if (*sample) return cmd_sample(f);
    if (*train) return cmd_train(f, dict_path);
    if (*pred) return cmd_predict(f, model_path);
    if (*bench) return cmd_bench(f);
    if (*learn) return cmd_learn(f);
    if (*syn) return cmd_synth(synth);
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ResourceLimit& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const FormatError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const IoError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return 0;
}
