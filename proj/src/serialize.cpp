#include "blesskit/serialize.hpp"

#include <fstream>
#include <set>

#include "blesskit/error.hpp"

namespace blesskit {
namespace {

Json vector_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Eigen::VectorXd vector_from(const Json& j) {
  if (!j.is_array()) throw FormatError("expected an array of numbers");
  Eigen::VectorXd v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = j[i].get<double>();
  return v;
}

template <typename T>
T field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw FormatError(std::string("missing field '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace

Json to_json(const KernelSpec& spec) {
  Json j;
  j["family"] = to_string(spec.family());
  if (spec.family() == KernelFamily::gaussian) j["sigma"] = spec.sigma();
  j["bound"] = spec.bound();
  return j;
}

KernelSpec kernel_from_json(const Json& j) {
  const auto family = field<std::string>(j, "family");
  if (family == "gaussian") return KernelSpec::gaussian(field<double>(j, "sigma"));
  if (family == "linear") return KernelSpec::linear_with_bound(field<double>(j, "bound"));
  throw FormatError("unknown kernel family '" + family + "'");
}

Json to_json(const Schedule& s) {
  Json j;
  j["lambda0"] = s.lambda0;
  j["lambda_final"] = s.lambda_final;
  j["q"] = s.q;
  j["levels"] = s.levels;
  j["lambdas"] = s.lambdas;
  return j;
}

Json to_json(const Dictionary& d) {
  Json j;
  j["level"] = d.level;
  j["lambda"] = d.lambda;
  j["size"] = d.size();
  j["indices"] = d.indices;
  j["weights"] = vector_json(d.weights);
  if (d.probs) j["probs"] = vector_json(*d.probs);
  return j;
}

Dictionary dictionary_from_json(const Json& j) {
  Dictionary d;
  d.level = j.contains("level") ? field<int>(j, "level") : 0;
  d.lambda = field<double>(j, "lambda");
  d.indices = field<IndexList>(j, "indices");
  d.weights = vector_from(j.at("weights"));
  if (j.contains("probs")) d.probs = vector_from(j.at("probs"));
  if (d.weights.size() != d.size()) throw FormatError("dictionary weights/indices length mismatch");
  return d;
}

Json to_json(const LevelDiagnostics& g, bool include_timings) {
  Json j;
  j["level"] = g.level;
  j["lambda"] = g.lambda;
  j["candidates"] = g.candidates;
  j["d_estimate"] = g.d_estimate;
  j["selected"] = g.selected;
  j["beta"] = g.beta;
  j["rejection_violations"] = g.rejection_violations;
  j["clamped_scores"] = g.clamped_scores;
  j["degenerate"] = g.degenerate;
  j["jitter"] = g.jitter;
  if (include_timings) j["seconds"] = g.seconds;
  return j;
}

Json to_json(const DictionaryPath& p, bool include_timings) {
  Json j;
  j["schedule"] = to_json(p.schedule);
  Json levels = Json::array();
  for (const auto& d : p.levels) levels.push_back(to_json(d));
  j["levels"] = std::move(levels);
  Json diags = Json::array();
  for (const auto& g : p.diagnostics) diags.push_back(to_json(g, include_timings));
  j["diagnostics"] = std::move(diags);
  return j;
}

Json to_json(const FalkonModel& m) {
  Json j;
  j["kernel"] = to_json(m.kernel);
  j["lambda"] = m.lambda;
  j["iterations"] = m.iterations;
  j["rank"] = m.rank;
  j["centers"] = m.centers;
  Json pts = Json::array();
  for (Index i = 0; i < m.center_points.rows(); ++i) {
    pts.push_back(vector_json(m.center_points.row(i).transpose()));
  }
  j["center_points"] = std::move(pts);
  j["alpha"] = vector_json(m.alpha);
  j["residual_norms"] = m.residual_norms;
  return j;
}

FalkonModel model_from_json(const Json& j) {
  FalkonModel m;
  m.kernel = kernel_from_json(j.at("kernel"));
  m.lambda = field<double>(j, "lambda");
  m.iterations = field<int>(j, "iterations");
  m.rank = j.contains("rank") ? field<Index>(j, "rank") : 0;
  m.centers = field<IndexList>(j, "centers");
  m.alpha = vector_from(j.at("alpha"));
  const Json& pts = j.at("center_points");
  if (!pts.is_array() || static_cast<Index>(pts.size()) != m.alpha.size()) {
    throw FormatError("center_points must hold one row per coefficient");
  }
  const Index d = pts.empty() ? 0 : static_cast<Index>(pts[0].size());
  m.center_points.resize(m.alpha.size(), d);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Eigen::VectorXd row = vector_from(pts[i]);
    if (row.size() != d) throw FormatError("center_points rows differ in length");
    m.center_points.row(static_cast<Index>(i)) = row.transpose();
  }
  if (j.contains("residual_norms")) m.residual_norms = field<std::vector<double>>(j, "residual_norms");
  return m;
}

Json to_json(const ExperimentConfig& c) {
  Json j;
  j["data_path"] = c.data_path;
  j["format"] = to_string(c.format);
  j["label_column"] = c.label_column;
  j["kernel"] = c.kernel;
  j["sigma"] = c.sigma;
  j["algorithm"] = to_string(c.algorithm);
  j["lambda"] = c.lambda;
  j["lambda_bless"] = c.bless_lambda();
  j["lambda_falkon"] = c.falkon_lambda();
  j["q"] = c.bless.q;
  j["q1"] = c.bless.q1;
  j["q2"] = c.bless.q2;
  j["t_accuracy"] = c.bless.accuracy_t;
  j["max_level_size"] = c.bless.max_level_size;
  j["dictionary_size"] = c.dictionary_size;
  j["first_pass_size"] = c.first_pass_size;
  j["cg_iters"] = c.cg_iters;
  j["seeds"] = c.seeds;
  j["oracle_cap"] = c.oracle_cap;
  j["split"] = c.split;
  j["n_grid"] = c.n_grid;
  Json algos = Json::array();
  for (Algorithm a : c.algorithms) algos.push_back(to_string(a));
  j["algorithms"] = std::move(algos);
  j["repeats"] = c.repeats;
  j["single_run_seconds"] = c.single_run_seconds;
  j["out"] = c.out;
  j["out_format"] = c.out_format;
  j["include_timings"] = c.include_timings;
  return j;
}

ExperimentConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
  static const std::set<std::string> known = {
      "data_path", "format", "label_column", "kernel", "sigma", "algorithm", "lambda",
      "lambda_bless", "lambda_falkon", "q", "q1", "q2", "t_accuracy", "max_level_size",
      "dictionary_size", "first_pass_size", "cg_iters", "seeds", "oracle_cap", "split", "n_grid",
      "algorithms", "repeats", "single_run_seconds", "out", "out_format", "include_timings"};
  for (const auto& item : j.items()) {
    if (!known.count(item.key())) throw InvalidArgument("unknown config key '" + item.key() + "'");
  }
  ExperimentConfig c;
  try {
    auto get = [&](const char* key, auto& target) {
      if (j.contains(key)) target = j.at(key).get<std::decay_t<decltype(target)>>();
    };
    get("data_path", c.data_path);
    if (j.contains("format")) c.format = parse_data_format(j.at("format").get<std::string>());
    get("label_column", c.label_column);
    get("kernel", c.kernel);
    get("sigma", c.sigma);
    if (j.contains("algorithm")) c.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
    get("lambda", c.lambda);
    if (j.contains("lambda_bless")) c.lambda_bless = j.at("lambda_bless").get<double>();
    if (j.contains("lambda_falkon")) c.lambda_falkon = j.at("lambda_falkon").get<double>();
    get("q", c.bless.q);
    get("q1", c.bless.q1);
    get("q2", c.bless.q2);
    get("t_accuracy", c.bless.accuracy_t);
    get("max_level_size", c.bless.max_level_size);
    get("dictionary_size", c.dictionary_size);
    get("first_pass_size", c.first_pass_size);
    get("cg_iters", c.cg_iters);
    get("seeds", c.seeds);
    get("oracle_cap", c.oracle_cap);
    get("split", c.split);
    get("n_grid", c.n_grid);
    if (j.contains("algorithms")) {
      c.algorithms.clear();
      for (const auto& a : j.at("algorithms")) c.algorithms.push_back(parse_algorithm(a.get<std::string>()));
    }
    get("repeats", c.repeats);
    get("single_run_seconds", c.single_run_seconds);
    get("out", c.out);
    get("out_format", c.out_format);
    get("include_timings", c.include_timings);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("config: ") + e.what());
  }
  return c;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path + ": " + e.what());
  }
}

void write_json_file(const Json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace blesskit
