#include "blesskit/report.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

#include "blesskit/error.hpp"

namespace blesskit {
namespace {

Json header(const char* kind, const ExperimentConfig& config) {
  Json j;
  j["report"] = kind;
  j["version"] = kVersion;
  j["config"] = to_json(config);
  // Where the report goes is not part of what produced it.
  j["config"].erase("out");
  j["config"].erase("out_format");
  j["seeds"] = config.seeds;
  return j;
}

Json numbers(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

std::string num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Json curve_json(const LearningCurve& c, bool timings) {
  Json j;
  j["name"] = c.name;
  j["dictionary_size"] = c.dictionary_size;
  j["iterations_to_99"] = c.iterations_to_99;
  j["auc"] = c.auc;
  j["error"] = c.error;
  if (timings) j["seconds"] = c.seconds;
  return j;
}

template <typename Report>
void emit(const Report& report, const std::string& path, const std::string& format) {
  std::ostringstream out;
  if (format == "json") {
    out << to_json(report).dump(2) << '\n';
  } else if (format == "csv") {
    write_csv(report, out);
  } else {
    throw InvalidArgument("report format must be json or csv, got '" + format + "'");
  }
  write_text(out.str(), path);
}

}  // namespace

Json to_json(const ScoreReport& r) {
  const bool timings = r.config.include_timings;
  Json j = header("scores", r.config);
  Json summary;
  summary["n"] = r.n;
  summary["d_eff"] = r.d_eff;
  summary["d_inf"] = r.d_inf;
  summary["mean"] = r.mean;
  summary["q05"] = r.q05;
  summary["q95"] = r.q95;
  summary["median_seed_mean"] = r.median_seed_mean;
  summary["sandwich_seeds"] = r.sandwich_seeds;
  j["summary"] = std::move(summary);
  j["exact"] = numbers(r.exact);
  Json results = Json::array();
  for (const auto& s : r.seeds) {
    Json e;
    e["seed"] = s.seed;
    e["dictionary_size"] = s.dictionary_size;
    e["mean"] = s.mean;
    e["q05"] = s.q05;
    e["q95"] = s.q95;
    e["min"] = s.min;
    e["max"] = s.max;
    e["sandwich"] = s.sandwich;
    e["clamped"] = s.clamped;
    if (timings) e["seconds"] = s.seconds;
    if (s.path) e["path"] = to_json(*s.path, timings);
    e["approx"] = numbers(s.approx);
    e["ratios"] = numbers(s.ratios);
    results.push_back(std::move(e));
  }
  j["results"] = std::move(results);
  return j;
}

Json to_json(const RuntimeReport& r) {
  Json j = header("runtime", r.config);
  Json series = Json::array();
  for (const auto& s : r.series) {
    Json e;
    e["algorithm"] = to_string(s.algorithm);
    e["ratio"] = s.ratio;
    e["spread"] = s.spread;
    Json cells = Json::array();
    for (const auto& c : s.cells) {
      Json cj;
      cj["n"] = c.n;
      cj["seconds"] = c.seconds;
      cj["samples"] = c.samples;
      cj["single_run"] = c.single_run;
      cj["dictionary_size"] = c.dictionary_size;
      cells.push_back(std::move(cj));
    }
    e["cells"] = std::move(cells);
    series.push_back(std::move(e));
  }
  j["series"] = std::move(series);
  return j;
}

Json to_json(const LearningReport& r) {
  const bool timings = r.config.include_timings;
  Json j = header("learning", r.config);
  Json summary;
  summary["median_iterations_sampled"] = r.median_iterations_sampled;
  summary["median_iterations_uniform"] = r.median_iterations_uniform;
  j["summary"] = std::move(summary);
  Json results = Json::array();
  for (const auto& s : r.seeds) {
    Json e;
    e["seed"] = s.seed;
    e["n_train"] = s.n_train;
    e["n_test"] = s.n_test;
    e["sampled"] = curve_json(s.sampled, timings);
    e["uniform"] = curve_json(s.uniform, timings);
    results.push_back(std::move(e));
  }
  j["results"] = std::move(results);
  return j;
}

void write_csv(const ScoreReport& r, std::ostream& out) {
  out << "seed,index,exact,approx,ratio\n";
  for (const auto& s : r.seeds) {
    for (Index i = 0; i < s.ratios.size(); ++i) {
      out << s.seed << ',' << i << ',' << num(r.exact(i)) << ',' << num(s.approx(i)) << ','
          << num(s.ratios(i)) << '\n';
    }
  }
}

void write_csv(const RuntimeReport& r, std::ostream& out) {
  out << "algorithm,n,seconds,repeats,single_run,dictionary_size\n";
  for (const auto& s : r.series) {
    for (const auto& c : s.cells) {
      out << to_string(s.algorithm) << ',' << c.n << ',' << num(c.seconds) << ','
          << c.samples.size() << ',' << (c.single_run ? 1 : 0) << ',' << c.dictionary_size << '\n';
    }
  }
}

void write_csv(const LearningReport& r, std::ostream& out) {
  out << "seed,curve,iteration,auc,error\n";
  for (const auto& s : r.seeds) {
    for (const LearningCurve* c : {&s.sampled, &s.uniform}) {
      for (std::size_t t = 0; t < c->auc.size(); ++t) {
        out << s.seed << ',' << c->name << ',' << t << ',' << num(c->auc[t]) << ','
            << num(c->error[t]) << '\n';
      }
    }
  }
}

void emit_report(const ScoreReport& report, const std::string& path, const std::string& format) {
  emit(report, path, format);
}
void emit_report(const RuntimeReport& report, const std::string& path, const std::string& format) {
  emit(report, path, format);
}
void emit_report(const LearningReport& report, const std::string& path,
                 const std::string& format) {
  emit(report, path, format);
}

void write_text(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw IoError("write to stdout failed");
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  out.close();
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace blesskit
