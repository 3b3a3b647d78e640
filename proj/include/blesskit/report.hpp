#pragma once

#include <iosfwd>
#include <string>

#include "blesskit/experiments.hpp"
#include "blesskit/serialize.hpp"

namespace blesskit {

/// JSON form of a report: kind, library version, the resolved config,
/// the seed list, a summary block and per-seed (or per-series) results.
/// Wall-clock fields are left out when config.include_timings is false.
Json to_json(const ScoreReport& report);
Json to_json(const RuntimeReport& report);
Json to_json(const LearningReport& report);

/// Flat CSV with a header row:
///   scores:   seed,index,exact,approx,ratio      (points x seeds rows)
///   runtime:  algorithm,n,seconds,repeats,single_run,dictionary_size
///   learning: seed,curve,iteration,auc,error
void write_csv(const ScoreReport& report, std::ostream& out);
void write_csv(const RuntimeReport& report, std::ostream& out);
void write_csv(const LearningReport& report, std::ostream& out);

/// Writes the report to `path` ("-" for stdout) as "json" or "csv".
/// Throws InvalidArgument for other formats and IoError on write failure.
void emit_report(const ScoreReport& report, const std::string& path, const std::string& format);
void emit_report(const RuntimeReport& report, const std::string& path, const std::string& format);
void emit_report(const LearningReport& report, const std::string& path, const std::string& format);

/// Writes `text` to `path`, or to stdout for "-".
void write_text(const std::string& text, const std::string& path);

}  // namespace blesskit
