#include "blesskit/dataset_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <vector>

#include "blesskit/error.hpp"

namespace blesskit {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_number(std::string_view field, double& out) {
  field = trim(field);
  if (field.empty()) return false;
  if (field.front() == '+') field.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
  return ec == std::errc() && ptr == field.data() + field.size();
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw FormatError("line " + std::to_string(line) + ": " + what);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

Dataset assemble(const std::vector<std::vector<double>>& rows, std::vector<double> labels,
                 bool labeled, Index width) {
  if (rows.empty()) throw FormatError("no data rows");
  if (width < 1) throw FormatError("rows have no coordinates");
  RowMatrix pts = RowMatrix::Zero(static_cast<Index>(rows.size()), width);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t k = 0; k < rows[i].size(); ++k) {
      pts(static_cast<Index>(i), static_cast<Index>(k)) = rows[i][k];
    }
  }
  std::optional<Eigen::VectorXd> lab;
  if (labeled) lab = Eigen::Map<const Eigen::VectorXd>(labels.data(), static_cast<Index>(labels.size()));
  return Dataset(std::move(pts), std::move(lab));
}

Dataset parse_csv(std::istream& in, int label_column) {
  std::vector<std::vector<double>> rows;
  std::vector<double> labels;
  std::string line;
  std::size_t lineno = 0;
  std::size_t width = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    const auto fields = split(body, ',');
    std::vector<double> values(fields.size());
    bool numeric = true;
    for (std::size_t k = 0; k < fields.size() && numeric; ++k) {
      numeric = parse_number(fields[k], values[k]);
    }
    if (first) {
      first = false;
      width = fields.size();
      if (label_column != kNoLabel && static_cast<std::size_t>(label_column) >= width) {
        fail(lineno, "label column " + std::to_string(label_column) + " but only " +
                         std::to_string(width) + " columns");
      }
      if (!numeric) continue;  // header
    }
    if (fields.size() != width) {
      fail(lineno, "expected " + std::to_string(width) + " fields, found " +
                       std::to_string(fields.size()));
    }
    if (!numeric) fail(lineno, "non-numeric field");
    std::vector<double> coords;
    coords.reserve(width);
    for (std::size_t k = 0; k < width; ++k) {
      if (!std::isfinite(values[k])) fail(lineno, "non-finite value in column " + std::to_string(k));
      if (static_cast<int>(k) == label_column) {
        labels.push_back(values[k]);
      } else {
        coords.push_back(values[k]);
      }
    }
    rows.push_back(std::move(coords));
  }
  const Index dim = static_cast<Index>(width) - (label_column == kNoLabel ? 0 : 1);
  return assemble(rows, std::move(labels), label_column != kNoLabel, dim);
}

Dataset parse_libsvm(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::vector<double> labels;
  std::string line;
  std::size_t lineno = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view body = trim(line);
    if (const auto hash = body.find('#'); hash != std::string_view::npos) {
      body = trim(body.substr(0, hash));
    }
    if (body.empty()) continue;
    std::vector<std::string_view> tokens;
    for (auto tok : split(body, ' ')) {
      for (auto t : split(tok, '\t')) {
        if (!trim(t).empty()) tokens.push_back(trim(t));
      }
    }
    double label = 0.0;
    if (!parse_number(tokens[0], label) || !std::isfinite(label)) fail(lineno, "bad label");
    std::vector<double> row;
    std::size_t last = 0;
    for (std::size_t k = 1; k < tokens.size(); ++k) {
      const auto colon = tokens[k].find(':');
      if (colon == std::string_view::npos) fail(lineno, "expected idx:val, found '" + std::string(tokens[k]) + "'");
      const std::string_view idx_text = tokens[k].substr(0, colon);
      std::size_t idx = 0;
      const auto [ptr, ec] = std::from_chars(idx_text.data(), idx_text.data() + idx_text.size(), idx);
      if (ec != std::errc() || ptr != idx_text.data() + idx_text.size() || idx < 1) {
        fail(lineno, "bad feature index '" + std::string(idx_text) + "'");
      }
      if (idx <= last) fail(lineno, "feature indices must be strictly increasing");
      last = idx;
      double value = 0.0;
      if (!parse_number(tokens[k].substr(colon + 1), value)) {
        fail(lineno, "bad feature value '" + std::string(tokens[k].substr(colon + 1)) + "'");
      }
      if (!std::isfinite(value)) fail(lineno, "non-finite feature value");
      row.resize(idx, 0.0);
      row[idx - 1] = value;
    }
    width = std::max(width, row.size());
    rows.push_back(std::move(row));
    labels.push_back(label);
  }
  return assemble(rows, std::move(labels), true, static_cast<Index>(width));
}

}  // namespace

std::string to_string(DataFormat format) { return format == DataFormat::csv ? "csv" : "libsvm"; }

DataFormat parse_data_format(const std::string& name) {
  if (name == "csv") return DataFormat::csv;
  if (name == "libsvm") return DataFormat::libsvm;
  throw InvalidArgument("unknown data format '" + name + "' (expected csv or libsvm)");
}

Dataset parse_dataset(std::istream& in, DataFormat format, int label_column) {
  if (format == DataFormat::csv) {
    if (label_column < kNoLabel) throw InvalidArgument("label column must be >= 0 or -1");
    return parse_csv(in, label_column);
  }
  return parse_libsvm(in);
}

Dataset load_dataset(const std::string& path, DataFormat format, int label_column) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  try {
    return parse_dataset(in, format, label_column);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

namespace {

void put(std::ostream& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.write(buf, res.ptr - buf);
}

}  // namespace

void write_dataset(const Dataset& data, std::ostream& out, DataFormat format) {
  if (format == DataFormat::libsvm && !data.has_labels()) {
    throw InvalidArgument("libsvm output requires labels");
  }
  for (Index i = 0; i < data.size(); ++i) {
    bool sep = false;
    if (data.has_labels()) {
      put(out, data.labels()(i));
      sep = true;
    }
    for (Index k = 0; k < data.dim(); ++k) {
      const double v = data.points()(i, k);
      if (format == DataFormat::libsvm) {
        if (v == 0.0) continue;
        out << ' ' << (k + 1) << ':';
      } else if (sep) {
        out << ',';
      }
      put(out, v);
      sep = true;
    }
    out << '\n';
  }
}

void write_dataset(const Dataset& data, const std::string& path, DataFormat format) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_dataset(data, out, format);
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace blesskit
