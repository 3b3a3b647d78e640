#pragma once

#include <iosfwd>
#include <string>

#include "blesskit/kernel.hpp"

namespace blesskit {

enum class DataFormat { csv, libsvm };

std::string to_string(DataFormat format);
/// Throws InvalidArgument for anything but "csv" or "libsvm".
DataFormat parse_data_format(const std::string& name);

/// Column holding the label in csv input; kNoLabel reads every column as a
/// coordinate.
inline constexpr int kNoLabel = -1;

/// Parses a dataset from a stream.
///
/// csv: comma separated, one sample per line. A first line that is not
/// entirely numeric is taken as a header. `label_column` (0-based) selects
/// the label; the other columns are coordinates.
/// libsvm: `label idx:val ...` with 1-based indices, densified to the
/// largest index seen; `label_column` is ignored.
///
/// Blank lines are skipped. Throws FormatError naming the 1-based line on
/// malformed or non-finite fields and on rows of inconsistent width.
Dataset parse_dataset(std::istream& in, DataFormat format, int label_column = 0);

/// parse_dataset on a file; IoError when it cannot be opened.
Dataset load_dataset(const std::string& path, DataFormat format, int label_column = 0);

/// Writes `data` so that load_dataset(path, format) returns the same
/// values: csv puts the label (if any) in column 0, numbers are printed
/// with round-trip precision. libsvm requires labels and omits zeros.
void write_dataset(const Dataset& data, std::ostream& out, DataFormat format);
void write_dataset(const Dataset& data, const std::string& path, DataFormat format);

}  // namespace blesskit
