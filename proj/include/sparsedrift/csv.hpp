#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "sparsedrift/streamgen.hpp"

namespace sparsedrift {

struct CsvOptions {
  /// Zero-based label column; negative counts from the end (-1 = last).
  int label_column = -1;
};

struct CsvStream {
  LabeledStream stream;
  /// Feature column names followed by the label column name.
  std::vector<std::string> header;
};

/// Header row, then one instance per row. Empty fields and `NA` are missing.
/// Labels must be 0 or 1. Throws ParseError (with location) for malformed
/// cells and SchemaError for an empty file or a missing label.
CsvStream read_stream_csv(std::istream& in, const CsvOptions& options = {});
CsvStream read_stream_csv(const std::filesystem::path& path, const CsvOptions& options = {});

/// Shortest round-trip formatting; missing cells as `NA`; label last.
/// An empty header writes x0..x{d-1},label.
void write_stream_csv(std::ostream& out, const LabeledStream& stream,
                      const std::vector<std::string>& header = {});
void write_stream_csv(const std::filesystem::path& path, const LabeledStream& stream,
                      const std::vector<std::string>& header = {});

/// Shortest representation that parses back to the same double.
std::string format_double(double x);

/// {"positions": [...], "widths": [...], "kind": "abrupt"|"gradual"}.
DriftSpec read_drift_json(const std::filesystem::path& path);
void write_drift_json(const std::filesystem::path& path, const DriftSpec& drift);

}  // namespace sparsedrift
