#include "sparsedrift/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "sparsedrift/errors.hpp"

namespace sparsedrift {

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool is_missing(std::string_view field) { return field.empty() || field == "NA"; }

double parse_number(std::string_view field, std::size_t row, std::size_t column) {
  double value = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value))
    throw ParseError("non-numeric cell '" + std::string(field) + "' at row " + std::to_string(row) +
                         ", column " + std::to_string(column),
                     row, column);
  return value;
}

}  // namespace

std::string format_double(double x) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, x);
  return std::string(buffer, ptr);
}

CsvStream read_stream_csv(std::istream& in, const CsvOptions& options) {
  std::string line;
  if (!std::getline(in, line) || trim(line).empty()) throw SchemaError("csv: empty file or missing header");
  CsvStream result;
  for (auto field : split(trim(line))) result.header.emplace_back(trim(field));
  const std::size_t width = result.header.size();
  if (width < 2) throw SchemaError("csv: need at least one feature column and a label column");
  const int label_signed = options.label_column < 0 ? static_cast<int>(width) + options.label_column
                                                    : options.label_column;
  if (label_signed < 0 || label_signed >= static_cast<int>(width))
    throw SchemaError("csv: label column out of range");
  const auto label_column = static_cast<std::size_t>(label_signed);

  std::vector<std::vector<double>> rows;
  std::vector<std::uint8_t> labels;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    if (fields.size() != width)
      throw ParseError("csv: row " + std::to_string(row) + " has " + std::to_string(fields.size()) +
                           " fields, header has " + std::to_string(width),
                       row, 0);
    std::vector<double> values;
    values.reserve(width - 1);
    for (std::size_t c = 0; c < width; ++c) {
      const auto field = trim(fields[c]);
      if (c == label_column) {
        if (is_missing(field)) throw SchemaError("csv: missing label at row " + std::to_string(row));
        const double label = parse_number(field, row, c + 1);
        if (label != 0.0 && label != 1.0)
          throw ParseError("csv: label must be 0 or 1 at row " + std::to_string(row), row, c + 1);
        labels.push_back(static_cast<std::uint8_t>(label));
      } else {
        values.push_back(is_missing(field) ? std::numeric_limits<double>::quiet_NaN()
                                           : parse_number(field, row, c + 1));
      }
    }
    rows.push_back(std::move(values));
  }

  Eigen::MatrixXd values(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width - 1));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j + 1 < width; ++j)
      values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  result.stream.features = MaskedMatrix(values);
  result.stream.labels = std::move(labels);

  std::string label_name = result.header[label_column];
  result.header.erase(result.header.begin() + static_cast<std::ptrdiff_t>(label_column));
  result.header.push_back(std::move(label_name));
  return result;
}

CsvStream read_stream_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw SchemaError("csv: cannot open " + path.string());
  return read_stream_csv(in, options);
}

void write_stream_csv(std::ostream& out, const LabeledStream& stream, const std::vector<std::string>& header) {
  const auto& x = stream.features;
  if (static_cast<std::size_t>(x.rows()) != stream.size())
    throw SpecError("csv: feature rows and labels differ in length");
  if (header.empty()) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) out << 'x' << j << ',';
    out << "label\n";
  } else {
    if (header.size() != static_cast<std::size_t>(x.cols()) + 1) throw SpecError("csv: header width mismatch");
    for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
    out << '\n';
  }
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) out << (x.observed(i, j) ? format_double(x(i, j)) : "NA") << ',';
    out << static_cast<int>(stream.labels[static_cast<std::size_t>(i)]) << '\n';
  }
}

void write_stream_csv(const std::filesystem::path& path, const LabeledStream& stream,
                      const std::vector<std::string>& header) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_stream_csv(out, stream, header);
}

DriftSpec read_drift_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("drift file: cannot open " + path.string());
  try {
    const auto j = nlohmann::json::parse(in);
    DriftSpec drift;
    drift.positions = j.at("positions").get<std::vector<std::size_t>>();
    if (j.contains("widths")) drift.widths = j.at("widths").get<std::vector<std::size_t>>();
    if (j.contains("kind")) drift.kind = parse_drift_kind(j.at("kind").get<std::string>());
    return drift;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("drift file: ") + e.what());
  }
}

void write_drift_json(const std::filesystem::path& path, const DriftSpec& drift) {
  nlohmann::ordered_json j;
  j["positions"] = drift.positions;
  j["widths"] = drift.widths;
  j["kind"] = to_string(drift.kind);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace sparsedrift
