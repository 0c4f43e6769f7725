#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace docrep {

/// Dense row-major document × feature matrix with column metadata.
class FeatureMatrix {
public:
  FeatureMatrix() = default;
  FeatureMatrix(std::vector<std::string> doc_ids, std::vector<std::string> column_names);

  std::size_t rows() const { return doc_ids_.size(); }
  std::size_t cols() const { return column_names_.size(); }

  double& at(std::size_t r, std::size_t c) { return values_[r * cols() + c]; }
  double at(std::size_t r, std::size_t c) const { return values_[r * cols() + c]; }

  std::span<double> row(std::size_t r) { return {values_.data() + r * cols(), cols()}; }
  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * cols(), cols()};
  }

  const std::vector<std::string>& doc_ids() const { return doc_ids_; }
  const std::vector<std::string>& column_names() const { return column_names_; }
  std::span<const double> values() const { return values_; }

  /// Rows selected by index, in the given order.
  FeatureMatrix select_rows(std::span<const std::size_t> indices) const;

  /// Throws InputError if any entry is NaN or infinite.
  void check_finite() const;

  bool operator==(const FeatureMatrix&) const = default;

private:
  std::vector<std::string> doc_ids_;
  std::vector<std::string> column_names_;
  std::vector<double> values_;
};

/// CSV layout: optional leading '#' comment lines, a header row "id,<columns...>",
/// then one row per document with the id first. Numbers use the shortest
/// representation that round-trips.
void write_csv(std::ostream& out, const FeatureMatrix& m, const std::string& comment = {});
void write_csv(const std::filesystem::path& path, const FeatureMatrix& m,
               const std::string& comment = {});
FeatureMatrix read_csv(std::istream& in);
FeatureMatrix read_csv(const std::filesystem::path& path);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

/// Splits one CSV line, honouring double-quoted fields.
std::vector<std::string> split_csv_line(const std::string& line);
/// Quotes a CSV field when it contains a separator, quote or newline.
std::string csv_field(const std::string& s);

}  // namespace docrep
