#include "docrep/feature_matrix.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "docrep/error.hpp"

namespace docrep {

FeatureMatrix::FeatureMatrix(std::vector<std::string> doc_ids,
                             std::vector<std::string> column_names)
    : doc_ids_(std::move(doc_ids)),
      column_names_(std::move(column_names)),
      values_(doc_ids_.size() * column_names_.size(), 0.0) {}

FeatureMatrix FeatureMatrix::select_rows(std::span<const std::size_t> indices) const {
  std::vector<std::string> ids;
  ids.reserve(indices.size());
  for (auto i : indices) {
    if (i >= rows()) throw InputError("row index out of range: " + std::to_string(i));
    ids.push_back(doc_ids_[i]);
  }
  FeatureMatrix out(std::move(ids), column_names_);
  for (std::size_t r = 0; r < indices.size(); ++r) {
    auto src = row(indices[r]);
    std::copy(src.begin(), src.end(), out.row(r).begin());
  }
  return out;
}

void FeatureMatrix::check_finite() const {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw InputError("non-finite feature value in row '" + doc_ids_[i / cols()] +
                       "', column '" + column_names_[i % cols()] + "'");
    }
  }
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

void write_csv(std::ostream& out, const FeatureMatrix& m, const std::string& comment) {
  if (!comment.empty()) out << "# " << comment << '\n';
  out << "id";
  for (const auto& c : m.column_names()) out << ',' << csv_field(c);
  out << '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    out << csv_field(m.doc_ids()[r]);
    for (double v : m.row(r)) out << ',' << format_double(v);
    out << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const FeatureMatrix& m,
               const std::string& comment) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_csv(out, m, comment);
}

FeatureMatrix read_csv(std::istream& in) {
  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    header = split_csv_line(line);
    break;
  }
  if (header.empty() || header[0] != "id") throw InputError("feature CSV: missing 'id' header");
  std::vector<std::string> columns(header.begin() + 1, header.end());

  std::vector<std::string> ids;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw InputError("feature CSV: row " + std::to_string(ids.size() + 1) + " has " +
                       std::to_string(fields.size()) + " fields, expected " +
                       std::to_string(header.size()));
    }
    ids.push_back(fields[0]);
    std::vector<double> values(columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c) {
      const auto& f = fields[c + 1];
      auto res = std::from_chars(f.data(), f.data() + f.size(), values[c]);
      if (res.ec != std::errc{} || res.ptr != f.data() + f.size()) {
        throw InputError("feature CSV: bad number '" + f + "'");
      }
    }
    rows.push_back(std::move(values));
  }
  FeatureMatrix m(std::move(ids), std::move(columns));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
  }
  return m;
}

FeatureMatrix read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  return read_csv(in);
}

}  // namespace docrep
