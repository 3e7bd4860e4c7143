#pragma once

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "lmg/error.hpp"

namespace lmg::io {

// 17 significant digits: enough to round-trip any double.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_double(const std::string& s) {
  if (s == "nan" || s.empty()) return std::nan("");
  // strtod rather than stod: subnormals must parse, not throw out_of_range
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw InvalidArgument("malformed number in CSV: '" + s + "'");
  return v;
}

class CsvTable {
 public:
  CsvTable() = default;
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<double>>& rows() const { return rows_; }
  std::size_t row_count() const { return rows_.size(); }

  void add_row(std::vector<double> row) {
    if (!header_.empty() && row.size() != header_.size()) {
      throw InvalidArgument("CSV row width does not match header");
    }
    rows_.push_back(std::move(row));
  }

  bool has_column(const std::string& name) const { return column_index(name) < header_.size(); }

  std::size_t column_index(const std::string& name) const {
    for (std::size_t i = 0; i < header_.size(); ++i) {
      if (header_[i] == name) return i;
    }
    return header_.size();
  }

  std::vector<double> column(const std::string& name) const {
    const std::size_t i = column_index(name);
    if (i == header_.size()) throw InvalidArgument("missing CSV column '" + name + "'");
    return column(i);
  }

  std::vector<double> column(std::size_t i) const {
    std::vector<double> out;
    out.reserve(rows_.size());
    for (const auto& r : rows_) out.push_back(r.at(i));
    return out;
  }

  void write(std::ostream& os) const {
    if (!header_.empty()) {
      for (std::size_t i = 0; i < header_.size(); ++i) os << (i ? "," : "") << header_[i];
      os << '\n';
    }
    for (const auto& r : rows_) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << format_double(r[i]);
      os << '\n';
    }
  }

  std::string to_string() const {
    std::ostringstream os;
    write(os);
    return os.str();
  }

  void save(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    write(f);
    if (!f) throw std::runtime_error("failed writing '" + path + "'");
  }

  static CsvTable read(std::istream& is, bool has_header = true) {
    CsvTable t;
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      std::vector<std::string> fields;
      std::stringstream ss(line);
      std::string field;
      while (std::getline(ss, field, ',')) fields.push_back(field);
      if (!line.empty() && line.back() == ',') fields.emplace_back();
      if (first && has_header) {
        t.header_ = std::move(fields);
      } else {
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& f : fields) row.push_back(parse_double(f));
        t.add_row(std::move(row));
      }
      first = false;
    }
    return t;
  }

  static CsvTable load(const std::string& path, bool has_header = true) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw InvalidArgument("cannot open '" + path + "'");
    return read(f, has_header);
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<double>> rows_;
};

}  // namespace lmg::io
