#pragma once

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

#include "fpflow/common.hpp"

namespace fpflow {

/// %.{digits}g formatting; infinities render as inf/-inf.
inline std::string format_sig(double v, int digits = 15) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

/// Single-header CSV writer with a fixed significant-digit count; output is
/// byte-deterministic for identical inputs.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, std::vector<std::string> columns, int precision = 15)
      : out_(path), columns_(std::move(columns)), precision_(precision) {
    if (!out_) throw ConfigError("cannot open output file: " + path);
    if (precision_ < 6 || precision_ > 17) throw ConfigError("csv precision out of [6,17]");
    for (size_t i = 0; i < columns_.size(); ++i) {
      if (i) out_ << ',';
      out_ << columns_[i];
    }
    out_ << '\n';
  }

  void row(const std::vector<double>& values) {
    if (values.size() != columns_.size())
      throw ConfigError("csv row width does not match the header");
    for (size_t i = 0; i < values.size(); ++i) {
      if (i) out_ << ',';
      out_ << format_sig(values[i], precision_);
    }
    out_ << '\n';
    ++rows_;
  }

  /// Mixed row: formatted doubles plus raw string cells (for flags).
  void row_raw(const std::vector<std::string>& cells) {
    if (cells.size() != columns_.size())
      throw ConfigError("csv row width does not match the header");
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
    ++rows_;
  }

  std::string num(double v) const { return format_sig(v, precision_); }
  long rows() const { return rows_; }

 private:
  std::ofstream out_;
  std::vector<std::string> columns_;
  int precision_;
  long rows_ = 0;
};

}  // namespace fpflow
