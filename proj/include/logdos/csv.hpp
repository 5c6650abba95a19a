#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace logdos {

/// RFC 4180 quoting: fields containing ',', '"', CR or LF are quoted with
/// embedded quotes doubled.
std::string csv_escape(std::string_view field);

/// Shortest round-trip decimal form; empty for NaN.
std::string format_number(double value);

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(&out) {}

  void row(const std::vector<std::string>& fields);
  void row(std::initializer_list<std::string_view> fields);

 private:
  std::ostream* out_;
};

}  // namespace logdos
