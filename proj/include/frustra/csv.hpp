#pragma once

#include <charconv>
#include <sstream>
#include <string>

namespace frustra {

inline constexpr const char* kCsvHeaderComment = "# frustra-csv v1";

// Shortest representation that parses back to the same double.
inline std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

// Row builder that keeps floating-point formatting uniform across the CLI.
class CsvWriter {
 public:
  explicit CsvWriter(std::string header_line) {
    os_ << kCsvHeaderComment << "\n" << header_line << "\n";
  }

  template <typename... Fields>
  void row(const Fields&... fields) {
    bool first = true;
    (emit(fields, first), ...);
    os_ << "\n";
  }

  std::string str() const { return os_.str(); }

 private:
  void sep(bool& first) {
    if (!first) os_ << ",";
    first = false;
  }
  void emit(double v, bool& first) {
    sep(first);
    os_ << format_double(v);
  }
  void emit(const std::string& v, bool& first) {
    sep(first);
    os_ << v;
  }
  void emit(const char* v, bool& first) {
    sep(first);
    os_ << v;
  }
  template <typename T>
  void emit(const T& v, bool& first) {
    sep(first);
    os_ << v;
  }

  std::ostringstream os_;
};

}  // namespace frustra
