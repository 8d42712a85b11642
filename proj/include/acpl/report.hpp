#pragma once

#include <string>
#include <vector>

namespace acpl {

// shortest exact decimal form, C locale
std::string format_g17(double v);

void write_text(const std::string& path, const std::string& content);
// write to <path>.tmp in the same directory, then rename over path
void write_text_atomic(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);

// header + numeric rows, '.' decimal point, one line per row
struct Csv {
  std::string text;
  void header(const std::vector<std::string>& cols);
  void row(const std::vector<double>& vals);
};

}  // namespace acpl
