#include "acpl/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "acpl/error.hpp"

namespace acpl {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) fail(Err::IoFailure, "cannot open " + path + " for writing");
  f.write(content.data(), std::streamsize(content.size()));
  f.flush();
  if (!f) fail(Err::IoFailure, "short write to " + path);
}

void write_text_atomic(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  write_text(tmp, content);
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail(Err::IoFailure, "cannot rename " + tmp + " to " + path + ": " + ec.message());
}

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(Err::IoFailure, "cannot open " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

void Csv::header(const std::vector<std::string>& cols) {
  for (size_t i = 0; i < cols.size(); ++i) {
    if (i) text += ',';
    text += cols[i];
  }
  text += '\n';
}

void Csv::row(const std::vector<double>& vals) {
  for (size_t i = 0; i < vals.size(); ++i) {
    if (i) text += ',';
    text += format_g17(vals[i]);
  }
  text += '\n';
}

}  // namespace acpl
