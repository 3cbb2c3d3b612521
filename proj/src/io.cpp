#include "anmf/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "anmf/errors.hpp"

#ifndef ANMF_VERSION_STRING
#define ANMF_VERSION_STRING "0.0.0"
#endif

namespace anmf {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string version_string() { return ANMF_VERSION_STRING; }

void write_csv(std::ostream& os, const std::vector<std::string>& comments,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  for (const std::string& c : comments) os << "# " << c << "\n";
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) os << ",";
    os << header[i];
  }
  os << "\n";
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw InvalidParameter("csv: row width " + std::to_string(row.size()) +
                             " does not match header width " +
                             std::to_string(header.size()));
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) os << ",";
      os << row[i];
    }
    os << "\n";
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidParameter("cannot open file for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw InvalidParameter("error while reading file: " + path);
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidParameter("cannot open file for writing: " + path);
  out << content;
  out.flush();
  if (!out) throw InvalidParameter("error while writing file: " + path);
}

}  // namespace anmf
