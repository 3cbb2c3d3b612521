#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace anmf {

// Shortest decimal representation that round-trips to the same double.
// Locale-independent ('.' decimal point always).
std::string format_double(double v);

std::string version_string();

// CSV with '#'-prefixed metadata comment lines before the header row.
// Cells are written verbatim; callers are responsible for avoiding commas.
void write_csv(std::ostream& os, const std::vector<std::string>& comments,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace anmf
