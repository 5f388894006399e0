#include <charconv>
#include "talbot/harness/csv.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace talbot::harness {

std::string csv_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string short_number(double x) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

std::string csv_cell(double x) { return csv_number(x); }
std::string csv_cell(std::int64_t x) { return std::to_string(x); }
std::string csv_cell(std::uint64_t x) { return std::to_string(x); }
std::string csv_cell(int x) { return std::to_string(x); }

std::string csv_cell(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (const char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::string_view digest, std::string_view experiment,
                     std::vector<std::string> columns)
    : path_(path), columns_(columns.size()), out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) throw std::runtime_error("cannot write " + path.string());
  out_ << "# manifest-digest: fnv1a64:" << digest << "\n";
  out_ << "# experiment: " << experiment << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << csv_cell(columns[i]);
  out_ << "\n";
}

void CsvWriter::write(std::initializer_list<std::string> cells) {
  if (cells.size() != columns_) throw std::logic_error("CsvWriter: row width differs from header in " + path_.string());
  std::size_t i = 0;
  for (const auto& c : cells) out_ << (i++ ? "," : "") << c;
  out_ << "\n";
  if (!out_) throw std::runtime_error("write failed: " + path_.string());
}

}  // namespace talbot::harness
