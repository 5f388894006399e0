#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace talbot::harness {

/// 17 significant digits; "nan"/"inf" spelled out.
std::string csv_number(double x);

/// Shortest text that reads back to the same double.
std::string short_number(double x);

std::string csv_cell(double x);
std::string csv_cell(std::int64_t x);
std::string csv_cell(std::uint64_t x);
std::string csv_cell(int x);
std::string csv_cell(std::string_view s);
inline std::string csv_cell(const char* s) { return csv_cell(std::string_view(s)); }
inline std::string csv_cell(const std::string& s) { return csv_cell(std::string_view(s)); }

/// UTF-8 CSV with '#' provenance lines, a header row and '\n' line ends.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::string_view digest, std::string_view experiment,
            std::vector<std::string> columns);

  template <class... Ts>
  void row(const Ts&... cells) {
    write({csv_cell(cells)...});
  }

  const std::filesystem::path& path() const { return path_; }

 private:
  void write(std::initializer_list<std::string> cells);

  std::filesystem::path path_;
  std::size_t columns_;
  std::ofstream out_;
};

}  // namespace talbot::harness
