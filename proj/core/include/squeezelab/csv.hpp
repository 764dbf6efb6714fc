#pragma once

// CSV output with RFC 4180 quoting and 17 significant digits for reals.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace squeezelab {

using CsvField = std::variant<double, std::int64_t, std::string>;

std::string format_double(double value);  // "%.17g"; nan, inf, -inf spelled out
std::string csv_escape(std::string_view field);

class CsvWriter {
 public:
  // Throws IoError naming the path when the file cannot be opened.
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

  void row(const std::vector<CsvField>& fields);
  // Flushes and throws IoError if any write failed.
  void close();

  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  void write_line(const std::vector<std::string>& cells);

  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t columns_;
};

}  // namespace squeezelab
