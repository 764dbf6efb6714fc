#include "squeezelab/csv.hpp"

#include "squeezelab/errors.hpp"

#include <cmath>
#include <cstdio>

namespace squeezelab {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : path_(path), out_(path, std::ios::binary), columns_(header.size()) {
  if (!out_) throw IoError("cannot open '" + path.string() + "' for writing");
  write_line(header);
}

void CsvWriter::row(const std::vector<CsvField>& fields) {
  if (fields.size() != columns_) throw InvalidArgument("CSV row width does not match the header");
  std::vector<std::string> cells;
  cells.reserve(fields.size());
  for (const CsvField& f : fields) {
    if (const double* d = std::get_if<double>(&f)) {
      cells.push_back(format_double(*d));
    } else if (const std::int64_t* i = std::get_if<std::int64_t>(&f)) {
      cells.push_back(std::to_string(*i));
    } else {
      cells.push_back(std::get<std::string>(f));
    }
  }
  write_line(cells);
}

void CsvWriter::close() {
  out_.flush();
  if (!out_) throw IoError("error while writing '" + path_.string() + "'");
  out_.close();
}

void CsvWriter::write_line(const std::vector<std::string>& cells) {
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (k) out_ << ',';
    out_ << csv_escape(cells[k]);
  }
  out_ << "\r\n";
  if (!out_) throw IoError("error while writing '" + path_.string() + "'");
}

}  // namespace squeezelab
