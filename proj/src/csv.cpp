#include <phs/csv.hpp>

#include <cstdio>
#include <stdexcept>

namespace phs {

CsvWriter::CsvWriter(const std::string& path, std::uint64_t seed,
                     const std::vector<std::string>& columns)
    : out_(path), columns_(columns.size()), path_(path) {
  if (!out_) throw std::runtime_error("cannot open " + path + " for writing");
  if (columns.empty()) throw std::invalid_argument("csv needs at least one column");
  out_ << "# seed=" << seed << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i)
    out_ << columns[i] << (i + 1 < columns.size() ? ',' : '\n');
}

void CsvWriter::row(const std::vector<double>& values) {
  row(values.data(), values.size());
}

void CsvWriter::row(const double* values, std::size_t count) {
  if (count != columns_)
    throw std::invalid_argument("csv row width does not match the header");
  char buf[32];
  for (std::size_t i = 0; i < count; ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", values[i]);
    out_ << buf << (i + 1 < count ? ',' : '\n');
  }
  if (!out_) throw std::runtime_error("write failed on " + path_);
}

}  // namespace phs
