#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace phs {

/// Streaming CSV emitter. Every file starts with "# seed=<seed>" so outputs
/// are reproducible from their own header, then the column row. Values are
/// printed with 17 significant digits.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, std::uint64_t seed,
            const std::vector<std::string>& columns);

  void row(const std::vector<double>& values);
  void row(const double* values, std::size_t count);

 private:
  std::ofstream out_;
  std::size_t columns_ = 0;
  std::string path_;
};

}  // namespace phs
