#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace cranerl {

// Shortest round-trip decimal form, period separator, no grouping,
// independent of the global locale.
std::string format_double(double value);

// Write-temp-then-rename so readers never see a partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

// Row-buffered CSV assembled in memory and written atomically.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(const std::vector<std::string>& cells);
  std::string str() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace cranerl
