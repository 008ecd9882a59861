#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace respole::cli {

// Shortest decimal that round-trips to the same double.
std::string format_number(double value);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(const std::vector<double>& values);
  // For rows that mix integers or labels with numbers.
  void add_row_text(const std::vector<std::string>& cells);
  std::string str() const;

 private:
  std::size_t columns_;
  std::string text_;
};

// Writes to a sibling temporary file, then renames over `path`. Throws
// ConfigError on any file-system failure.
void write_atomic(const std::filesystem::path& path, const std::string& content);

struct Series {
  std::string name;
  std::vector<double> y;
};

// Single-panel line plot. Non-positive values are skipped when log_y is set.
std::string svg_plot(const std::string& title, const std::string& x_label,
                     const std::vector<double>& x, const std::vector<Series>& series, bool log_y);

}  // namespace respole::cli
