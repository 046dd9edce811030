#pragma once

#include <string>
#include <vector>

namespace rgn {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

// Two-or-more-column numeric CSV with a one-line header. '#'-prefixed lines
// before the header are treated as metadata and skipped.
CsvTable read_csv(const std::string& path);

// Deterministic writer: '%.12g' cells, '\n' endings. meta lines are emitted
// as '# key=value' before the header so bodies stay byte-stable.
void write_csv(const std::string& path, const std::vector<std::string>& meta,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

std::string format_cell(double v);

}  // namespace rgn
