#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace monofn {

// A column chosen by 0-based index ("5") or by header name ("DQO-E").
struct ColumnSelector {
  std::optional<std::size_t> index;
  std::string name;

  static ColumnSelector parse(const std::string& text);
  std::string describe() const;
};

struct CsvOptions {
  char delimiter = ',';
  // Treat the first non-comment line as column names. Implied by any name selector.
  bool header = false;
  // Rows where a selected field equals one of these are dropped.
  std::vector<std::string> missing = {"?", "", "NA"};
};

struct Dataset {
  std::vector<double> y;
  std::vector<double> z;  // empty unless a Z column was selected
  std::size_t rows_read = 0;
  std::size_t rows_dropped = 0;
};

// Lines starting with '#' are skipped. Throws DataError on unreadable input,
// an unknown column, a field that is neither missing nor a finite number, or
// fewer than two complete rows.
Dataset read_dataset(std::istream& in, const ColumnSelector& y, const std::optional<ColumnSelector>& z,
                     const CsvOptions& options = {});
Dataset read_dataset(const std::string& path, const ColumnSelector& y, const std::optional<ColumnSelector>& z,
                     const CsvOptions& options = {});

std::vector<std::string> split_fields(const std::string& line, char delimiter);

}  // namespace monofn
