#include "monofn/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

#include "monofn/errors.hpp"

namespace monofn {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::size_t resolve(const ColumnSelector& sel, const std::vector<std::string>& names) {
  if (sel.index) return *sel.index;
  const auto it = std::find(names.begin(), names.end(), sel.name);
  if (it == names.end()) {
    throw DataError("column '" + sel.name + "' not found in header");
  }
  return static_cast<std::size_t>(it - names.begin());
}

}  // namespace

ColumnSelector ColumnSelector::parse(const std::string& text) {
  ColumnSelector s;
  const std::string t = trim(text);
  if (t.empty()) throw ConfigError("empty column selector");
  std::size_t idx = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), idx);
  if (ec == std::errc() && ptr == t.data() + t.size()) {
    s.index = idx;
  } else {
    s.name = t;
  }
  return s;
}

std::string ColumnSelector::describe() const { return index ? std::to_string(*index) : "'" + name + "'"; }

std::vector<std::string> split_fields(const std::string& line, char delimiter) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == delimiter) {
      out.push_back(trim(cur));
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(trim(cur));
  return out;
}

Dataset read_dataset(std::istream& in, const ColumnSelector& y, const std::optional<ColumnSelector>& z,
                     const CsvOptions& options) {
  const bool header = options.header || !y.index || (z && !z->index);
  Dataset d;
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::size_t> yc;
  std::optional<std::size_t> zc;
  if (!header) {
    yc = *y.index;
    if (z) zc = *z->index;
  }
  auto is_missing = [&](const std::string& f) {
    return std::find(options.missing.begin(), options.missing.end(), f) != options.missing.end();
  };
  auto parse_value = [&](const std::string& f, const ColumnSelector& sel, double& out) {
    const char* first = f.data();
    if (!f.empty() && f[0] == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, f.data() + f.size(), out);
    if (ec != std::errc() || ptr != f.data() + f.size() || !std::isfinite(out)) {
      throw DataError("line " + std::to_string(line_no) + ": column " + sel.describe() + " value '" + f +
                      "' is not a finite number");
    }
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty() || line[0] == '#') continue;
    const auto fields = split_fields(line, options.delimiter);
    if (!yc) {
      yc = resolve(y, fields);
      if (z) zc = resolve(*z, fields);
      continue;
    }
    ++d.rows_read;
    const std::size_t need = std::max(*yc, zc.value_or(0));
    if (fields.size() <= need) {
      throw DataError("line " + std::to_string(line_no) + ": expected at least " + std::to_string(need + 1) +
                      " fields, found " + std::to_string(fields.size()));
    }
    if (is_missing(fields[*yc]) || (zc && is_missing(fields[*zc]))) {
      ++d.rows_dropped;
      continue;
    }
    double yv = 0.0;
    parse_value(fields[*yc], y, yv);
    d.y.push_back(yv);
    if (zc) {
      double zv = 0.0;
      parse_value(fields[*zc], *z, zv);
      d.z.push_back(zv);
    }
  }
  if (d.y.size() < 2) {
    throw DataError("dataset has " + std::to_string(d.y.size()) + " complete rows; need at least 2");
  }
  return d;
}

Dataset read_dataset(const std::string& path, const ColumnSelector& y, const std::optional<ColumnSelector>& z,
                     const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open data file '" + path + "'");
  return read_dataset(in, y, z, options);
}

}  // namespace monofn
