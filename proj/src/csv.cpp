#include "cit/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace cit {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(field);
      field.clear();
    } else if (ch != '\r') {
      field.push_back(ch);
    }
  }
  fields.push_back(field);
  return fields;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

}  // namespace

Dataset parse_csv(std::istream& in, const std::string& origin,
                  const std::vector<std::string>& discrete_cols) {
  std::string line;
  // '#' lines (provenance comments written by the transform command) are
  // skipped anywhere in the file.
  do {
    if (!std::getline(in, line))
      throw DataError(origin + ": empty file (header row required)");
  } while (!line.empty() && line[0] == '#');

  std::vector<std::string> names;
  for (const auto& f : split_fields(line)) {
    const std::string name = trim(f);
    if (name.empty()) throw DataError(origin + ": empty column name in header");
    if (std::find(names.begin(), names.end(), name) != names.end())
      throw DataError(origin + ": duplicate column name: " + name);
    names.push_back(name);
  }

  std::vector<Column> columns(names.size());
  std::vector<std::string> bad_rows;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty() || line[0] == '#') continue;
    const auto fields = split_fields(line);
    bool ok = fields.size() == names.size();
    std::vector<double> values(names.size());
    if (ok) {
      for (std::size_t k = 0; k < fields.size(); ++k) {
        const std::string cell = trim(fields[k]);
        char* end = nullptr;
        values[k] = std::strtod(cell.c_str(), &end);
        if (cell.empty() || end != cell.c_str() + cell.size() ||
            !std::isfinite(values[k])) {
          ok = false;
          break;
        }
      }
    }
    if (!ok) {
      bad_rows.push_back(std::to_string(row));
      continue;
    }
    for (std::size_t k = 0; k < names.size(); ++k)
      columns[k].push_back(values[k]);
  }

  if (!bad_rows.empty()) {
    std::string rows = bad_rows.front();
    for (std::size_t i = 1; i < std::min<std::size_t>(bad_rows.size(), 20); ++i)
      rows += "," + bad_rows[i];
    if (bad_rows.size() > 20) rows += ",...";
    throw DataError(origin + ": " + std::to_string(bad_rows.size()) +
                    " row(s) with missing or non-numeric cells (rows " + rows +
                    ")");
  }
  if (columns.empty() || columns.front().empty())
    throw DataError(origin + ": no data rows");

  std::vector<ColumnKind> kinds(names.size(), ColumnKind::continuous);
  for (const auto& name : discrete_cols) {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end())
      throw DataError(origin + ": --discrete names unknown column: " + name);
    kinds[static_cast<std::size_t>(it - names.begin())] = ColumnKind::discrete;
  }
  return make_dataset(std::move(names), std::move(columns), std::move(kinds));
}

Dataset read_csv(const std::filesystem::path& path,
                 const std::vector<std::string>& discrete_cols) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_csv(in, path.string(), discrete_cols);
}

void write_csv(std::ostream& out, const Dataset& data) {
  for (std::size_t k = 0; k < data.names.size(); ++k)
    out << (k ? "," : "") << data.names[k];
  out << "\n";
  char buf[40];
  for (std::size_t i = 0; i < data.n; ++i) {
    for (std::size_t k = 0; k < data.ncol(); ++k) {
      std::snprintf(buf, sizeof(buf), "%.17g", data.columns[k][i]);
      out << (k ? "," : "") << buf;
    }
    out << "\n";
  }
}

void write_csv(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  write_csv(out, data);
}

}  // namespace cit
