#include "cit/dataset.hpp"

#include <algorithm>

namespace cit {

std::size_t Dataset::col_index(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return i;
  throw DataError("unknown column: " + name);
}

const Column& Dataset::col(const std::string& name) const {
  return columns[col_index(name)];
}

ColumnKind Dataset::kind(const std::string& name) const {
  return kinds[col_index(name)];
}

std::vector<std::size_t> Dataset::indices(
    const std::vector<std::string>& sel) const {
  std::vector<std::size_t> out;
  out.reserve(sel.size());
  for (const auto& name : sel) out.push_back(col_index(name));
  return out;
}

Dataset make_dataset(std::vector<std::string> names, std::vector<Column> columns,
                     std::vector<ColumnKind> kinds) {
  if (names.size() != columns.size())
    throw DataError("make_dataset: names/columns size mismatch");
  if (kinds.empty()) kinds.assign(names.size(), ColumnKind::continuous);
  if (kinds.size() != names.size())
    throw DataError("make_dataset: kinds size mismatch");
  for (std::size_t i = 0; i < names.size(); ++i)
    if (std::count(names.begin(), names.end(), names[i]) != 1)
      throw DataError("duplicate column name: " + names[i]);
  Dataset d;
  d.n = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns)
    if (c.size() != d.n) throw DataError("make_dataset: ragged columns");
  d.names = std::move(names);
  d.kinds = std::move(kinds);
  d.columns = std::move(columns);
  return d;
}

}  // namespace cit
