#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cit/common.hpp"

namespace cit {

enum class ColumnKind { continuous, discrete };

// A column-typed numeric table. Ingestion guarantees rectangular shape and
// no missing cells.
struct Dataset {
  std::vector<std::string> names;
  std::vector<ColumnKind> kinds;
  std::vector<Column> columns;
  std::size_t n = 0;

  std::size_t ncol() const { return columns.size(); }

  std::size_t col_index(const std::string& name) const;
  const Column& col(const std::string& name) const;
  ColumnKind kind(const std::string& name) const;

  // Indices for a list of names; throws DataError on unknown names.
  std::vector<std::size_t> indices(const std::vector<std::string>& sel) const;
};

Dataset make_dataset(std::vector<std::string> names, std::vector<Column> columns,
                     std::vector<ColumnKind> kinds = {});

}  // namespace cit
