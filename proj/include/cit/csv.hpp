#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "cit/dataset.hpp"

namespace cit {

// Parse a headered CSV of numeric cells. Columns named in discrete_cols are
// flagged discrete; unknown names there raise DataError. Rows with missing
// or non-numeric cells are rejected with their row numbers reported.
Dataset read_csv(const std::filesystem::path& path,
                 const std::vector<std::string>& discrete_cols = {});

Dataset parse_csv(std::istream& in, const std::string& origin,
                  const std::vector<std::string>& discrete_cols = {});

void write_csv(std::ostream& out, const Dataset& data);
void write_csv(const std::filesystem::path& path, const Dataset& data);

}  // namespace cit
