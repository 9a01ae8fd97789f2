#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cit {

using Column = std::vector<double>;

// Column-major numeric block: cols[k][i] is row i of column k.
// All columns must share the same length.
struct ColMatrix {
  std::vector<Column> cols;

  ColMatrix() = default;
  explicit ColMatrix(std::vector<Column> c) : cols(std::move(c)) {}

  std::size_t ncol() const { return cols.size(); }
  std::size_t nrow() const { return cols.empty() ? 0 : cols.front().size(); }
  bool empty() const { return cols.empty(); }

  Column& operator[](std::size_t k) { return cols[k]; }
  const Column& operator[](std::size_t k) const { return cols[k]; }

  void push_col(Column c) { cols.push_back(std::move(c)); }
};

struct Dims {
  std::size_t p = 0;
  std::size_t q = 0;
  std::size_t r = 0;

  bool operator==(const Dims&) const = default;
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or unusable input data (bad columns, kind mismatches, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

// A requested simulation exceeds the configured work ceiling.
class BudgetError : public Error {
 public:
  using Error::Error;
};

// Filesystem / serialization failures.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace cit
