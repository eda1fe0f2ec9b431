#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace bulkface {

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

// Square sparse matrix in CSR layout over the concatenated [u+ ; u- ; uG]
// unknown ordering. Duplicate triplets are merged in insertion order, so the
// assembled values are reproducible run to run.
class SparseOperator {
 public:
  SparseOperator() = default;

  static SparseOperator from_triplets(int n, std::vector<Triplet> entries,
                                      bool symmetric);
  static SparseOperator diagonal(std::vector<double> d);

  int size() const { return n_; }
  std::size_t nonzeros() const { return val_.size(); }
  bool symmetric_flagged() const { return symmetric_; }

  void apply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> apply(std::span<const double> x) const;
  double quadratic_form(std::span<const double> x) const;

  std::vector<double> diagonal_values() const;
  void add_diagonal(std::span<const double> d);

  // max |A_ij - A_ji| over the stored pattern; 0 exactly for symmetric assembly.
  double max_abs_asymmetry() const;

  double entry(int row, int col) const;

  // Coordinate-format dump, one "row col value" line per stored entry.
  void write_coordinate(std::ostream& os) const;

  const std::vector<int>& row_offsets() const { return row_ptr_; }
  const std::vector<int>& columns() const { return col_; }
  const std::vector<double>& values() const { return val_; }

 private:
  int n_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> col_;
  std::vector<double> val_;
  bool symmetric_ = false;
};

}  // namespace bulkface
