#include "bulkface/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "bulkface/errors.hpp"
#include "bulkface/kernels.hpp"

namespace bulkface {

SparseOperator SparseOperator::from_triplets(int n, std::vector<Triplet> entries,
                                             bool symmetric) {
  SparseOperator A;
  A.n_ = n;
  A.symmetric_ = symmetric;
  // stable sort keeps insertion order among duplicates, so the merge below
  // sums them in a fixed order.
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Triplet& a, const Triplet& b) {
                     return a.row != b.row ? a.row < b.row : a.col < b.col;
                   });
  A.row_ptr_.assign(static_cast<std::size_t>(n) + 1, 0);
  A.col_.reserve(entries.size());
  A.val_.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size();) {
    const int r = entries[i].row;
    const int c = entries[i].col;
    if (r < 0 || r >= n || c < 0 || c >= n) throw Error("sparse: triplet out of range");
    double v = 0.0;
    while (i < entries.size() && entries[i].row == r && entries[i].col == c) {
      v += entries[i].value;
      ++i;
    }
    A.col_.push_back(c);
    A.val_.push_back(v);
    ++A.row_ptr_[static_cast<std::size_t>(r) + 1];
  }
  for (int r = 0; r < n; ++r) A.row_ptr_[r + 1] += A.row_ptr_[r];
  return A;
}

SparseOperator SparseOperator::diagonal(std::vector<double> d) {
  SparseOperator A;
  A.n_ = static_cast<int>(d.size());
  A.symmetric_ = true;
  A.row_ptr_.resize(d.size() + 1);
  A.col_.resize(d.size());
  for (int i = 0; i < A.n_; ++i) {
    A.row_ptr_[i] = i;
    A.col_[i] = i;
  }
  A.row_ptr_[A.n_] = A.n_;
  A.val_ = std::move(d);
  return A;
}

void SparseOperator::apply(std::span<const double> x, std::span<double> y) const {
  spmv(n_, row_ptr_.data(), col_.data(), val_.data(), x.data(), y.data());
}

std::vector<double> SparseOperator::apply(std::span<const double> x) const {
  std::vector<double> y(static_cast<std::size_t>(n_));
  apply(x, y);
  return y;
}

double SparseOperator::quadratic_form(std::span<const double> x) const {
  std::vector<double> y = apply(x);
  return dot(x, y);
}

std::vector<double> SparseOperator::diagonal_values() const {
  std::vector<double> d(static_cast<std::size_t>(n_), 0.0);
  for (int i = 0; i < n_; ++i)
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      if (col_[k] == i) d[i] = val_[k];
  return d;
}

void SparseOperator::add_diagonal(std::span<const double> d) {
  for (int i = 0; i < n_; ++i) {
    bool found = false;
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      if (col_[k] == i) {
        val_[k] += d[i];
        found = true;
        break;
      }
    }
    if (!found) throw Error("sparse: missing diagonal entry");
  }
}

double SparseOperator::max_abs_asymmetry() const {
  double m = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      m = std::max(m, std::abs(val_[k] - entry(col_[k], i)));
  return m;
}

double SparseOperator::entry(int row, int col) const {
  for (int k = row_ptr_[row]; k < row_ptr_[row + 1]; ++k)
    if (col_[k] == col) return val_[k];
  return 0.0;
}

void SparseOperator::write_coordinate(std::ostream& os) const {
  char buf[64];
  for (int i = 0; i < n_; ++i)
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      std::snprintf(buf, sizeof(buf), "%d %d %.17g\n", i, col_[k], val_[k]);
      os << buf;
    }
}

}  // namespace bulkface
