// Copyright 2026 The LRME Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LRME_SPARSE_MATRIX_HPP_
#define LRME_SPARSE_MATRIX_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace lrme {

struct Triplet {
  std::uint32_t row = 0;
  std::uint32_t col = 0;
  double value = 0.0;
};

// Compressed sparse row matrix. Stored values are never zero and each row's
// column indices are strictly increasing.
class SparseMatrix {
 public:
  SparseMatrix() : row_ptr_(1, 0) {}
  SparseMatrix(std::size_t rows, std::size_t cols);

  // Duplicate (row, col) triplets are summed; zero sums are dropped. Throws
  // InternalError on out-of-range indices.
  static SparseMatrix FromTriplets(std::size_t rows, std::size_t cols,
                                   std::vector<Triplet> triplets);
  static SparseMatrix FromDense(const Eigen::MatrixXd& dense);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nonzeros() const { return values_.size(); }
  double density() const;

  std::span<const std::uint32_t> row_cols(std::size_t r) const {
    return {col_idx_.data() + row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]};
  }
  std::span<const double> row_values(std::size_t r) const {
    return {values_.data() + row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]};
  }

  double at(std::size_t r, std::size_t c) const;
  double Sum() const;
  std::vector<double> RowSums() const;
  std::vector<double> ColSums() const;
  bool RowIsEmpty(std::size_t r) const { return row_ptr_[r] == row_ptr_[r + 1]; }

  // Same sparsity pattern with every stored value replaced by f(row, col,
  // value); results equal to zero are dropped.
  template <typename F>
  SparseMatrix Map(F&& f) const {
    SparseMatrix out(rows_, cols_);
    out.row_ptr_.assign(rows_ + 1, 0);
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t i = row_ptr_[r]; i < row_ptr_[r + 1]; ++i) {
        const double v = f(r, col_idx_[i], values_[i]);
        if (v != 0.0) {
          out.col_idx_.push_back(col_idx_[i]);
          out.values_.push_back(v);
        }
      }
      out.row_ptr_[r + 1] = out.values_.size();
    }
    return out;
  }

  Eigen::MatrixXd ToDense() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::uint32_t> col_idx_;
  std::vector<double> values_;
};

}  // namespace lrme

#endif  // LRME_SPARSE_MATRIX_HPP_
