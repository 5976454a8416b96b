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

#include "lrme/sparse_matrix.hpp"

#include <algorithm>

#include "lrme/error.hpp"

namespace lrme {

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), row_ptr_(rows + 1, 0) {}

SparseMatrix SparseMatrix::FromTriplets(std::size_t rows, std::size_t cols,
                                        std::vector<Triplet> triplets) {
  for (const Triplet& t : triplets) {
    if (t.row >= rows || t.col >= cols) {
      throw InternalError("sparse triplet out of range");
    }
  }
  std::sort(triplets.begin(), triplets.end(),
            [](const Triplet& a, const Triplet& b) {
              return a.row != b.row ? a.row < b.row : a.col < b.col;
            });
  SparseMatrix m(rows, cols);
  std::size_t i = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    while (i < triplets.size() && triplets[i].row == r) {
      const std::uint32_t col = triplets[i].col;
      double sum = 0.0;
      while (i < triplets.size() && triplets[i].row == r &&
             triplets[i].col == col) {
        sum += triplets[i].value;
        ++i;
      }
      if (sum != 0.0) {
        m.col_idx_.push_back(col);
        m.values_.push_back(sum);
      }
    }
    m.row_ptr_[r + 1] = m.values_.size();
  }
  return m;
}

SparseMatrix SparseMatrix::FromDense(const Eigen::MatrixXd& dense) {
  std::vector<Triplet> triplets;
  for (Eigen::Index r = 0; r < dense.rows(); ++r) {
    for (Eigen::Index c = 0; c < dense.cols(); ++c) {
      if (dense(r, c) != 0.0) {
        triplets.push_back({static_cast<std::uint32_t>(r),
                            static_cast<std::uint32_t>(c), dense(r, c)});
      }
    }
  }
  return FromTriplets(static_cast<std::size_t>(dense.rows()),
                      static_cast<std::size_t>(dense.cols()),
                      std::move(triplets));
}

double SparseMatrix::density() const {
  if (rows_ == 0 || cols_ == 0) return 0.0;
  return static_cast<double>(nonzeros()) /
         (static_cast<double>(rows_) * static_cast<double>(cols_));
}

double SparseMatrix::at(std::size_t r, std::size_t c) const {
  auto cols = row_cols(r);
  auto it = std::lower_bound(cols.begin(), cols.end(), c);
  if (it == cols.end() || *it != c) return 0.0;
  return row_values(r)[static_cast<std::size_t>(it - cols.begin())];
}

double SparseMatrix::Sum() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s;
}

std::vector<double> SparseMatrix::RowSums() const {
  std::vector<double> sums(rows_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (double v : row_values(r)) sums[r] += v;
  }
  return sums;
}

std::vector<double> SparseMatrix::ColSums() const {
  std::vector<double> sums(cols_, 0.0);
  for (std::size_t i = 0; i < values_.size(); ++i) {
    sums[col_idx_[i]] += values_[i];
  }
  return sums;
}

Eigen::MatrixXd SparseMatrix::ToDense() const {
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(
      static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
  for (std::size_t r = 0; r < rows_; ++r) {
    auto cols = row_cols(r);
    auto vals = row_values(r);
    for (std::size_t i = 0; i < cols.size(); ++i) {
      dense(static_cast<Eigen::Index>(r), cols[i]) = vals[i];
    }
  }
  return dense;
}

}  // namespace lrme
