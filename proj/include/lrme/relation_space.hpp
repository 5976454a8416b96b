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

#ifndef LRME_RELATION_SPACE_HPP_
#define LRME_RELATION_SPACE_HPP_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "lrme/sparse_matrix.hpp"
#include "lrme/term.hpp"

namespace lrme {

enum class Transform { kPpmic, kLogEntropy };

std::string_view TransformName(Transform t);
// Accepts "ppmic" and "logentropy" (also "log-entropy"); throws UsageError.
Transform ParseTransform(std::string_view name);

// Positive pointwise mutual information:
//   p_ij = f_ij / N, p_i* = sum_j f_ij / N, p_*j = sum_i f_ij / N,
//   x_ij = max(0, log(p_ij / (p_i* p_*j))).
// Throws DataError when F has no nonzero entry or a negative entry.
SparseMatrix TransformPpmic(const SparseMatrix& f);

// Log-entropy weighting: x_ij = log(f_ij + 1) * w_j with
//   w_j = 1 + sum_i q_ij log(q_ij) / log(n_r),  q_ij = f_ij / sum_i f_ij.
// With a single row every w_j is 1. Same error contract as TransformPpmic.
SparseMatrix TransformLogEntropy(const SparseMatrix& f);

SparseMatrix ApplyTransform(const SparseMatrix& f, Transform t);

struct TruncatedSvd {
  Eigen::MatrixXd u;      // rows x k, orthonormal columns where sigma > 0
  Eigen::VectorXd sigma;  // k values, descending, zero padded past the rank
  Eigen::MatrixXd v;      // cols x k; empty unless requested
};

// Top-k singular triplets of X. k larger than min(rows, cols) pads with zero
// singular values and zero vectors. Throws UsageError when k < 1.
TruncatedSvd ComputeTruncatedSvd(const SparseMatrix& x, int k,
                                 bool want_v = false);

// Unit-length rows of U_k Sigma_k, keyed by term pair, giving the relational
// similarity of two pairs as the cosine of their rows.
class RelationSpace {
 public:
  struct Provenance {
    Transform transform = Transform::kPpmic;
    int k = 0;              // retained rank; equals the row count with SVD off
    bool svd = true;
    int t = 0;
    std::string corpus_digest;
  };

  RelationSpace() = default;

  // W = row-normalized U_k Sigma_k. Rows flagged in `zero_rows` (parallel to
  // `rows`) and rows with no weight are stored as exact zero vectors.
  static RelationSpace Build(const Eigen::MatrixXd& u,
                             const Eigen::VectorXd& sigma,
                             std::span<const TermPair> rows,
                             std::span<const bool> zero_rows,
                             Provenance provenance);

  std::size_t rows() const { return static_cast<std::size_t>(w_.rows()); }
  std::size_t dimensions() const { return static_cast<std::size_t>(w_.cols()); }
  const Eigen::MatrixXd& w() const { return w_; }
  const Provenance& provenance() const { return provenance_; }
  const std::vector<TermPair>& labels() const { return labels_; }
  std::optional<std::size_t> RowOf(const TermPair& pair) const;

  // Cosine of the two rows, or 0 when either pair has no row.
  double Similarity(const TermPair& p, const TermPair& q) const;
  double Similarity(const Term& a, const Term& b, const Term& c,
                    const Term& d) const;

  // Hex-float text format; Load(Save(space)) reproduces every similarity
  // exactly.
  void Save(const std::filesystem::path& path) const;
  static RelationSpace Load(const std::filesystem::path& path);

 private:
  Eigen::MatrixXd w_;
  std::vector<TermPair> labels_;
  std::unordered_map<std::string, std::size_t> row_index_;
  Provenance provenance_;
};

// Convenience for the single-relation-space pipeline step:
// transform -> truncated SVD (or none) -> normalized rows.
struct SpaceOptions {
  Transform transform = Transform::kPpmic;
  int k = 300;
  bool svd = true;
};

struct SpaceBuildInfo {
  double f_density = 0.0;
  double x_density = 0.0;
  std::size_t x_nonzeros = 0;
};

RelationSpace BuildRelationSpace(const SparseMatrix& f,
                                 std::span<const TermPair> rows,
                                 const SpaceOptions& options,
                                 RelationSpace::Provenance provenance,
                                 SpaceBuildInfo* info = nullptr);

}  // namespace lrme

#endif  // LRME_RELATION_SPACE_HPP_
