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

#include "lrme/relation_space.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <sstream>

#include <spdlog/spdlog.h>

#include "lrme/error.hpp"

namespace lrme {
namespace {

void CheckFrequencies(const SparseMatrix& f) {
  if (f.nonzeros() == 0) {
    throw DataError("frequency matrix has no nonzero entry");
  }
  for (std::size_t r = 0; r < f.rows(); ++r) {
    for (double v : f.row_values(r)) {
      if (v < 0.0 || !std::isfinite(v)) {
        throw DataError("frequency matrix holds a negative or non-finite entry");
      }
    }
  }
}

// Entropy weights this close to zero come from a column spread evenly over
// every row and are rounding noise.
constexpr double kEntropyWeightEpsilon = 1e-12;

// Rows of U_k Sigma_k shorter than this fraction of the longest row are
// treated as zero vectors.
constexpr double kZeroRowRelative = 1e-12;
constexpr double kSvdCheckTolerance = 1e-10;

std::string HexDouble(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%a", v);
  return buf;
}

// Checks that the first `kept` columns of U are orthonormal left singular
// vectors of x: U^T U = I and |x^T u_i| = sigma_i wherever sigma_i > 0.
bool IsSingularBasis(const SparseMatrix& x, const TruncatedSvd& svd,
                     Eigen::Index kept) {
  if (!svd.u.allFinite() || !svd.sigma.allFinite()) return false;
  const double top = kept > 0 ? svd.sigma(0) : 0.0;
  Eigen::Index live = 0;
  while (live < kept && svd.sigma(live) > kSvdCheckTolerance * top) ++live;
  const double slack =
      kSvdCheckTolerance * std::max<double>(1.0, static_cast<double>(x.rows()));
  const Eigen::MatrixXd u = svd.u.leftCols(live);
  const Eigen::MatrixXd gram = u.transpose() * u;
  if (live > 0 &&
      (gram - Eigen::MatrixXd::Identity(live, live)).cwiseAbs().maxCoeff() > slack) {
    return false;
  }
  // x^T U in column blocks, accumulated row by row of the sparse matrix.
  constexpr Eigen::Index kBlock = 64;
  for (Eigen::Index first = 0; first < live; first += kBlock) {
    const Eigen::Index width = std::min(kBlock, live - first);
    Eigen::MatrixXd projected =
        Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(x.cols()), width);
    for (std::size_t r = 0; r < x.rows(); ++r) {
      const auto cols = x.row_cols(r);
      const auto vals = x.row_values(r);
      for (std::size_t i = 0; i < cols.size(); ++i) {
        projected.row(cols[i]) +=
            vals[i] * u.row(static_cast<Eigen::Index>(r)).segment(first, width);
      }
    }
    for (Eigen::Index i = 0; i < width; ++i) {
      if (std::abs(projected.col(i).norm() - svd.sigma(first + i)) > slack * top) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

std::string_view TransformName(Transform t) {
  return t == Transform::kPpmic ? "ppmic" : "logentropy";
}

Transform ParseTransform(std::string_view name) {
  if (name == "ppmic") return Transform::kPpmic;
  if (name == "logentropy" || name == "log-entropy") {
    return Transform::kLogEntropy;
  }
  throw UsageError("unknown transform '" + std::string(name) +
                   "' (expected ppmic or logentropy)");
}

SparseMatrix TransformPpmic(const SparseMatrix& f) {
  CheckFrequencies(f);
  const double total = f.Sum();
  const std::vector<double> row_sums = f.RowSums();
  const std::vector<double> col_sums = f.ColSums();
  return f.Map([&](std::size_t r, std::size_t c, double v) {
    // p_ij / (p_i* p_*j) with the totals cancelled; exact on integer counts.
    const double pmi = std::log((v * total) / (row_sums[r] * col_sums[c]));
    return pmi > 0.0 ? pmi : 0.0;
  });
}

SparseMatrix TransformLogEntropy(const SparseMatrix& f) {
  CheckFrequencies(f);
  const std::vector<double> col_sums = f.ColSums();
  std::vector<double> plogp(f.cols(), 0.0);
  for (std::size_t r = 0; r < f.rows(); ++r) {
    auto cols = f.row_cols(r);
    auto vals = f.row_values(r);
    for (std::size_t i = 0; i < cols.size(); ++i) {
      const double q = vals[i] / col_sums[cols[i]];
      plogp[cols[i]] += q * std::log(q);
    }
  }
  const double log_rows = std::log(static_cast<double>(f.rows()));
  std::vector<double> weight(f.cols(), 1.0);
  if (f.rows() > 1) {
    for (std::size_t c = 0; c < f.cols(); ++c) {
      weight[c] = 1.0 + plogp[c] / log_rows;
      if (std::abs(weight[c]) < kEntropyWeightEpsilon) weight[c] = 0.0;
    }
  }
  return f.Map([&](std::size_t, std::size_t c, double v) {
    return std::log(v + 1.0) * weight[c];
  });
}

SparseMatrix ApplyTransform(const SparseMatrix& f, Transform t) {
  return t == Transform::kPpmic ? TransformPpmic(f) : TransformLogEntropy(f);
}

TruncatedSvd ComputeTruncatedSvd(const SparseMatrix& x, int k, bool want_v) {
  if (k < 1) throw UsageError("SVD rank k must be at least 1");
  const auto rows = static_cast<Eigen::Index>(x.rows());
  const auto cols = static_cast<Eigen::Index>(x.cols());
  TruncatedSvd out;
  out.u = Eigen::MatrixXd::Zero(rows, k);
  out.sigma = Eigen::VectorXd::Zero(k);
  if (want_v) out.v = Eigen::MatrixXd::Zero(cols, k);
  if (rows == 0 || cols == 0) return out;

  const Eigen::MatrixXd dense = x.ToDense();
  unsigned options = Eigen::ComputeThinU;
  if (want_v) options |= Eigen::ComputeThinV;
  auto take = [&](const auto& svd) {
    const Eigen::Index kept =
        std::min<Eigen::Index>(k, svd.singularValues().size());
    out.u.leftCols(kept) = svd.matrixU().leftCols(kept);
    out.sigma.head(kept) = svd.singularValues().head(kept);
    if (want_v) out.v.leftCols(kept) = svd.matrixV().leftCols(kept);
    return IsSingularBasis(x, out, kept) && (!want_v || out.v.allFinite());
  };
  if (take(Eigen::BDCSVD<Eigen::MatrixXd>(dense, options))) return out;
  spdlog::debug("divide-and-conquer SVD failed validation; using one-sided Jacobi");
  if (!take(Eigen::JacobiSVD<Eigen::MatrixXd>(dense, options))) {
    throw InternalError("SVD did not converge");
  }
  return out;
}

RelationSpace RelationSpace::Build(const Eigen::MatrixXd& u,
                                   const Eigen::VectorXd& sigma,
                                   std::span<const TermPair> rows,
                                   std::span<const bool> zero_rows,
                                   Provenance provenance) {
  if (static_cast<std::size_t>(u.rows()) != rows.size() ||
      u.cols() != sigma.size() ||
      (!zero_rows.empty() && zero_rows.size() != rows.size())) {
    throw InternalError("relation space inputs have inconsistent shapes");
  }
  RelationSpace space;
  space.provenance_ = std::move(provenance);
  space.w_ = u * sigma.asDiagonal();
  const Eigen::VectorXd norms = space.w_.rowwise().norm();
  const double longest = norms.size() > 0 ? norms.maxCoeff() : 0.0;
  for (Eigen::Index r = 0; r < space.w_.rows(); ++r) {
    const bool forced = !zero_rows.empty() && zero_rows[r];
    if (forced || norms(r) == 0.0 || norms(r) <= kZeroRowRelative * longest) {
      space.w_.row(r).setZero();
    } else {
      space.w_.row(r) /= norms(r);
    }
  }
  space.labels_.assign(rows.begin(), rows.end());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!space.row_index_.emplace(rows[i].key(), i).second) {
      throw InternalError("duplicate row label '" + rows[i].key() + "'");
    }
  }
  return space;
}

std::optional<std::size_t> RelationSpace::RowOf(const TermPair& pair) const {
  auto it = row_index_.find(pair.key());
  if (it == row_index_.end()) return std::nullopt;
  return it->second;
}

double RelationSpace::Similarity(const TermPair& p, const TermPair& q) const {
  const auto rp = RowOf(p);
  const auto rq = RowOf(q);
  if (!rp || !rq) return 0.0;
  const double dot = w_.row(static_cast<Eigen::Index>(*rp))
                         .dot(w_.row(static_cast<Eigen::Index>(*rq)));
  return std::clamp(dot, -1.0, 1.0);
}

double RelationSpace::Similarity(const Term& a, const Term& b, const Term& c,
                                 const Term& d) const {
  if (a == b || c == d) return 0.0;
  return Similarity(TermPair(a, b), TermPair(c, d));
}

void RelationSpace::Save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write space '" + path.string() + "'");
  out << "lrme-relation-space 1\n";
  out << "transform " << TransformName(provenance_.transform) << '\n';
  out << "k " << provenance_.k << '\n';
  out << "svd " << (provenance_.svd ? "on" : "off") << '\n';
  out << "t " << provenance_.t << '\n';
  out << "digest " << (provenance_.corpus_digest.empty()
                           ? std::string("-")
                           : provenance_.corpus_digest)
      << '\n';
  out << "shape " << w_.rows() << ' ' << w_.cols() << '\n';
  for (Eigen::Index r = 0; r < w_.rows(); ++r) {
    const auto& label = labels_[static_cast<std::size_t>(r)];
    out << label.x.key() << '\t' << label.y.key();
    for (Eigen::Index c = 0; c < w_.cols(); ++c) out << '\t' << HexDouble(w_(r, c));
    out << '\n';
  }
  if (!out) throw DataError("cannot write space '" + path.string() + "'");
}

RelationSpace RelationSpace::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read space '" + path.string() + "'");
  auto fail = [&](const std::string& what) {
    return DataError("corrupt space '" + path.string() + "': " + what);
  };
  std::string line;
  if (!std::getline(in, line) || line != "lrme-relation-space 1") {
    throw fail("bad header");
  }
  auto field = [&](const char* name) {
    if (!std::getline(in, line)) throw fail(std::string("missing ") + name);
    std::istringstream ls(line);
    std::string key, value;
    ls >> key >> value;
    if (key != name) throw fail(std::string("missing ") + name);
    return value;
  };
  Provenance prov;
  prov.transform = ParseTransform(field("transform"));
  prov.k = std::stoi(field("k"));
  prov.svd = field("svd") == "on";
  prov.t = std::stoi(field("t"));
  prov.corpus_digest = field("digest");
  if (prov.corpus_digest == "-") prov.corpus_digest.clear();

  if (!std::getline(in, line)) throw fail("missing shape");
  std::istringstream shape(line);
  std::string key;
  Eigen::Index rows = 0, cols = 0;
  shape >> key >> rows >> cols;
  if (key != "shape" || !shape || rows < 0 || cols < 0) throw fail("bad shape");

  Eigen::MatrixXd w(rows, cols);
  std::vector<TermPair> labels;
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (!std::getline(in, line)) throw fail("missing row " + std::to_string(r));
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() != static_cast<std::size_t>(cols) + 2) {
      throw fail("row " + std::to_string(r) + " has the wrong width");
    }
    labels.emplace_back(Term(fields[0]), Term(fields[1]));
    for (Eigen::Index c = 0; c < cols; ++c) {
      const std::string& text = fields[static_cast<std::size_t>(c) + 2];
      char* end = nullptr;
      w(r, c) = std::strtod(text.c_str(), &end);
      if (end == text.c_str()) throw fail("bad value in row " + std::to_string(r));
    }
  }
  RelationSpace space;
  space.w_ = std::move(w);
  space.labels_ = std::move(labels);
  space.provenance_ = std::move(prov);
  for (std::size_t i = 0; i < space.labels_.size(); ++i) {
    if (!space.row_index_.emplace(space.labels_[i].key(), i).second) {
      throw fail("duplicate row label");
    }
  }
  return space;
}

RelationSpace BuildRelationSpace(const SparseMatrix& f,
                                 std::span<const TermPair> rows,
                                 const SpaceOptions& options,
                                 RelationSpace::Provenance provenance,
                                 SpaceBuildInfo* info) {
  if (options.svd && options.k < 1) {
    throw UsageError("SVD rank k must be at least 1");
  }
  provenance.transform = options.transform;
  provenance.svd = options.svd;
  provenance.k = options.svd ? options.k : static_cast<int>(rows.size());
  if (info) {
    info->f_density = f.density();
  }
  if (f.nonzeros() == 0) {
    spdlog::warn("frequency matrix is empty; every relational similarity is 0");
    return RelationSpace::Build(
        Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), 0),
        Eigen::VectorXd(), rows, {}, std::move(provenance));
  }
  const SparseMatrix x = ApplyTransform(f, options.transform);
  if (info) {
    info->x_density = x.density();
    info->x_nonzeros = x.nonzeros();
  }
  std::unique_ptr<bool[]> zero_rows(new bool[x.rows()]);
  for (std::size_t r = 0; r < x.rows(); ++r) zero_rows[r] = x.RowIsEmpty(r);

  // Without truncation every singular direction is kept, which reproduces the
  // cosines of the transformed rows themselves.
  const int rank = options.svd
                       ? options.k
                       : static_cast<int>(std::max<std::size_t>(
                             1, std::min(x.rows(), x.cols())));
  const TruncatedSvd svd = ComputeTruncatedSvd(x, rank);
  return RelationSpace::Build(svd.u, svd.sigma, rows,
                              std::span<const bool>(zero_rows.get(), x.rows()),
                              std::move(provenance));
}

}  // namespace lrme
