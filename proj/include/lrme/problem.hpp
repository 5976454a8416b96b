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

#ifndef LRME_PROBLEM_HPP_
#define LRME_PROBLEM_HPP_

#include <optional>
#include <string>
#include <vector>

#include "lrme/term.hpp"

namespace lrme {

// A bijection from source index i to target index perm[i] (0-based).
struct Mapping {
  std::string problem_id;
  std::vector<int> perm;

  friend bool operator==(const Mapping&, const Mapping&) = default;
};

// True when `perm` is a permutation of 0..perm.size()-1.
bool IsPermutation(const std::vector<int>& perm);

// Two equally sized term lists A (source) and B (target) plus optional
// annotations. Invariants are enforced by Validate().
struct MappingProblem {
  std::string id;
  std::string mnemonic;
  std::vector<Term> source;
  std::vector<Term> target;

  // Parallel to source / target when present.
  std::vector<std::string> source_pos;
  std::vector<std::string> target_pos;
  // Intended mapping as a permutation over indices.
  std::optional<std::vector<int>> intended;
  // Percent of human participants agreeing with the intended target of each
  // source term, parallel to source.
  std::vector<double> agreement;

  int m() const { return static_cast<int>(source.size()); }

  // Throws DataError naming the problem when |A| != |B|, m < 2, a list
  // contains duplicate terms, an annotation has the wrong length, or the
  // intended mapping is not a bijection.
  void Validate() const;

  // Mean of the agreement column; nullopt when absent.
  std::optional<double> AverageAgreement() const;

  // Science analogies carry ids starting with 'A', metaphors with 'M'.
  bool IsScience() const { return !id.empty() && id.front() == 'A'; }
  bool IsMetaphor() const { return !id.empty() && id.front() == 'M'; }

  Mapping IntendedMapping() const;
};

}  // namespace lrme

#endif  // LRME_PROBLEM_HPP_
