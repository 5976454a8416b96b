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

#include "lrme/problem.hpp"

#include <unordered_set>

#include "lrme/error.hpp"

namespace lrme {

bool IsPermutation(const std::vector<int>& perm) {
  std::vector<bool> seen(perm.size(), false);
  for (int v : perm) {
    if (v < 0 || static_cast<std::size_t>(v) >= perm.size() || seen[v]) {
      return false;
    }
    seen[v] = true;
  }
  return true;
}

void MappingProblem::Validate() const {
  auto fail = [&](const std::string& what) {
    return DataError("problem '" + id + "': " + what);
  };
  if (source.size() != target.size()) {
    throw fail("source has " + std::to_string(source.size()) +
               " terms but target has " + std::to_string(target.size()));
  }
  if (source.size() < 2) throw fail("needs at least two terms per side");
  auto check_unique = [&](const std::vector<Term>& terms, const char* side) {
    std::unordered_set<std::string> keys;
    for (const auto& t : terms) {
      if (!keys.insert(t.key()).second) {
        throw fail(std::string("duplicate ") + side + " term '" + t.surface() +
                   "'");
      }
    }
  };
  check_unique(source, "source");
  check_unique(target, "target");
  if (!source_pos.empty() && source_pos.size() != source.size()) {
    throw fail("source POS tags do not cover every source term");
  }
  if (!target_pos.empty() && target_pos.size() != target.size()) {
    throw fail("target POS tags do not cover every target term");
  }
  if (!agreement.empty() && agreement.size() != source.size()) {
    throw fail("agreement values do not cover every source term");
  }
  if (intended) {
    if (intended->size() != source.size() || !IsPermutation(*intended)) {
      throw fail("intended mapping is not a bijection");
    }
  }
}

std::optional<double> MappingProblem::AverageAgreement() const {
  if (agreement.empty()) return std::nullopt;
  double sum = 0.0;
  for (double a : agreement) sum += a;
  return sum / static_cast<double>(agreement.size());
}

Mapping MappingProblem::IntendedMapping() const {
  if (!intended) throw DataError("problem '" + id + "' has no intended mapping");
  return Mapping{id, *intended};
}

}  // namespace lrme
