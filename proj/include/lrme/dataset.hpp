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

#ifndef LRME_DATASET_HPP_
#define LRME_DATASET_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "lrme/problem.hpp"

namespace lrme {

// The twenty standard mapping problems: ten science analogies (A1-A10) and
// ten common metaphors (M1-M10). Target terms are listed in intended order,
// so every intended mapping is the identity permutation. Each term carries
// its Penn Treebank tag and each source term the percentage of the 22 human
// participants who chose the intended target.
const std::vector<MappingProblem>& BuiltinProblems();

// Parses a JSON problem file: either an array of problem objects or an object
// with a "problems" array. Each problem has "id", "source", "target" and
// optionally "mnemonic", "pos" {term: tag}, "intended" {source: target} and
// "agreement" {source: percent}. Throws DataError naming the problem.
std::vector<MappingProblem> ParseProblems(std::string_view json_text);
std::vector<MappingProblem> LoadProblems(const std::filesystem::path& path);

// Inverse of ParseProblems.
std::string ProblemsToJson(const std::vector<MappingProblem>& problems);

}  // namespace lrme

#endif  // LRME_DATASET_HPP_
