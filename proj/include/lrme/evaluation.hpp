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

#ifndef LRME_EVALUATION_HPP_
#define LRME_EVALUATION_HPP_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lrme/attributional.hpp"
#include "lrme/corpus.hpp"
#include "lrme/patterns.hpp"
#include "lrme/problem.hpp"
#include "lrme/relation_space.hpp"
#include "lrme/solver.hpp"

namespace lrme {

enum class Mode { kRelational, kAttributional, kHybridAdd, kHybridMultiply };

std::string_view ModeName(Mode mode);
Mode ParseMode(std::string_view name);  // throws UsageError

// Run configuration. Defaults are the baseline: k = 300, t = 20, PPMIC, SVD
// on, relational mode.
struct Config {
  std::string corpus_dir;
  std::string cache_dir;
  int k = 300;
  int t = 20;
  Transform transform = Transform::kPpmic;
  bool svd = true;
  Mode mode = Mode::kRelational;
  std::string provider = "pos";
  std::uint64_t seed = 0;
  TieBreak::Policy ties = TieBreak::Policy::kRandom;
  std::uint32_t pmi_window = kDefaultPmiWindow;
  int max_terms = kDefaultMaxTerms;
  std::size_t max_phrases_per_pair = 0;
  std::string pos_file;

  // Sets one option from its textual form. Keys: corpus, cache, k, t,
  // transform, svd (on/off), mode, provider, seed, ties (random/first),
  // pmi-window, max-terms, max-phrases, pos-file. Throws UsageError for
  // unknown keys or bad values.
  void Set(std::string_view key, std::string_view value);
  // Textual form of one option, as accepted by Set.
  std::string Get(std::string_view key) const;
  // `key = value` lines; '#' starts a comment; values may be quoted.
  void LoadFile(const std::filesystem::path& path);

  bool NeedsRelationSpace() const { return mode != Mode::kAttributional; }
  bool NeedsProvider() const { return mode != Mode::kRelational; }
  bool NeedsCorpus() const;
  TieBreak TieBreakFor(std::uint64_t seed) const {
    return {ties, seed};
  }
};

// Percentage of source terms whose predicted target equals the intended one.
// Throws DataError when the mappings belong to different problems or sizes.
double Accuracy(const Mapping& predicted, const Mapping& intended);

// Per-problem seed derived from the run seed and the problem's batch position.
std::uint64_t ProblemSeed(std::uint64_t seed, std::size_t index);

struct BatchStats {
  std::size_t pairs = 0;     // |R| before pruning
  std::size_t rows = 0;      // n_r
  std::size_t columns = 0;   // n_c
  std::uint64_t phrases = 0;
  std::size_t patterns = 0;  // distinct patterns before selection
  double f_density = 0.0;
  double x_density = 0.0;
  int k = 0;
};

// R, C, F and the relation space built once over a batch of problems.
struct RelationalModel {
  RelationSpace space;
  BatchStats stats;
};

RelationalModel BuildRelationalModel(std::span<const MappingProblem> problems,
                                     const CorpusIndex& corpus,
                                     const Config& config);

struct ProblemOutcome {
  std::string id;
  std::string mnemonic;
  int m = 0;
  bool refused = false;
  std::string message;  // refusal reason
  std::optional<double> accuracy;
  std::optional<double> human;
  SolveResult result;
};

struct Report {
  Config config;
  std::vector<ProblemOutcome> problems;
  std::optional<double> average;
  std::optional<double> science_average;
  std::optional<double> metaphor_average;
  std::optional<double> human_average;
  std::optional<BatchStats> stats;
  std::size_t refused = 0;
};

// Inputs shared by the batch, coherence and sweep runs. The corpus may be
// null for attributional runs that do not use PMI-IR.
struct RunInputs {
  std::span<const MappingProblem> problems;
  std::shared_ptr<const CorpusIndex> corpus;
};

// Solves every problem with the configured mode. Problems over the term budget
// are reported as refused rather than aborting the batch.
Report RunBatch(const RunInputs& inputs, const Config& config);

// Mapping lines ("source<TAB>target") followed by a one-line JSON block of
// diagnostics, for every problem of the report.
std::string FormatSolveOutput(const Report& report,
                              std::span<const MappingProblem> problems);
// Columns: mapping, source_target, accuracy, humans, ties; closing Average row.
std::string FormatReportTsv(const Report& report);
std::string FormatReportJson(const Report& report);

struct Subproblem {
  std::string id;
  std::vector<int> source;  // A' as sorted source indices
  double internal_accuracy = 0.0;
  double total_accuracy = 0.0;
};

struct CoherenceProblemSummary {
  std::string id;
  int trials = 0;
  std::optional<double> internal_average;
  std::optional<double> total_average;
  bool skipped = false;
};

struct CoherenceReport {
  Config config;
  int m_prime = 0;
  int trials_per_problem = 0;
  std::vector<Subproblem> subproblems;
  std::vector<CoherenceProblemSummary> problems;
  std::optional<double> internal_average;
  std::optional<double> total_average;
};

// For each problem, draws `trials` subsets A' of size m' uniformly without
// replacement, sets B' = intended(A'), and scores internal and total
// coherence on the subproblem only. Problems with m < m' are skipped.
CoherenceReport RunCoherenceExperiment(const RunInputs& inputs, int m_prime,
                                       int trials, const Config& config);

// Same experiment with caller-provided scorers, one per problem.
CoherenceReport RunCoherenceExperiment(std::span<const MappingProblem> problems,
                                       std::span<const Scorer> scorers,
                                       int m_prime, int trials,
                                       const Config& config);

std::string FormatCoherenceTsv(const CoherenceReport& report);
std::string FormatCoherenceJson(const CoherenceReport& report);

struct SweepPoint {
  std::string experiment;
  int k = 300;
  int t = 20;
  Transform transform = Transform::kPpmic;
  bool svd = true;
};

// Axis spec: "k=50:400:50;t=5:40:5;transform=ppmic,logentropy;svd=on,off"
// expands to the cartesian product, unspecified axes taking `base` values.
// "standard" yields the baseline row, k = 50..400, t = 5..40, SVD off and log
// entropy. Throws UsageError.
std::vector<SweepPoint> ParseSweepGrid(std::string_view spec, const Config& base);

struct SweepRow {
  SweepPoint point;
  int k_label = 0;  // n_r when SVD is off
  std::size_t columns = 0;
  std::optional<double> accuracy;
};

struct SweepReport {
  Config config;
  std::vector<SweepRow> rows;
  std::size_t n_r = 0;
};

// One relational batch per grid point. Phrase retrieval and pattern mining
// run once; each (t, transform) pair is decomposed once at its largest k.
SweepReport RunSensitivitySweep(const RunInputs& inputs,
                                std::span<const SweepPoint> grid,
                                const Config& config);

std::string FormatSweepTsv(const SweepReport& report);
std::string FormatSweepJson(const SweepReport& report);

}  // namespace lrme

#endif  // LRME_EVALUATION_HPP_
