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

#include "lrme/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "json.hpp"

#include "lrme/error.hpp"

namespace lrme {
namespace {

using nlohmann::ordered_json;

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

template <typename Int>
Int ParseInteger(std::string_view key, std::string_view value, Int low,
                 Int high) {
  Int out{};
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end || out < low || out > high) {
    throw UsageError(fmt::format("bad value '{}' for {} (expected an integer "
                                 "in [{}, {}])",
                                 value, key, low, high));
  }
  return out;
}

bool ParseSwitch(std::string_view key, std::string_view value) {
  if (value == "on" || value == "true" || value == "1" || value == "yes") {
    return true;
  }
  if (value == "off" || value == "false" || value == "0" || value == "no") {
    return false;
  }
  throw UsageError(fmt::format("bad value '{}' for {} (expected on or off)",
                               value, key));
}

std::vector<std::string_view> Split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t at = s.find(sep, start);
    parts.push_back(s.substr(start, at - start));
    if (at == std::string_view::npos) return parts;
    start = at + 1;
  }
}

std::optional<double> Mean(const std::vector<double>& values) {
  if (values.empty()) return std::nullopt;
  return std::accumulate(values.begin(), values.end(), 0.0) /
         static_cast<double>(values.size());
}

std::string Percent(const std::optional<double>& v) {
  return v ? fmt::format("{:.1f}", *v) : std::string("-");
}

ordered_json Optional(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json ConfigJson(const Config& c) {
  return {{"corpus", c.corpus_dir},
          {"k", c.k},
          {"t", c.t},
          {"transform", std::string(TransformName(c.transform))},
          {"svd", c.svd ? "on" : "off"},
          {"mode", std::string(ModeName(c.mode))},
          {"provider", c.provider},
          {"seed", c.seed},
          {"ties", c.ties == TieBreak::Policy::kFirst ? "first" : "random"},
          {"pmi_window", c.pmi_window},
          {"max_terms", c.max_terms},
          {"max_phrases", c.max_phrases_per_pair}};
}

ordered_json StatsJson(const BatchStats& s) {
  return {{"pairs", s.pairs},         {"rows", s.rows},
          {"columns", s.columns},     {"phrases", s.phrases},
          {"patterns", s.patterns},   {"f_density", s.f_density},
          {"x_density", s.x_density}, {"k", s.k}};
}

// Attributional providers for a batch. POS tags come from each problem's own
// annotations unless a tag file is configured, since the same word can carry
// different tags in different problems.
class ProviderSource {
 public:
  ProviderSource(const Config& config,
                 std::shared_ptr<const CorpusIndex> corpus) {
    std::string_view spec = config.provider;
    constexpr std::string_view kPlusPos = "+pos";
    if (spec.size() > kPlusPos.size() && spec.ends_with(kPlusPos)) {
      with_pos_ = true;
      spec.remove_suffix(kPlusPos.size());
    }
    if (!config.pos_file.empty()) file_tags_ = LoadPosTags(config.pos_file);
    if (spec == "pos") {
      if (with_pos_) throw UsageError("provider pos+pos is not supported");
      pos_only_ = true;
    } else {
      base_ = MakeProvider(spec, {}, std::move(corpus), config.pmi_window);
    }
  }

  ProviderPtr For(const MappingProblem& problem) const {
    if (!pos_only_ && !with_pos_) return base_;
    PosTags tags = file_tags_ ? *file_tags_
                              : CollectPosTags(std::span(&problem, 1));
    ProviderPtr pos = std::make_shared<PosSimilarity>(std::move(tags));
    return pos_only_ ? pos : CombineWithPos(base_, std::move(pos));
  }

 private:
  bool pos_only_ = false;
  bool with_pos_ = false;
  ProviderPtr base_;
  std::optional<PosTags> file_tags_;
};

SolveResult SolveOne(const MappingProblem& problem, std::size_t index,
                     const RelationSpace* space, const ProviderSource* providers,
                     const Config& config) {
  SolveOptions options;
  options.tie_break = config.TieBreakFor(ProblemSeed(config.seed, index));
  options.max_terms = config.max_terms;
  CheckBudget(problem.m(), config.max_terms);
  switch (config.mode) {
    case Mode::kRelational:
      return Solve(problem,
                   Scorer::Relational(RelationalTable::FromSpace(*space, problem)),
                   options);
    case Mode::kAttributional:
      return Solve(problem,
                   Scorer::Attributional(AttributionalTable::FromProvider(
                       *providers->For(problem), problem)),
                   options);
    case Mode::kHybridAdd:
    case Mode::kHybridMultiply:
      return SolveHybrid(
          problem, RelationalTable::FromSpace(*space, problem),
          AttributionalTable::FromProvider(*providers->For(problem), problem),
          config.mode == Mode::kHybridAdd ? Combination::kAdd
                                          : Combination::kMultiply,
          options);
  }
  throw InternalError("unhandled mode");
}

Report SolveProblems(std::span<const MappingProblem> problems,
                     const RelationSpace* space,
                     const ProviderSource* providers, const Config& config) {
  Report report;
  report.config = config;
  std::vector<double> all, science, metaphor, human;
  for (std::size_t i = 0; i < problems.size(); ++i) {
    const MappingProblem& p = problems[i];
    ProblemOutcome outcome;
    outcome.id = p.id;
    outcome.mnemonic = p.mnemonic;
    outcome.m = p.m();
    outcome.human = p.AverageAgreement();
    if (outcome.human) human.push_back(*outcome.human);
    try {
      outcome.result = SolveOne(p, i, space, providers, config);
    } catch (const BudgetError& e) {
      spdlog::warn("problem '{}': {}", p.id, e.what());
      outcome.refused = true;
      outcome.message = e.what();
      ++report.refused;
      report.problems.push_back(std::move(outcome));
      continue;
    }
    if (p.intended) {
      outcome.accuracy = Accuracy(outcome.result.mapping, p.IntendedMapping());
      all.push_back(*outcome.accuracy);
      if (p.IsScience()) science.push_back(*outcome.accuracy);
      if (p.IsMetaphor()) metaphor.push_back(*outcome.accuracy);
    }
    report.problems.push_back(std::move(outcome));
  }
  report.average = Mean(all);
  report.science_average = Mean(science);
  report.metaphor_average = Mean(metaphor);
  report.human_average = Mean(human);
  return report;
}

void ValidateAll(std::span<const MappingProblem> problems) {
  std::set<std::string> ids;
  for (const MappingProblem& p : problems) {
    p.Validate();
    if (!ids.insert(p.id).second) {
      throw DataError("problem id '" + p.id + "' appears more than once");
    }
  }
}

void RequireCorpus(const RunInputs& inputs, const Config& config) {
  if (config.NeedsCorpus() && !inputs.corpus) {
    throw UsageError(fmt::format("mode {} with provider {} needs --corpus",
                                 ModeName(config.mode), config.provider));
  }
}

}  // namespace

std::string_view ModeName(Mode mode) {
  switch (mode) {
    case Mode::kRelational: return "relational";
    case Mode::kAttributional: return "attributional";
    case Mode::kHybridAdd: return "hybrid-add";
    case Mode::kHybridMultiply: return "hybrid-mul";
  }
  return "?";
}

Mode ParseMode(std::string_view name) {
  if (name == "relational") return Mode::kRelational;
  if (name == "attributional") return Mode::kAttributional;
  if (name == "hybrid-add") return Mode::kHybridAdd;
  if (name == "hybrid-mul" || name == "hybrid-multiply") {
    return Mode::kHybridMultiply;
  }
  throw UsageError("unknown mode '" + std::string(name) +
                   "' (expected relational, attributional, hybrid-add or "
                   "hybrid-mul)");
}

void Config::Set(std::string_view key, std::string_view value) {
  if (key == "corpus") {
    corpus_dir = value;
  } else if (key == "cache") {
    cache_dir = value;
  } else if (key == "k") {
    k = ParseInteger<int>(key, value, 1, 1 << 20);
  } else if (key == "t") {
    t = ParseInteger<int>(key, value, 1, 1 << 20);
  } else if (key == "transform") {
    transform = ParseTransform(value);
  } else if (key == "svd") {
    svd = ParseSwitch(key, value);
  } else if (key == "mode") {
    mode = ParseMode(value);
  } else if (key == "provider") {
    if (value.empty()) throw UsageError("provider must not be empty");
    provider = value;
  } else if (key == "seed") {
    seed = ParseInteger<std::uint64_t>(key, value, 0, UINT64_MAX);
  } else if (key == "ties") {
    if (value == "random") {
      ties = TieBreak::Policy::kRandom;
    } else if (value == "first") {
      ties = TieBreak::Policy::kFirst;
    } else {
      throw UsageError("bad value '" + std::string(value) +
                       "' for ties (expected random or first)");
    }
  } else if (key == "pmi-window") {
    pmi_window = ParseInteger<std::uint32_t>(key, value, 1, 1u << 20);
  } else if (key == "max-terms") {
    max_terms = ParseInteger<int>(key, value, 1, 20);
  } else if (key == "max-phrases") {
    max_phrases_per_pair = ParseInteger<std::size_t>(key, value, 0, SIZE_MAX);
  } else if (key == "pos-file") {
    pos_file = value;
  } else {
    throw UsageError("unknown option '" + std::string(key) + "'");
  }
}

std::string Config::Get(std::string_view key) const {
  if (key == "corpus") return corpus_dir;
  if (key == "cache") return cache_dir;
  if (key == "k") return std::to_string(k);
  if (key == "t") return std::to_string(t);
  if (key == "transform") return std::string(TransformName(transform));
  if (key == "svd") return svd ? "on" : "off";
  if (key == "mode") return std::string(ModeName(mode));
  if (key == "provider") return provider;
  if (key == "seed") return std::to_string(seed);
  if (key == "ties") return ties == TieBreak::Policy::kFirst ? "first" : "random";
  if (key == "pmi-window") return std::to_string(pmi_window);
  if (key == "max-terms") return std::to_string(max_terms);
  if (key == "max-phrases") return std::to_string(max_phrases_per_pair);
  if (key == "pos-file") return pos_file;
  throw UsageError("unknown option '" + std::string(key) + "'");
}

void Config::LoadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read config file '" + path.string() + "'");
  std::string line;
  for (int number = 1; std::getline(in, line); ++number) {
    std::string_view view = line;
    const auto hash = view.find('#');
    if (hash != std::string_view::npos) view = view.substr(0, hash);
    view = Trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw UsageError(fmt::format("{}:{}: expected key = value", path.string(),
                                   number));
    }
    const std::string_view key = Trim(view.substr(0, eq));
    std::string_view value = Trim(view.substr(eq + 1));
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') &&
        value.back() == value.front()) {
      value = value.substr(1, value.size() - 2);
    }
    try {
      Set(key, value);
    } catch (const UsageError& e) {
      throw UsageError(fmt::format("{}:{}: {}", path.string(), number, e.what()));
    }
  }
}

bool Config::NeedsCorpus() const {
  return NeedsRelationSpace() ||
         (NeedsProvider() && provider.find("pmi-ir") != std::string::npos);
}

double Accuracy(const Mapping& predicted, const Mapping& intended) {
  if (predicted.problem_id != intended.problem_id ||
      predicted.perm.size() != intended.perm.size() || predicted.perm.empty()) {
    throw DataError("cannot compare mappings of different problems ('" +
                    predicted.problem_id + "' and '" + intended.problem_id +
                    "')");
  }
  std::size_t correct = 0;
  for (std::size_t i = 0; i < predicted.perm.size(); ++i) {
    if (predicted.perm[i] == intended.perm[i]) ++correct;
  }
  return 100.0 * static_cast<double>(correct) /
         static_cast<double>(predicted.perm.size());
}

std::uint64_t ProblemSeed(std::uint64_t seed, std::size_t index) {
  // splitmix64 over the run seed offset by the problem position.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

RelationalModel BuildRelationalModel(std::span<const MappingProblem> problems,
                                     const CorpusIndex& corpus,
                                     const Config& config) {
  MiningOptions mining;
  mining.max_phrases_per_pair = config.max_phrases_per_pair;
  const MinedPatterns mined = MinePatterns(corpus, problems, mining);
  const PairPatternMatrix matrix = AssembleMatrix(mined, config.t);

  RelationSpace::Provenance provenance;
  provenance.t = config.t;
  provenance.corpus_digest = corpus.digest();
  SpaceBuildInfo info;
  RelationalModel model;
  model.space = BuildRelationSpace(matrix.frequencies, matrix.rows,
                                   {config.transform, config.k, config.svd},
                                   provenance, &info);
  model.stats.pairs = mined.pairs.size();
  model.stats.rows = matrix.rows.size();
  model.stats.columns = matrix.cols.size();
  model.stats.phrases = mined.total_phrases;
  model.stats.patterns = mined.stats.pattern_count();
  model.stats.f_density = info.f_density;
  model.stats.x_density = info.x_density;
  model.stats.k = model.space.provenance().k;
  spdlog::info("pairs {} rows {} columns {} phrases {} k {}", model.stats.pairs,
               model.stats.rows, model.stats.columns, model.stats.phrases,
               model.stats.k);
  return model;
}

Report RunBatch(const RunInputs& inputs, const Config& config) {
  ValidateAll(inputs.problems);
  RequireCorpus(inputs, config);
  std::optional<RelationalModel> model;
  if (config.NeedsRelationSpace()) {
    model = BuildRelationalModel(inputs.problems, *inputs.corpus, config);
  }
  std::optional<ProviderSource> providers;
  if (config.NeedsProvider()) providers.emplace(config, inputs.corpus);
  Report report =
      SolveProblems(inputs.problems, model ? &model->space : nullptr,
                    providers ? &*providers : nullptr, config);
  if (model) report.stats = model->stats;
  return report;
}

std::string FormatSolveOutput(const Report& report,
                              std::span<const MappingProblem> problems) {
  if (problems.size() != report.problems.size()) {
    throw InternalError("report does not match the problem list");
  }
  std::string out;
  for (std::size_t n = 0; n < problems.size(); ++n) {
    const MappingProblem& p = problems[n];
    const ProblemOutcome& o = report.problems[n];
    if (n > 0) out += '\n';
    out += "# " + p.id;
    if (!p.mnemonic.empty()) out += ' ' + p.mnemonic;
    out += '\n';
    ordered_json diag;
    diag["id"] = p.id;
    if (o.refused) {
      diag["refused"] = o.message;
    } else {
      for (int i = 0; i < p.m(); ++i) {
        out += p.source[static_cast<std::size_t>(i)].surface() + '\t' +
               p.target[static_cast<std::size_t>(o.result.mapping.perm[i])]
                   .surface() +
               '\n';
      }
      diag["score"] = o.result.score;
      diag["tie_count"] = o.result.tie_count;
      diag["mode"] = o.result.diagnostics.mode;
      diag["seed"] = o.result.diagnostics.seed;
      diag["search_space"] = o.result.diagnostics.search_space;
      diag["accuracy"] = Optional(o.accuracy);
    }
    out += diag.dump() + '\n';
  }
  return out;
}

std::string FormatReportTsv(const Report& report) {
  std::string out = "mapping\tsource_target\taccuracy\thumans\tties\n";
  for (const ProblemOutcome& o : report.problems) {
    out += fmt::format("{}\t{}\t{}\t{}\t{}\n", o.id, o.mnemonic,
                       o.refused ? std::string("refused") : Percent(o.accuracy),
                       Percent(o.human),
                       o.refused ? std::string("-")
                                 : std::to_string(o.result.tie_count));
  }
  out += fmt::format("Average\t\t{}\t{}\t\n", Percent(report.average),
                     Percent(report.human_average));
  return out;
}

std::string FormatReportJson(const Report& report) {
  ordered_json doc;
  doc["config"] = ConfigJson(report.config);
  if (report.stats) doc["stats"] = StatsJson(*report.stats);
  ordered_json list = ordered_json::array();
  for (const ProblemOutcome& o : report.problems) {
    ordered_json item;
    item["id"] = o.id;
    item["m"] = o.m;
    if (o.refused) {
      item["refused"] = o.message;
    } else {
      item["accuracy"] = Optional(o.accuracy);
      item["score"] = o.result.score;
      item["tie_count"] = o.result.tie_count;
      item["seed"] = o.result.diagnostics.seed;
      item["search_space"] = o.result.diagnostics.search_space;
      item["perm"] = o.result.mapping.perm;
    }
    item["human"] = Optional(o.human);
    list.push_back(std::move(item));
  }
  doc["problems"] = std::move(list);
  doc["average"] = Optional(report.average);
  doc["science_average"] = Optional(report.science_average);
  doc["metaphor_average"] = Optional(report.metaphor_average);
  doc["human_average"] = Optional(report.human_average);
  doc["refused"] = report.refused;
  return doc.dump(2) + '\n';
}

CoherenceReport RunCoherenceExperiment(const RunInputs& inputs, int m_prime,
                                       int trials, const Config& config) {
  ValidateAll(inputs.problems);
  if (config.mode != Mode::kRelational && config.mode != Mode::kAttributional) {
    throw UsageError("coherence runs in relational or attributional mode");
  }
  RequireCorpus(inputs, config);
  std::vector<Scorer> scorers;
  if (config.mode == Mode::kRelational) {
    const RelationalModel model =
        BuildRelationalModel(inputs.problems, *inputs.corpus, config);
    for (const MappingProblem& p : inputs.problems) {
      scorers.push_back(
          Scorer::Relational(RelationalTable::FromSpace(model.space, p)));
    }
  } else {
    const ProviderSource providers(config, inputs.corpus);
    for (const MappingProblem& p : inputs.problems) {
      scorers.push_back(Scorer::Attributional(
          AttributionalTable::FromProvider(*providers.For(p), p)));
    }
  }
  return RunCoherenceExperiment(inputs.problems, scorers, m_prime, trials,
                                config);
}

CoherenceReport RunCoherenceExperiment(std::span<const MappingProblem> problems,
                                       std::span<const Scorer> scorers,
                                       int m_prime, int trials,
                                       const Config& config) {
  if (problems.size() != scorers.size()) {
    throw InternalError("one scorer per problem is required");
  }
  if (m_prime < 1) throw UsageError("m' must be at least 1");
  if (trials < 1) throw UsageError("trials must be at least 1");

  CoherenceReport report;
  report.config = config;
  report.m_prime = m_prime;
  report.trials_per_problem = trials;
  std::vector<double> internal_all, total_all;
  for (std::size_t n = 0; n < problems.size(); ++n) {
    const MappingProblem& p = problems[n];
    CoherenceProblemSummary summary;
    summary.id = p.id;
    std::string skip;
    if (!p.intended) {
      skip = "it has no intended mapping";
    } else if (m_prime > p.m()) {
      skip = fmt::format("m' = {} exceeds m = {}", m_prime, p.m());
    } else if (p.m() > config.max_terms) {
      skip = fmt::format("m = {} is over the term budget", p.m());
    }
    if (!skip.empty()) {
      spdlog::warn("coherence: skipping problem '{}' because {}", p.id, skip);
      summary.skipped = true;
      report.problems.push_back(std::move(summary));
      continue;
    }
    std::mt19937_64 rng(ProblemSeed(config.seed, n));
    std::vector<int> all(static_cast<std::size_t>(p.m()));
    std::iota(all.begin(), all.end(), 0);
    std::vector<double> internal_scores, total_scores;
    for (int trial = 0; trial < trials; ++trial) {
      std::vector<int> source;
      std::sample(all.begin(), all.end(), std::back_inserter(source), m_prime,
                  rng);
      std::vector<int> target;
      for (int i : source) target.push_back((*p.intended)[static_cast<std::size_t>(i)]);
      std::sort(target.begin(), target.end());

      SolveOptions options;
      options.tie_break = config.TieBreakFor(rng());
      options.max_terms = config.max_terms;
      const ConstrainedResult internal = SolveConstrained(
          p, scorers[n], source, target, Coherence::kInternal, options);
      const ConstrainedResult total = SolveConstrained(
          p, scorers[n], source, target, Coherence::kTotal, options);

      auto accuracy = [&](const std::vector<int>& sub) {
        int correct = 0;
        for (std::size_t q = 0; q < source.size(); ++q) {
          const int intended = (*p.intended)[static_cast<std::size_t>(source[q])];
          if (target[static_cast<std::size_t>(sub[q])] == intended) ++correct;
        }
        return 100.0 * correct / static_cast<double>(source.size());
      };
      Subproblem sub;
      sub.id = fmt::format("{}.{}", p.id, trial + 1);
      sub.source = source;
      sub.internal_accuracy = accuracy(internal.sub);
      sub.total_accuracy = accuracy(total.sub);
      internal_scores.push_back(sub.internal_accuracy);
      total_scores.push_back(sub.total_accuracy);
      report.subproblems.push_back(std::move(sub));
    }
    summary.trials = trials;
    summary.internal_average = Mean(internal_scores);
    summary.total_average = Mean(total_scores);
    internal_all.insert(internal_all.end(), internal_scores.begin(),
                        internal_scores.end());
    total_all.insert(total_all.end(), total_scores.begin(), total_scores.end());
    report.problems.push_back(std::move(summary));
  }
  report.internal_average = Mean(internal_all);
  report.total_average = Mean(total_all);
  return report;
}

std::string FormatCoherenceTsv(const CoherenceReport& report) {
  std::string out = "subproblem\tsource_indices\tinternal\ttotal\n";
  for (const Subproblem& s : report.subproblems) {
    std::string indices;
    for (int i : s.source) {
      if (!indices.empty()) indices += ',';
      indices += std::to_string(i + 1);
    }
    out += fmt::format("{}\t{}\t{:.1f}\t{:.1f}\n", s.id, indices,
                       s.internal_accuracy, s.total_accuracy);
  }
  out += fmt::format("Average\t\t{}\t{}\n", Percent(report.internal_average),
                     Percent(report.total_average));
  return out;
}

std::string FormatCoherenceJson(const CoherenceReport& report) {
  ordered_json doc;
  doc["config"] = ConfigJson(report.config);
  doc["m_prime"] = report.m_prime;
  doc["trials"] = report.trials_per_problem;
  doc["subproblem_count"] = report.subproblems.size();
  ordered_json problems = ordered_json::array();
  for (const CoherenceProblemSummary& s : report.problems) {
    problems.push_back({{"id", s.id},
                        {"skipped", s.skipped},
                        {"trials", s.trials},
                        {"internal", Optional(s.internal_average)},
                        {"total", Optional(s.total_average)}});
  }
  doc["problems"] = std::move(problems);
  doc["internal_average"] = Optional(report.internal_average);
  doc["total_average"] = Optional(report.total_average);
  return doc.dump(2) + '\n';
}

std::vector<SweepPoint> ParseSweepGrid(std::string_view spec,
                                       const Config& base) {
  spec = Trim(spec);
  SweepPoint baseline{"baseline", base.k, base.t, base.transform, base.svd};
  if (spec == "standard") {
    std::vector<SweepPoint> grid{baseline};
    for (int k = 50; k <= 400; k += 50) {
      grid.push_back({"varying k", k, base.t, base.transform, true});
    }
    for (int t = 5; t <= 40; t += 5) {
      grid.push_back({"varying t", base.k, t, base.transform, true});
    }
    grid.push_back({"dropping SVD", base.k, base.t, base.transform, false});
    grid.push_back({"log entropy", base.k, base.t, Transform::kLogEntropy, true});
    return grid;
  }
  if (spec.empty()) throw UsageError("empty sweep grid");

  std::vector<int> ks{base.k}, ts{base.t};
  std::vector<Transform> transforms{base.transform};
  std::vector<bool> svds{base.svd};
  auto int_axis = [](std::string_view key, std::string_view values) {
    std::vector<int> out;
    const auto range = Split(values, ':');
    if (range.size() == 3) {
      const int lo = ParseInteger<int>(key, range[0], 1, 1 << 20);
      const int hi = ParseInteger<int>(key, range[1], lo, 1 << 20);
      const int step = ParseInteger<int>(key, range[2], 1, 1 << 20);
      for (int v = lo; v <= hi; v += step) out.push_back(v);
    } else if (range.size() == 1) {
      for (auto v : Split(values, ',')) {
        out.push_back(ParseInteger<int>(key, Trim(v), 1, 1 << 20));
      }
    } else {
      throw UsageError(fmt::format("bad range '{}' for {} (expected "
                                   "start:stop:step or a list)",
                                   values, key));
    }
    return out;
  };
  for (std::string_view clause : Split(spec, ';')) {
    clause = Trim(clause);
    if (clause.empty()) continue;
    const auto eq = clause.find('=');
    if (eq == std::string_view::npos) {
      throw UsageError("bad sweep clause '" + std::string(clause) + "'");
    }
    const std::string_view key = Trim(clause.substr(0, eq));
    const std::string_view values = Trim(clause.substr(eq + 1));
    if (key == "k") {
      ks = int_axis(key, values);
    } else if (key == "t") {
      ts = int_axis(key, values);
    } else if (key == "transform") {
      transforms.clear();
      for (auto v : Split(values, ',')) transforms.push_back(ParseTransform(Trim(v)));
    } else if (key == "svd") {
      svds.clear();
      for (auto v : Split(values, ',')) svds.push_back(ParseSwitch(key, Trim(v)));
    } else {
      throw UsageError("unknown sweep axis '" + std::string(key) + "'");
    }
  }
  std::vector<SweepPoint> grid;
  for (int k : ks)
    for (int t : ts)
      for (Transform tr : transforms)
        for (bool svd : svds) grid.push_back({"grid", k, t, tr, svd});
  return grid;
}

SweepReport RunSensitivitySweep(const RunInputs& inputs,
                                std::span<const SweepPoint> grid,
                                const Config& config) {
  ValidateAll(inputs.problems);
  if (!config.NeedsRelationSpace()) {
    throw UsageError("the sweep varies the relation space; use a relational "
                     "or hybrid mode");
  }
  RequireCorpus(inputs, config);
  MiningOptions mining;
  mining.max_phrases_per_pair = config.max_phrases_per_pair;
  const MinedPatterns mined = MinePatterns(*inputs.corpus, inputs.problems, mining);
  std::optional<ProviderSource> providers;
  if (config.NeedsProvider()) providers.emplace(config, inputs.corpus);

  SweepReport report;
  report.config = config;
  report.n_r = mined.kept_rows.size();

  std::map<int, PairPatternMatrix> matrices;
  struct Decomposition {
    SparseMatrix x;
    std::vector<char> zero_rows;
    TruncatedSvd svd;
  };
  std::map<std::pair<int, Transform>, Decomposition> decompositions;
  std::map<std::pair<int, Transform>, int> largest_k;
  for (const SweepPoint& point : grid) {
    if (point.svd) {
      int& k = largest_k[{point.t, point.transform}];
      k = std::max(k, point.k);
    }
  }

  for (const SweepPoint& point : grid) {
    auto mit = matrices.find(point.t);
    if (mit == matrices.end()) {
      mit = matrices.emplace(point.t, AssembleMatrix(mined, point.t)).first;
    }
    const PairPatternMatrix& matrix = mit->second;
    RelationSpace::Provenance provenance;
    provenance.t = point.t;
    provenance.corpus_digest = inputs.corpus->digest();

    RelationSpace space;
    if (!point.svd || matrix.frequencies.nonzeros() == 0) {
      space = BuildRelationSpace(matrix.frequencies, matrix.rows,
                                 {point.transform, point.k, point.svd},
                                 provenance);
    } else {
      const auto key = std::make_pair(point.t, point.transform);
      auto dit = decompositions.find(key);
      if (dit == decompositions.end()) {
        Decomposition d;
        d.x = ApplyTransform(matrix.frequencies, point.transform);
        for (std::size_t r = 0; r < d.x.rows(); ++r) {
          d.zero_rows.push_back(d.x.RowIsEmpty(r));
        }
        d.svd = ComputeTruncatedSvd(d.x, largest_k.at(key));
        dit = decompositions.emplace(key, std::move(d)).first;
      }
      const Decomposition& d = dit->second;
      std::unique_ptr<bool[]> zero(new bool[d.zero_rows.size()]);
      std::copy(d.zero_rows.begin(), d.zero_rows.end(), zero.get());
      provenance.transform = point.transform;
      provenance.k = point.k;
      provenance.svd = true;
      space = RelationSpace::Build(
          d.svd.u.leftCols(point.k), d.svd.sigma.head(point.k), matrix.rows,
          std::span<const bool>(zero.get(), d.zero_rows.size()), provenance);
    }

    Config run = config;
    run.k = point.k;
    run.t = point.t;
    run.transform = point.transform;
    run.svd = point.svd;
    const Report batch = SolveProblems(inputs.problems, &space,
                                       providers ? &*providers : nullptr, run);
    SweepRow row;
    row.point = point;
    row.k_label = point.svd ? point.k : static_cast<int>(matrix.rows.size());
    row.columns = matrix.cols.size();
    row.accuracy = batch.average;
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string FormatSweepTsv(const SweepReport& report) {
  std::string out = "experiment\tk\tt\tn_c\ttransform\tsvd\taccuracy\n";
  for (const SweepRow& row : report.rows) {
    out += fmt::format("{}\t{}\t{}\t{}\t{}\t{}\t{}\n", row.point.experiment,
                       row.k_label, row.point.t, row.columns,
                       TransformName(row.point.transform),
                       row.point.svd ? "on" : "off", Percent(row.accuracy));
  }
  return out;
}

std::string FormatSweepJson(const SweepReport& report) {
  ordered_json doc;
  doc["config"] = ConfigJson(report.config);
  doc["n_r"] = report.n_r;
  ordered_json rows = ordered_json::array();
  for (const SweepRow& row : report.rows) {
    rows.push_back({{"experiment", row.point.experiment},
                    {"k", row.k_label},
                    {"t", row.point.t},
                    {"n_c", row.columns},
                    {"transform", std::string(TransformName(row.point.transform))},
                    {"svd", row.point.svd ? "on" : "off"},
                    {"accuracy", Optional(row.accuracy)}});
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + '\n';
}

}  // namespace lrme
