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

#include "lrme/lrme.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "lrme/corpus.hpp"
#include "lrme/dataset.hpp"
#include "lrme/error.hpp"
#include "lrme/evaluation.hpp"
#include "lrme/relation_space.hpp"

struct lrme_config {
  lrme::Config config;
};

struct lrme_corpus {
  std::shared_ptr<const lrme::CorpusIndex> index;
};

struct lrme_dataset {
  std::vector<lrme::MappingProblem> problems;
};

struct lrme_space {
  lrme::RelationSpace space;
};

namespace {

thread_local std::string last_error;

// Diagnostics never share stdout with reports.
const bool stderr_logging = [] {
  spdlog::set_default_logger(std::make_shared<spdlog::logger>(
      "lrme", std::make_shared<spdlog::sinks::stderr_color_sink_mt>()));
  return true;
}();

template <typename F>
lrme_status Guard(F&& body) {
  last_error.clear();
  try {
    return body();
  } catch (const lrme::UsageError& e) {
    last_error = e.what();
    return LRME_ERR_USAGE;
  } catch (const lrme::DataError& e) {
    last_error = e.what();
    return LRME_ERR_DATA;
  } catch (const lrme::BudgetError& e) {
    last_error = e.what();
    return LRME_ERR_BUDGET;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return LRME_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return LRME_ERR_INTERNAL;
  }
}

lrme_status Missing(const char* what) {
  last_error = std::string(what) + " must not be NULL";
  return LRME_ERR_USAGE;
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

lrme::RunInputs Inputs(const lrme_dataset* dataset, const lrme_corpus* corpus) {
  return {dataset->problems, corpus ? corpus->index : nullptr};
}

}  // namespace

extern "C" {

const char* lrme_version(void) { return "0.1.0"; }

const char* lrme_last_error(void) { return last_error.c_str(); }

void lrme_string_free(char* s) { std::free(s); }

lrme_status lrme_set_log_level(const char* level) {
  if (!level) return Missing("level");
  return Guard([&] {
    const std::string name = level;
    if (name == "off") {
      spdlog::set_level(spdlog::level::off);
    } else if (name == "warn") {
      spdlog::set_level(spdlog::level::warn);
    } else if (name == "info") {
      spdlog::set_level(spdlog::level::info);
    } else {
      throw lrme::UsageError("unknown log level '" + name + "'");
    }
    return LRME_OK;
  });
}

lrme_status lrme_config_create(lrme_config** out) {
  if (!out) return Missing("out");
  return Guard([&] {
    *out = new lrme_config();
    return LRME_OK;
  });
}

void lrme_config_destroy(lrme_config* config) { delete config; }

lrme_status lrme_config_set(lrme_config* config, const char* key,
                            const char* value) {
  if (!config || !key || !value) return Missing("config, key and value");
  return Guard([&] {
    config->config.Set(key, value);
    return LRME_OK;
  });
}

lrme_status lrme_config_get(const lrme_config* config, const char* key,
                            char** value) {
  if (!config || !key || !value) return Missing("config, key and value");
  return Guard([&] {
    *value = CopyString(config->config.Get(key));
    return LRME_OK;
  });
}

lrme_status lrme_config_load_file(lrme_config* config, const char* path) {
  if (!config || !path) return Missing("config and path");
  return Guard([&] {
    config->config.LoadFile(path);
    return LRME_OK;
  });
}

lrme_status lrme_corpus_open(const char* corpus_dir, const char* cache_dir,
                             lrme_corpus** out, int* cache_hit) {
  if (!corpus_dir || !out) return Missing("corpus_dir and out");
  return Guard([&] {
    std::optional<std::filesystem::path> cache;
    if (cache_dir && *cache_dir) cache = cache_dir;
    bool hit = false;
    auto index = std::make_shared<const lrme::CorpusIndex>(
        lrme::OpenCorpus(corpus_dir, cache, &hit));
    if (cache_hit) *cache_hit = hit ? 1 : 0;
    *out = new lrme_corpus{std::move(index)};
    return LRME_OK;
  });
}

lrme_status lrme_corpus_load(const char* index_path, lrme_corpus** out) {
  if (!index_path || !out) return Missing("index_path and out");
  return Guard([&] {
    auto index = std::make_shared<const lrme::CorpusIndex>(
        lrme::CorpusIndex::Load(index_path));
    *out = new lrme_corpus{std::move(index)};
    return LRME_OK;
  });
}

lrme_status lrme_corpus_save(const lrme_corpus* corpus, const char* index_path) {
  if (!corpus || !index_path) return Missing("corpus and index_path");
  return Guard([&] {
    corpus->index->Save(index_path);
    return LRME_OK;
  });
}

void lrme_corpus_destroy(lrme_corpus* corpus) { delete corpus; }

uint64_t lrme_corpus_total_tokens(const lrme_corpus* corpus) {
  return corpus ? corpus->index->total_tokens() : 0;
}

size_t lrme_corpus_document_count(const lrme_corpus* corpus) {
  return corpus ? corpus->index->document_count() : 0;
}

const char* lrme_corpus_digest(const lrme_corpus* corpus) {
  return corpus ? corpus->index->digest().c_str() : "";
}

lrme_status lrme_corpus_count_phrases(const lrme_corpus* corpus, const char* x,
                                      const char* y, size_t* count) {
  if (!corpus || !x || !y || !count) return Missing("corpus, x, y and count");
  return Guard([&] {
    const lrme::TermPair pair{lrme::Term(x), lrme::Term(y)};
    *count = lrme::SearchPhrases(*corpus->index, pair).size();
    return LRME_OK;
  });
}

lrme_status lrme_dataset_builtin(lrme_dataset** out) {
  if (!out) return Missing("out");
  return Guard([&] {
    *out = new lrme_dataset{lrme::BuiltinProblems()};
    return LRME_OK;
  });
}

lrme_status lrme_dataset_load(const char* path, lrme_dataset** out) {
  if (!path || !out) return Missing("path and out");
  return Guard([&] {
    *out = new lrme_dataset{lrme::LoadProblems(path)};
    return LRME_OK;
  });
}

lrme_status lrme_dataset_parse(const char* json, lrme_dataset** out) {
  if (!json || !out) return Missing("json and out");
  return Guard([&] {
    *out = new lrme_dataset{lrme::ParseProblems(json)};
    return LRME_OK;
  });
}

void lrme_dataset_destroy(lrme_dataset* dataset) { delete dataset; }

size_t lrme_dataset_size(const lrme_dataset* dataset) {
  return dataset ? dataset->problems.size() : 0;
}

lrme_status lrme_dataset_to_json(const lrme_dataset* dataset, char** json) {
  if (!dataset || !json) return Missing("dataset and json");
  return Guard([&] {
    *json = CopyString(lrme::ProblemsToJson(dataset->problems));
    return LRME_OK;
  });
}

lrme_status lrme_solve(const lrme_dataset* dataset, const lrme_corpus* corpus,
                       const lrme_config* config, char** output) {
  if (!dataset || !config || !output) return Missing("dataset, config and output");
  return Guard([&] {
    const lrme::Report report =
        lrme::RunBatch(Inputs(dataset, corpus), config->config);
    *output = CopyString(lrme::FormatSolveOutput(report, dataset->problems));
    if (report.refused > 0) {
      last_error = std::to_string(report.refused) +
                   " problem(s) refused: over the term budget";
      return LRME_ERR_BUDGET;
    }
    return LRME_OK;
  });
}

lrme_status lrme_eval(const lrme_dataset* dataset, const lrme_corpus* corpus,
                      const lrme_config* config, char** report_tsv,
                      char** diagnostics_json) {
  if (!dataset || !config || !report_tsv || !diagnostics_json) {
    return Missing("dataset, config and outputs");
  }
  return Guard([&] {
    const lrme::Report report =
        lrme::RunBatch(Inputs(dataset, corpus), config->config);
    *report_tsv = CopyString(lrme::FormatReportTsv(report));
    *diagnostics_json = CopyString(lrme::FormatReportJson(report));
    if (report.refused > 0) {
      last_error = std::to_string(report.refused) +
                   " problem(s) refused: over the term budget";
      return LRME_ERR_BUDGET;
    }
    return LRME_OK;
  });
}

lrme_status lrme_coherence(const lrme_dataset* dataset,
                           const lrme_corpus* corpus, const lrme_config* config,
                           int m_prime, int trials, char** report_tsv,
                           char** diagnostics_json) {
  if (!dataset || !config || !report_tsv || !diagnostics_json) {
    return Missing("dataset, config and outputs");
  }
  return Guard([&] {
    const lrme::CoherenceReport report = lrme::RunCoherenceExperiment(
        Inputs(dataset, corpus), m_prime, trials, config->config);
    *report_tsv = CopyString(lrme::FormatCoherenceTsv(report));
    *diagnostics_json = CopyString(lrme::FormatCoherenceJson(report));
    return LRME_OK;
  });
}

lrme_status lrme_sweep(const lrme_dataset* dataset, const lrme_corpus* corpus,
                       const lrme_config* config, const char* grid,
                       char** report_tsv, char** diagnostics_json) {
  if (!dataset || !config || !grid || !report_tsv || !diagnostics_json) {
    return Missing("dataset, config, grid and outputs");
  }
  return Guard([&] {
    const auto points = lrme::ParseSweepGrid(grid, config->config);
    const lrme::SweepReport report = lrme::RunSensitivitySweep(
        Inputs(dataset, corpus), points, config->config);
    *report_tsv = CopyString(lrme::FormatSweepTsv(report));
    *diagnostics_json = CopyString(lrme::FormatSweepJson(report));
    return LRME_OK;
  });
}

lrme_status lrme_space_build(const lrme_dataset* dataset,
                             const lrme_corpus* corpus,
                             const lrme_config* config, lrme_space** out) {
  if (!dataset || !corpus || !config || !out) {
    return Missing("dataset, corpus, config and out");
  }
  return Guard([&] {
    auto model = lrme::BuildRelationalModel(dataset->problems, *corpus->index,
                                            config->config);
    *out = new lrme_space{std::move(model.space)};
    return LRME_OK;
  });
}

lrme_status lrme_space_load(const char* path, lrme_space** out) {
  if (!path || !out) return Missing("path and out");
  return Guard([&] {
    *out = new lrme_space{lrme::RelationSpace::Load(path)};
    return LRME_OK;
  });
}

lrme_status lrme_space_save(const lrme_space* space, const char* path) {
  if (!space || !path) return Missing("space and path");
  return Guard([&] {
    space->space.Save(path);
    return LRME_OK;
  });
}

void lrme_space_destroy(lrme_space* space) { delete space; }

size_t lrme_space_rows(const lrme_space* space) {
  return space ? space->space.rows() : 0;
}

lrme_status lrme_space_similarity(const lrme_space* space, const char* a,
                                  const char* b, const char* c, const char* d,
                                  double* similarity) {
  if (!space || !a || !b || !c || !d || !similarity) {
    return Missing("space, terms and similarity");
  }
  return Guard([&] {
    *similarity = space->space.Similarity(lrme::Term(a), lrme::Term(b),
                                          lrme::Term(c), lrme::Term(d));
    return LRME_OK;
  });
}

}  // extern "C"
