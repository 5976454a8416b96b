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

// lrme: command-line front end over the C library.
//
//   lrme index --corpus DIR [--cache DIR]
//   lrme solve [--builtin | PROBLEMS.json] [options]
//   lrme eval [--builtin | PROBLEMS.json] [--output TSV] [--json FILE]
//   lrme coherence --m-prime 3 --trials 10 [options]
//   lrme sweep [--grid standard | --k 50:400:50 --t 20 ...] [options]
//
// Exit codes: 0 success, 1 usage, 2 data error, 3 budget refusal.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lrme/lrme.h"

namespace {

struct ConfigFlag {
  std::string key;
  std::string value;
  CLI::Option* option = nullptr;
};

struct Options {
  std::string config_file;
  bool quiet = false;
  bool builtin = false;
  std::string problems;
  std::string output = "-";
  std::string json;
  bool no_svd = false;
  int m_prime = 3;
  int trials = 10;
  std::string grid;
  std::string sweep_k, sweep_t, sweep_transform, sweep_svd;
  std::string save_index;
  std::map<std::string, std::unique_ptr<ConfigFlag>> flags;
};

// Owning wrappers for the C handles.
struct ConfigDeleter {
  void operator()(lrme_config* c) const { lrme_config_destroy(c); }
};
struct CorpusDeleter {
  void operator()(lrme_corpus* c) const { lrme_corpus_destroy(c); }
};
struct DatasetDeleter {
  void operator()(lrme_dataset* d) const { lrme_dataset_destroy(d); }
};
struct StringDeleter {
  void operator()(char* s) const { lrme_string_free(s); }
};
using ConfigHandle = std::unique_ptr<lrme_config, ConfigDeleter>;
using CorpusHandle = std::unique_ptr<lrme_corpus, CorpusDeleter>;
using DatasetHandle = std::unique_ptr<lrme_dataset, DatasetDeleter>;
using OwnedString = std::unique_ptr<char, StringDeleter>;

class Failure {
 public:
  explicit Failure(lrme_status status) : status_(status) {}
  lrme_status status() const { return status_; }

 private:
  lrme_status status_;
};

void Check(lrme_status status) {
  if (status != LRME_OK) throw Failure(status);
}

void UsageFailure(const std::string& message) {
  std::cerr << "lrme: " << message << "\n";
  throw Failure(LRME_ERR_USAGE);
}

void AddFlag(CLI::App* app, Options& opts, const std::string& key,
             const std::string& help) {
  auto& flag = opts.flags[app->get_name() + "/" + key];
  flag = std::make_unique<ConfigFlag>();
  flag->key = key;
  flag->option = app->add_option("--" + key, flag->value, help);
}

void AddPipelineFlags(CLI::App* app, Options& opts, bool with_space_params) {
  AddFlag(app, opts, "corpus", "Corpus directory of .txt files");
  AddFlag(app, opts, "cache", "Directory for cached corpus indexes");
  if (with_space_params) {
    AddFlag(app, opts, "k", "SVD rank (default 300)");
    AddFlag(app, opts, "t", "Columns per row factor (default 20)");
    AddFlag(app, opts, "transform", "ppmic or logentropy");
    AddFlag(app, opts, "svd", "on or off");
    app->add_flag("--no-svd", opts.no_svd, "Build the space without truncation");
  }
  AddFlag(app, opts, "mode", "relational, attributional, hybrid-add, hybrid-mul");
  AddFlag(app, opts, "provider", "pos, pmi-ir, external:PATH, or X+pos");
  AddFlag(app, opts, "seed", "Seed for tie-breaking and sampling (default 0)");
  AddFlag(app, opts, "ties", "random or first");
  AddFlag(app, opts, "pmi-window", "PMI-IR window in words (default 10)");
  AddFlag(app, opts, "max-terms", "Largest m solved exhaustively (default 10)");
  AddFlag(app, opts, "max-phrases", "Cap on phrases retrieved per pair");
  AddFlag(app, opts, "pos-file", "term<TAB>tag file overriding problem tags");
  app->add_flag("--builtin", opts.builtin, "Use the twenty builtin problems");
  app->add_option("problems", opts.problems, "Problem file (JSON)");
}

ConfigHandle MakeConfig(const CLI::App* sub, const Options& opts) {
  lrme_config* raw = nullptr;
  Check(lrme_config_create(&raw));
  ConfigHandle config(raw);
  if (!opts.config_file.empty()) {
    Check(lrme_config_load_file(config.get(), opts.config_file.c_str()));
  }
  const std::string prefix = sub->get_name() + "/";
  for (const auto& [name, flag] : opts.flags) {
    if (name.rfind(prefix, 0) != 0 || flag->option->count() == 0) continue;
    Check(lrme_config_set(config.get(), flag->key.c_str(), flag->value.c_str()));
  }
  if (opts.no_svd) Check(lrme_config_set(config.get(), "svd", "off"));
  return config;
}

std::string GetValue(const lrme_config* config, const char* key) {
  char* raw = nullptr;
  Check(lrme_config_get(config, key, &raw));
  OwnedString value(raw);
  return value.get();
}

CorpusHandle OpenCorpus(const lrme_config* config, bool required) {
  const std::string dir = GetValue(config, "corpus");
  if (dir.empty()) {
    if (required) UsageFailure("--corpus is required");
    return nullptr;
  }
  const std::string cache = GetValue(config, "cache");
  lrme_corpus* raw = nullptr;
  int hit = 0;
  Check(lrme_corpus_open(dir.c_str(), cache.empty() ? nullptr : cache.c_str(),
                         &raw, &hit));
  return CorpusHandle(raw);
}

DatasetHandle LoadDataset(const Options& opts) {
  lrme_dataset* raw = nullptr;
  if (opts.builtin && !opts.problems.empty()) {
    UsageFailure("give either --builtin or a problem file, not both");
  }
  if (opts.builtin) {
    Check(lrme_dataset_builtin(&raw));
  } else if (!opts.problems.empty()) {
    Check(lrme_dataset_load(opts.problems.c_str(), &raw));
  } else {
    UsageFailure("no problems given (use --builtin or a problem file)");
  }
  return DatasetHandle(raw);
}

void Write(const std::string& path, const char* text) {
  if (path.empty() || path == "-") {
    std::fputs(text, stdout);
    std::fflush(stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) {
    std::cerr << "lrme: cannot write '" << path << "'\n";
    throw Failure(LRME_ERR_DATA);
  }
}

int RunIndex(const CLI::App* sub, const Options& opts) {
  ConfigHandle config = MakeConfig(sub, opts);
  const std::string dir = GetValue(config.get(), "corpus");
  if (dir.empty()) UsageFailure("--corpus is required");
  const std::string cache = GetValue(config.get(), "cache");
  lrme_corpus* raw = nullptr;
  int hit = 0;
  Check(lrme_corpus_open(dir.c_str(), cache.empty() ? nullptr : cache.c_str(),
                         &raw, &hit));
  CorpusHandle corpus(raw);
  if (!opts.save_index.empty()) {
    Check(lrme_corpus_save(corpus.get(), opts.save_index.c_str()));
  }
  std::printf("documents\t%zu\ntokens\t%llu\ndigest\t%s\ncache\t%s\n",
              lrme_corpus_document_count(corpus.get()),
              static_cast<unsigned long long>(
                  lrme_corpus_total_tokens(corpus.get())),
              lrme_corpus_digest(corpus.get()),
              cache.empty() ? "none" : (hit ? "hit" : "miss"));
  return 0;
}

// Runs a workflow that may finish with a budget refusal after producing
// output; the output is still written and the status becomes the exit code.
int Finish(lrme_status status) {
  if (status == LRME_OK) return 0;
  std::cerr << "lrme: " << lrme_last_error() << "\n";
  return static_cast<int>(status);
}

int RunSolve(const CLI::App* sub, const Options& opts) {
  ConfigHandle config = MakeConfig(sub, opts);
  DatasetHandle dataset = LoadDataset(opts);
  CorpusHandle corpus = OpenCorpus(config.get(), false);
  char* raw = nullptr;
  const lrme_status status =
      lrme_solve(dataset.get(), corpus.get(), config.get(), &raw);
  if (status != LRME_OK && status != LRME_ERR_BUDGET) throw Failure(status);
  OwnedString text(raw);
  Write(opts.output, text.get());
  return Finish(status);
}

int RunEval(const CLI::App* sub, const Options& opts) {
  ConfigHandle config = MakeConfig(sub, opts);
  DatasetHandle dataset = LoadDataset(opts);
  CorpusHandle corpus = OpenCorpus(config.get(), false);
  char* tsv = nullptr;
  char* json = nullptr;
  const lrme_status status =
      lrme_eval(dataset.get(), corpus.get(), config.get(), &tsv, &json);
  if (status != LRME_OK && status != LRME_ERR_BUDGET) throw Failure(status);
  OwnedString tsv_text(tsv), json_text(json);
  Write(opts.output, tsv_text.get());
  if (!opts.json.empty()) Write(opts.json, json_text.get());
  return Finish(status);
}

int RunCoherence(const CLI::App* sub, const Options& opts) {
  ConfigHandle config = MakeConfig(sub, opts);
  DatasetHandle dataset = LoadDataset(opts);
  CorpusHandle corpus = OpenCorpus(config.get(), false);
  char* tsv = nullptr;
  char* json = nullptr;
  Check(lrme_coherence(dataset.get(), corpus.get(), config.get(), opts.m_prime,
                       opts.trials, &tsv, &json));
  OwnedString tsv_text(tsv), json_text(json);
  Write(opts.output, tsv_text.get());
  if (!opts.json.empty()) Write(opts.json, json_text.get());
  return 0;
}

int RunSweep(const CLI::App* sub, const Options& opts) {
  ConfigHandle config = MakeConfig(sub, opts);
  DatasetHandle dataset = LoadDataset(opts);
  CorpusHandle corpus = OpenCorpus(config.get(), true);
  std::string grid = opts.grid;
  std::string axes;
  auto axis = [&](const char* key, const std::string& value) {
    if (value.empty()) return;
    if (!axes.empty()) axes += ';';
    axes += std::string(key) + "=" + value;
  };
  axis("k", opts.sweep_k);
  axis("t", opts.sweep_t);
  axis("transform", opts.sweep_transform);
  axis("svd", opts.sweep_svd);
  if (!axes.empty() && !grid.empty()) {
    UsageFailure("give either --grid or axis ranges, not both");
  }
  if (grid.empty()) grid = axes.empty() ? "standard" : axes;
  char* tsv = nullptr;
  char* json = nullptr;
  Check(lrme_sweep(dataset.get(), corpus.get(), config.get(), grid.c_str(),
                   &tsv, &json));
  OwnedString tsv_text(tsv), json_text(json);
  Write(opts.output, tsv_text.get());
  if (!opts.json.empty()) Write(opts.json, json_text.get());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Corpus-driven analogical mapping between two lists of terms"};
  app.require_subcommand(1);
  Options opts;
  app.add_option("--config", opts.config_file,
                 "File of key = value settings; flags override it");
  app.add_flag("-q,--quiet", opts.quiet, "Only report warnings and errors");

  CLI::App* index = app.add_subcommand("index", "Build or reuse a corpus index");
  AddFlag(index, opts, "corpus", "Corpus directory of .txt files");
  AddFlag(index, opts, "cache", "Directory for cached corpus indexes");
  index->add_option("--save", opts.save_index, "Also write the index here");

  CLI::App* solve = app.add_subcommand("solve", "Solve mapping problems");
  AddPipelineFlags(solve, opts, true);
  solve->add_option("-o,--output", opts.output, "Output file (default stdout)");

  CLI::App* eval = app.add_subcommand("eval", "Accuracy report over problems");
  AddPipelineFlags(eval, opts, true);
  eval->add_option("-o,--output", opts.output, "TSV report (default stdout)");
  eval->add_option("--json", opts.json, "JSON diagnostics sidecar");

  CLI::App* coherence = app.add_subcommand(
      "coherence", "Internal versus total coherence on reduced problems");
  AddPipelineFlags(coherence, opts, true);
  coherence->add_option("--m-prime", opts.m_prime, "Reduced problem size")
      ->capture_default_str();
  coherence->add_option("--trials", opts.trials, "Subsets per problem")
      ->capture_default_str();
  coherence->add_option("-o,--output", opts.output, "TSV report (default stdout)");
  coherence->add_option("--json", opts.json, "JSON diagnostics sidecar");

  CLI::App* sweep = app.add_subcommand("sweep", "Parameter sensitivity table");
  AddPipelineFlags(sweep, opts, false);
  sweep->add_option("--grid", opts.grid,
                    "\"standard\" or k=..;t=..;transform=..;svd=..");
  sweep->add_option("--k", opts.sweep_k, "k values: start:stop:step or a list");
  sweep->add_option("--t", opts.sweep_t, "t values: start:stop:step or a list");
  sweep->add_option("--transform", opts.sweep_transform,
                    "Transforms to try, comma separated");
  sweep->add_option("--svd", opts.sweep_svd, "on, off or on,off");
  sweep->add_option("-o,--output", opts.output, "TSV report (default stdout)");
  sweep->add_option("--json", opts.json, "JSON diagnostics sidecar");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(LRME_ERR_USAGE);
  }

  try {
    Check(lrme_set_log_level(opts.quiet ? "warn" : "info"));
    if (index->parsed()) return RunIndex(index, opts);
    if (solve->parsed()) return RunSolve(solve, opts);
    if (eval->parsed()) return RunEval(eval, opts);
    if (coherence->parsed()) return RunCoherence(coherence, opts);
    if (sweep->parsed()) return RunSweep(sweep, opts);
  } catch (const Failure& failure) {
    if (failure.status() != LRME_OK && *lrme_last_error()) {
      std::cerr << "lrme: " << lrme_last_error() << "\n";
    }
    return static_cast<int>(failure.status());
  }
  return static_cast<int>(LRME_ERR_USAGE);
}
