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

#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include <unistd.h>

#include "lrme/lrme.h"

namespace {

namespace fs = std::filesystem;

// Owns a char* returned by the library.
struct Text {
  char* p = nullptr;
  ~Text() { lrme_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

constexpr const char* kProblems = R"({"problems": [
  {"id": "Q1", "source": ["alpha", "beta", "gamma"],
   "target": ["zeta", "delta", "epsilon"],
   "intended": {"alpha": "delta", "beta": "epsilon", "gamma": "zeta"}},
  {"id": "Q2", "source": ["red", "green", "blue"],
   "target": ["one", "two", "three"],
   "intended": {"red": "one", "green": "two", "blue": "three"}}
]})";

class CApi : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    lrme_set_log_level("off");
    dir_ = fs::temp_directory_path() / ("lrme_capi_" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_ / "corpus");
    std::ofstream out(dir_ / "corpus" / "text.txt");
    const char* edges[][3] = {
        {"alpha", "beta", "ab"},   {"delta", "epsilon", "ab"},
        {"beta", "gamma", "bg"},   {"epsilon", "zeta", "bg"},
        {"alpha", "gamma", "ag"},  {"delta", "zeta", "ag"},
        {"red", "green", "rg"},    {"one", "two", "rg"},
        {"green", "blue", "gb"},   {"two", "three", "gb"},
        {"red", "blue", "rb"},     {"one", "three", "rb"}};
    for (int r = 0; r < 3; ++r) {
      for (const auto& e : edges) {
        out << "filler words here now the " << e[0] << " via" << e[2] << ' '
            << e[1] << " today. more filler text to keep apart\n";
        out << "filler words here now the " << e[1] << " via" << e[2] << ' '
            << e[0] << " today. more filler text to keep apart\n";
      }
    }
  }
  static void TearDownTestSuite() { fs::remove_all(dir_); }

  static std::string Corpus() { return (dir_ / "corpus").string(); }
  static std::string Cache() { return (dir_ / "cache").string(); }

  static fs::path dir_;
};
fs::path CApi::dir_;

TEST_F(CApi, VersionAndErrors) {
  EXPECT_STRNE(lrme_version(), "");
  EXPECT_EQ(lrme_config_create(nullptr), LRME_ERR_USAGE);
  EXPECT_STRNE(lrme_last_error(), "");
  EXPECT_EQ(lrme_set_log_level("loud"), LRME_ERR_USAGE);
  EXPECT_NE(std::string(lrme_last_error()).find("loud"), std::string::npos);
}

TEST_F(CApi, ConfigRoundTrip) {
  lrme_config* config = nullptr;
  ASSERT_EQ(lrme_config_create(&config), LRME_OK);
  EXPECT_EQ(lrme_config_set(config, "k", "25"), LRME_OK);
  Text value;
  ASSERT_EQ(lrme_config_get(config, "k", &value.p), LRME_OK);
  EXPECT_EQ(value.str(), "25");
  EXPECT_EQ(lrme_config_set(config, "k", "-1"), LRME_ERR_USAGE);
  EXPECT_EQ(lrme_config_set(config, "nonsense", "1"), LRME_ERR_USAGE);
  EXPECT_EQ(lrme_config_load_file(config, "/nonexistent.conf"), LRME_ERR_USAGE);
  lrme_config_destroy(config);
}

TEST_F(CApi, CorpusCacheAndPhrases) {
  lrme_corpus* corpus = nullptr;
  int hit = -1;
  ASSERT_EQ(lrme_corpus_open(Corpus().c_str(), Cache().c_str(), &corpus, &hit), LRME_OK)
      << lrme_last_error();
  EXPECT_EQ(hit, 0);
  EXPECT_EQ(lrme_corpus_document_count(corpus), 1u);
  EXPECT_GT(lrme_corpus_total_tokens(corpus), 0u);
  const std::string digest = lrme_corpus_digest(corpus);
  size_t count = 0;
  ASSERT_EQ(lrme_corpus_count_phrases(corpus, "alpha", "beta", &count), LRME_OK);
  EXPECT_EQ(count, 3u);
  lrme_corpus_destroy(corpus);

  ASSERT_EQ(lrme_corpus_open(Corpus().c_str(), Cache().c_str(), &corpus, &hit), LRME_OK);
  EXPECT_EQ(hit, 1);
  EXPECT_EQ(lrme_corpus_digest(corpus), digest);
  const std::string saved = (dir_ / "index.txt").string();
  ASSERT_EQ(lrme_corpus_save(corpus, saved.c_str()), LRME_OK);
  lrme_corpus_destroy(corpus);
  ASSERT_EQ(lrme_corpus_load(saved.c_str(), &corpus), LRME_OK);
  EXPECT_EQ(lrme_corpus_digest(corpus), digest);
  lrme_corpus_destroy(corpus);

  EXPECT_EQ(lrme_corpus_open("/nonexistent/corpus", nullptr, &corpus, nullptr),
            LRME_ERR_USAGE);
}

TEST_F(CApi, DatasetHandles) {
  lrme_dataset* builtin = nullptr;
  ASSERT_EQ(lrme_dataset_builtin(&builtin), LRME_OK);
  EXPECT_EQ(lrme_dataset_size(builtin), 20u);
  Text json;
  ASSERT_EQ(lrme_dataset_to_json(builtin, &json.p), LRME_OK);
  lrme_dataset* copy = nullptr;
  ASSERT_EQ(lrme_dataset_parse(json.p, &copy), LRME_OK);
  EXPECT_EQ(lrme_dataset_size(copy), 20u);
  lrme_dataset_destroy(copy);
  lrme_dataset_destroy(builtin);

  lrme_dataset* bad = nullptr;
  EXPECT_EQ(lrme_dataset_parse(R"([{"id": "B", "source": ["a", "b"], "target": ["c"]}])",
                               &bad),
            LRME_ERR_DATA);
  EXPECT_NE(std::string(lrme_last_error()).find("B"), std::string::npos);
  EXPECT_EQ(lrme_dataset_load("/nonexistent.json", &bad), LRME_ERR_DATA);
}

TEST_F(CApi, SolveEvalAndSpace) {
  lrme_corpus* corpus = nullptr;
  ASSERT_EQ(lrme_corpus_open(Corpus().c_str(), nullptr, &corpus, nullptr), LRME_OK);
  lrme_dataset* dataset = nullptr;
  ASSERT_EQ(lrme_dataset_parse(kProblems, &dataset), LRME_OK) << lrme_last_error();
  lrme_config* config = nullptr;
  ASSERT_EQ(lrme_config_create(&config), LRME_OK);

  Text solved;
  ASSERT_EQ(lrme_solve(dataset, corpus, config, &solved.p), LRME_OK) << lrme_last_error();
  EXPECT_NE(solved.str().find("alpha\tdelta\n"), std::string::npos) << solved.str();
  EXPECT_NE(solved.str().find("blue\tthree\n"), std::string::npos) << solved.str();

  Text tsv, diag;
  ASSERT_EQ(lrme_eval(dataset, corpus, config, &tsv.p, &diag.p), LRME_OK);
  EXPECT_NE(tsv.str().find("Average\t\t100.0"), std::string::npos) << tsv.str();
  EXPECT_NE(diag.str().find("\"average\""), std::string::npos);

  lrme_space* space = nullptr;
  ASSERT_EQ(lrme_space_build(dataset, corpus, config, &space), LRME_OK);
  EXPECT_EQ(lrme_space_rows(space), 24u);
  double sim = 0.0;
  ASSERT_EQ(lrme_space_similarity(space, "alpha", "beta", "delta", "epsilon", &sim),
            LRME_OK);
  EXPECT_NEAR(sim, 1.0, 1e-9);
  ASSERT_EQ(lrme_space_similarity(space, "alpha", "beta", "nothing", "here", &sim),
            LRME_OK);
  EXPECT_EQ(sim, 0.0);
  const std::string saved = (dir_ / "space.txt").string();
  ASSERT_EQ(lrme_space_save(space, saved.c_str()), LRME_OK);
  lrme_space* loaded = nullptr;
  ASSERT_EQ(lrme_space_load(saved.c_str(), &loaded), LRME_OK);
  double again = 0.0;
  lrme_space_similarity(loaded, "alpha", "beta", "delta", "epsilon", &again);
  lrme_space_similarity(space, "alpha", "beta", "delta", "epsilon", &sim);
  EXPECT_EQ(again, sim);
  lrme_space_destroy(loaded);
  lrme_space_destroy(space);

  Text coherence_tsv, coherence_json;
  ASSERT_EQ(lrme_coherence(dataset, corpus, config, 2, 3, &coherence_tsv.p,
                           &coherence_json.p),
            LRME_OK);
  EXPECT_NE(coherence_tsv.str().find("Q2.3"), std::string::npos);

  Text sweep_tsv, sweep_json;
  ASSERT_EQ(lrme_sweep(dataset, corpus, config, "k=1:4:1", &sweep_tsv.p, &sweep_json.p),
            LRME_OK)
      << lrme_last_error();
  EXPECT_EQ(std::count(sweep_tsv.p, sweep_tsv.p + std::strlen(sweep_tsv.p), '\n'), 5);
  EXPECT_EQ(lrme_sweep(dataset, corpus, config, "bogus", &sweep_tsv.p, &sweep_json.p),
            LRME_ERR_USAGE);

  lrme_config_destroy(config);
  lrme_dataset_destroy(dataset);
  lrme_corpus_destroy(corpus);
}

TEST_F(CApi, BudgetRefusalStillReports) {
  std::string json = R"([{"id": "Big", "source": [)";
  std::string target;
  for (int i = 0; i < 11; ++i) {
    json += (i ? ", " : "") + std::string("\"s") + std::to_string(i) + "\"";
    target += (i ? ", " : "") + std::string("\"t") + std::to_string(i) + "\"";
  }
  json += "], \"target\": [" + target + "]}]";
  lrme_dataset* dataset = nullptr;
  ASSERT_EQ(lrme_dataset_parse(json.c_str(), &dataset), LRME_OK) << lrme_last_error();
  lrme_config* config = nullptr;
  lrme_config_create(&config);
  lrme_config_set(config, "mode", "attributional");
  Text tsv, diag;
  EXPECT_EQ(lrme_eval(dataset, nullptr, config, &tsv.p, &diag.p), LRME_ERR_BUDGET);
  EXPECT_NE(tsv.str().find("refused"), std::string::npos);
  Text out;
  EXPECT_EQ(lrme_solve(dataset, nullptr, config, &out.p), LRME_ERR_BUDGET);
  EXPECT_NE(out.str().find("\"refused\""), std::string::npos);
  lrme_string_free(out.p);
  out.p = nullptr;
  lrme_config_set(config, "mode", "relational");
  EXPECT_EQ(lrme_solve(dataset, nullptr, config, &out.p), LRME_ERR_USAGE);
  lrme_config_destroy(config);
  lrme_dataset_destroy(dataset);
}

}  // namespace
