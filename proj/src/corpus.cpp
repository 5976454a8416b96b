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

#include "lrme/corpus.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <iterator>
#include <memory>
#include <sstream>

#include <spdlog/spdlog.h>

#include "lrme/error.hpp"

namespace lrme {
namespace fs = std::filesystem;
namespace {

constexpr std::string_view kIndexMagic = "lrme-corpus-index 1";

// Incremental SHA-256, hex encoded.
class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new(), &EVP_MD_CTX_free) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) {
      throw InternalError("cannot initialise SHA-256");
    }
  }
  void Update(std::string_view bytes) {
    EVP_DigestUpdate(ctx_.get(), bytes.data(), bytes.size());
  }
  std::string HexDigest() {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx_.get(), md, &len);
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
      out += kHex[md[i] >> 4];
      out += kHex[md[i] & 0xF];
    }
    return out;
  }

 private:
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx_;
};

std::string DigestOf(std::span<const std::string> names,
                     std::span<const std::string> texts,
                     const TokenizerConfig& config) {
  Sha256 sha;
  sha.Update(config.lowercase ? "l1" : "l0");
  sha.Update(config.strip_punctuation ? "p1" : "p0");
  for (std::size_t i = 0; i < names.size(); ++i) {
    sha.Update(std::to_string(names[i].size()));
    sha.Update(":");
    sha.Update(names[i]);
    sha.Update(std::to_string(texts[i].size()));
    sha.Update(":");
    sha.Update(texts[i]);
  }
  return sha.HexDigest();
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read corpus file '" + path.string() + "'");
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw DataError("cannot read corpus file '" + path.string() + "'");
  }
  if (!IsValidUtf8(text)) {
    throw DataError("corpus file '" + path.string() + "' is not valid UTF-8");
  }
  return text;
}

// True when the document holds the term's token ids starting at `offset`.
bool MatchesAt(std::span<const TokenId> doc, std::size_t offset,
               std::span<const TokenId> term) {
  if (offset + term.size() > doc.size()) return false;
  return std::equal(term.begin(), term.end(), doc.begin() + offset);
}

}  // namespace

CorpusIndex CorpusIndex::FromTexts(std::span<const std::string> names,
                                   std::span<const std::string> texts,
                                   const TokenizerConfig& config) {
  if (names.size() != texts.size()) {
    throw InternalError("document names and texts differ in length");
  }
  CorpusIndex index;
  index.tokenizer_ = config;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    index.AddDocument(names[i], Tokenize(texts[i], config));
  }
  index.digest_ = DigestOf(names, texts, config);
  return index;
}

void CorpusIndex::AddDocument(std::string name,
                              const std::vector<std::string>& tokens) {
  const auto doc = static_cast<std::uint32_t>(documents_.size());
  std::vector<TokenId> ids;
  ids.reserve(tokens.size());
  for (std::size_t offset = 0; offset < tokens.size(); ++offset) {
    auto [it, inserted] = token_ids_.try_emplace(
        tokens[offset], static_cast<TokenId>(vocabulary_.size()));
    if (inserted) {
      vocabulary_.push_back(tokens[offset]);
      postings_.emplace_back();
    }
    ids.push_back(it->second);
    postings_[it->second].push_back(
        Position{doc, static_cast<std::uint32_t>(offset)});
  }
  total_tokens_ += ids.size();
  names_.push_back(std::move(name));
  documents_.push_back(std::move(ids));
}

std::optional<TokenId> CorpusIndex::Lookup(std::string_view token) const {
  auto it = token_ids_.find(std::string(token));
  if (it == token_ids_.end()) return std::nullopt;
  return it->second;
}

std::span<const Position> CorpusIndex::Postings(std::string_view token) const {
  auto id = Lookup(token);
  if (!id) return {};
  return postings_[*id];
}

std::vector<Position> CorpusIndex::Occurrences(const Term& term) const {
  std::vector<TokenId> ids;
  for (const auto& tok : term.tokens()) {
    auto id = Lookup(tok);
    if (!id) return {};
    ids.push_back(*id);
  }
  if (ids.empty()) return {};
  const auto& first = postings_[ids.front()];
  if (ids.size() == 1) return {first.begin(), first.end()};
  std::vector<Position> out;
  for (const Position& p : first) {
    if (MatchesAt(documents_[p.document], p.offset, ids)) out.push_back(p);
  }
  return out;
}

void CorpusIndex::Save(const fs::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write index '" + path.string() + "'");
  out << kIndexMagic << '\n';
  out << "digest " << digest_ << '\n';
  out << "tokenizer " << (tokenizer_.lowercase ? 1 : 0) << ' '
      << (tokenizer_.strip_punctuation ? 1 : 0) << '\n';
  out << "documents " << documents_.size() << '\n';
  for (std::size_t d = 0; d < documents_.size(); ++d) {
    out << "doc\t" << names_[d] << '\n';
    bool first = true;
    for (TokenId id : documents_[d]) {
      if (!first) out << ' ';
      out << vocabulary_[id];
      first = false;
    }
    out << '\n';
  }
  if (!out) throw DataError("cannot write index '" + path.string() + "'");
}

CorpusIndex CorpusIndex::Load(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read index '" + path.string() + "'");
  auto fail = [&](const std::string& what) {
    return DataError("corrupt index '" + path.string() + "': " + what);
  };
  std::string line;
  if (!std::getline(in, line) || line != kIndexMagic) throw fail("bad header");

  CorpusIndex index;
  std::string word;
  if (!std::getline(in, line)) throw fail("missing digest");
  {
    std::istringstream ls(line);
    ls >> word >> index.digest_;
    if (word != "digest") throw fail("missing digest");
  }
  if (!std::getline(in, line)) throw fail("missing tokenizer");
  {
    std::istringstream ls(line);
    int lower = 1, strip = 1;
    ls >> word >> lower >> strip;
    if (word != "tokenizer" || !ls) throw fail("missing tokenizer");
    index.tokenizer_.lowercase = lower != 0;
    index.tokenizer_.strip_punctuation = strip != 0;
  }
  std::size_t count = 0;
  if (!std::getline(in, line)) throw fail("missing document count");
  {
    std::istringstream ls(line);
    ls >> word >> count;
    if (word != "documents" || !ls) throw fail("missing document count");
  }
  for (std::size_t d = 0; d < count; ++d) {
    if (!std::getline(in, line) || line.rfind("doc\t", 0) != 0) {
      throw fail("missing document header " + std::to_string(d));
    }
    std::string name = line.substr(4);
    if (!std::getline(in, line)) throw fail("missing tokens of document " + name);
    std::vector<std::string> tokens;
    std::istringstream ls(line);
    while (ls >> word) tokens.push_back(word);
    index.AddDocument(std::move(name), tokens);
  }
  return index;
}

CorpusIndex Ingest(std::span<const fs::path> paths,
                   const TokenizerConfig& config) {
  std::vector<std::string> names;
  std::vector<std::string> texts;
  for (const auto& p : paths) {
    texts.push_back(ReadFile(p));
    names.push_back(p.string());
  }
  return CorpusIndex::FromTexts(names, texts, config);
}

std::vector<fs::path> ListCorpusFiles(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw UsageError("corpus directory '" + dir.string() + "' does not exist");
  }
  std::vector<fs::path> files;
  for (auto it = fs::recursive_directory_iterator(dir, ec);
       !ec && it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (it->is_regular_file() && it->path().extension() == ".txt") {
      files.push_back(it->path());
    }
  }
  if (ec) {
    throw DataError("cannot list corpus directory '" + dir.string() +
                    "': " + ec.message());
  }
  std::sort(files.begin(), files.end());
  return files;
}

namespace {

struct CorpusFiles {
  std::vector<std::string> names;  // relative to the corpus directory
  std::vector<std::string> texts;
};

CorpusFiles ReadCorpusFiles(const fs::path& dir) {
  CorpusFiles files;
  for (const auto& p : ListCorpusFiles(dir)) {
    files.texts.push_back(ReadFile(p));
    files.names.push_back(p.lexically_relative(dir).generic_string());
  }
  return files;
}

}  // namespace

std::string CorpusDigest(const fs::path& dir) {
  CorpusFiles files = ReadCorpusFiles(dir);
  return DigestOf(files.names, files.texts, TokenizerConfig{});
}

CorpusIndex OpenCorpus(const fs::path& dir,
                       const std::optional<fs::path>& cache_dir,
                       bool* cache_hit, const TokenizerConfig& config) {
  CorpusFiles files = ReadCorpusFiles(dir);
  if (files.names.empty()) {
    spdlog::warn("corpus directory '{}' holds no .txt files", dir.string());
  }
  const std::string digest = DigestOf(files.names, files.texts, config);
  if (cache_hit) *cache_hit = false;
  fs::path cache_file;
  if (cache_dir) {
    cache_file = *cache_dir / ("corpus-" + digest + ".idx");
    std::error_code ec;
    if (fs::is_regular_file(cache_file, ec)) {
      CorpusIndex index = CorpusIndex::Load(cache_file);
      if (index.digest() == digest) {
        spdlog::info("cache hit: {}", cache_file.string());
        if (cache_hit) *cache_hit = true;
        return index;
      }
      spdlog::warn("cache file '{}' has a stale digest; rebuilding",
                   cache_file.string());
    }
  }
  CorpusIndex index = CorpusIndex::FromTexts(files.names, files.texts, config);
  if (cache_dir) {
    std::error_code ec;
    fs::create_directories(*cache_dir, ec);
    if (ec) {
      throw DataError("cannot create cache directory '" + cache_dir->string() +
                      "': " + ec.message());
    }
    index.Save(cache_file);
    spdlog::info("cache miss: wrote {}", cache_file.string());
  }
  return index;
}

std::vector<PhraseOccurrence> SearchPhrases(const CorpusIndex& index,
                                            const TermPair& pair,
                                            std::size_t max_occurrences) {
  std::vector<TokenId> y_ids;
  for (const auto& tok : pair.y.tokens()) {
    auto id = index.Lookup(tok);
    if (!id) return {};
    y_ids.push_back(*id);
  }
  const auto x_len = static_cast<std::uint32_t>(pair.x.size());
  const auto y_len = static_cast<std::uint32_t>(y_ids.size());

  std::vector<PhraseOccurrence> out;
  for (const Position& p : index.Occurrences(pair.x)) {
    const auto doc = index.document(p.document);
    const auto doc_len = static_cast<std::uint32_t>(doc.size());
    const std::uint32_t x_end = p.offset + x_len;
    for (std::uint32_t mid = 0; mid <= kMaxMidWords; ++mid) {
      const std::uint32_t y_begin = x_end + mid;
      if (!MatchesAt(doc, y_begin, y_ids)) continue;
      PhraseOccurrence occ;
      occ.document = p.document;
      occ.x_span = {p.offset, x_end};
      occ.y_span = {y_begin, y_begin + y_len};
      occ.window.begin = p.offset >= kMaxPreWords ? p.offset - kMaxPreWords : 0;
      occ.window.end = std::min(doc_len, occ.y_span.end + kMaxPostWords);
      out.push_back(occ);
      if (max_occurrences != 0 && out.size() >= max_occurrences) return out;
    }
  }
  return out;
}

CooccurrenceCounts CountCooccurrences(const CorpusIndex& index, const Term& a,
                                      const Term& b, std::uint32_t window) {
  if (window < 1) throw UsageError("co-occurrence window must be at least 1");
  const std::vector<Position> occ_a = index.Occurrences(a);
  const std::vector<Position> occ_b = index.Occurrences(b);
  CooccurrenceCounts counts;
  counts.count_a = occ_a.size();
  counts.count_b = occ_b.size();
  if (occ_a.empty() || occ_b.empty()) return counts;

  const auto la = static_cast<std::int64_t>(a.size());
  const auto lb = static_cast<std::int64_t>(b.size());
  std::uint64_t ordered = 0;
  for (const Position& p : occ_a) {
    const Position low{p.document, p.offset >= window ? p.offset - window : 0};
    auto it = std::lower_bound(occ_b.begin(), occ_b.end(), low);
    for (; it != occ_b.end() && it->document == p.document &&
           it->offset <= static_cast<std::uint64_t>(p.offset) + window;
         ++it) {
      const auto pa = static_cast<std::int64_t>(p.offset);
      const auto pb = static_cast<std::int64_t>(it->offset);
      const bool overlap = pa < pb + lb && pb < pa + la;
      if (!overlap) ++ordered;
    }
  }
  counts.count_ab = (a == b) ? ordered / 2 : ordered;
  return counts;
}

}  // namespace lrme
