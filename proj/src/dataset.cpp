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

#include "lrme/dataset.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

#include "lrme/error.hpp"

namespace lrme {
namespace {

using nlohmann::ordered_json;

struct Row {
  const char* source;
  const char* target;
  const char* pos;
  double agreement;
};

struct Entry {
  const char* id;
  const char* mnemonic;
  std::vector<Row> rows;
};

// Rows list each source term with its intended target, so the intended
// mapping of every builtin problem is the identity permutation.
const std::vector<Entry>& Entries() {
  static const std::vector<Entry> entries = {
    {"A1", "solar system → atom",
     {
         {"solar system", "atom", "NN", 86.4},
         {"sun", "nucleus", "NN", 100.0},
         {"planet", "electron", "NN", 95.5},
         {"mass", "charge", "NN", 86.4},
         {"attracts", "attracts", "VBZ", 90.9},
         {"revolves", "revolves", "VBZ", 95.5},
         {"gravity", "electromagnetism", "NN", 81.8},
     }},
    {"A2", "water flow → heat transfer",
     {
         {"water", "heat", "NN", 86.4},
         {"flows", "transfers", "VBZ", 95.5},
         {"pressure", "temperature", "NN", 86.4},
         {"water tower", "burner", "NN", 72.7},
         {"bucket", "kettle", "NN", 72.7},
         {"filling", "heating", "VBG", 95.5},
         {"emptying", "cooling", "VBG", 95.5},
         {"hydrodynamics", "thermodynamics", "NN", 90.9},
     }},
    {"A3", "waves → sounds",
     {
         {"waves", "sounds", "NNS", 86.4},
         {"shore", "wall", "NN", 77.3},
         {"reflects", "echoes", "VBZ", 95.5},
         {"water", "air", "NN", 95.5},
         {"breakwater", "insulation", "NN", 81.8},
         {"rough", "loud", "JJ", 63.6},
         {"calm", "quiet", "JJ", 100.0},
         {"crashing", "vibrating", "VBG", 54.5},
     }},
    {"A4", "combustion → respiration",
     {
         {"combustion", "respiration", "NN", 72.7},
         {"fire", "animal", "NN", 95.5},
         {"fuel", "food", "NN", 90.9},
         {"burning", "breathing", "VBG", 72.7},
         {"hot", "living", "JJ", 59.1},
         {"intense", "vigorous", "JJ", 77.3},
         {"oxygen", "oxygen", "NN", 77.3},
         {"carbon dioxide", "carbon dioxide", "NN", 86.4},
     }},
    {"A5", "sound → light",
     {
         {"sound", "light", "NN", 86.4},
         {"low", "red", "JJ", 50.0},
         {"high", "violet", "JJ", 54.5},
         {"echoes", "reflects", "VBZ", 100.0},
         {"loud", "bright", "JJ", 90.9},
         {"quiet", "dim", "JJ", 77.3},
         {"horn", "lens", "NN", 95.5},
     }},
    {"A6", "projectile → planet",
     {
         {"projectile", "planet", "NN", 100.0},
         {"trajectory", "orbit", "NN", 100.0},
         {"earth", "sun", "NN", 100.0},
         {"parabolic", "elliptical", "JJ", 100.0},
         {"air", "space", "NN", 100.0},
         {"gravity", "gravity", "NN", 90.9},
         {"attracts", "attracts", "VBZ", 90.9},
     }},
    {"A7", "artificial selection → natural selection",
     {
         {"breeds", "species", "NNS", 100.0},
         {"selection", "competition", "NN", 59.1},
         {"conformance", "adaptation", "NN", 59.1},
         {"artificial", "natural", "JJ", 77.3},
         {"popularity", "fitness", "NN", 54.5},
         {"breeding", "mating", "VBG", 95.5},
         {"domesticated", "wild", "JJ", 77.3},
     }},
    {"A8", "billiard balls → gas molecules",
     {
         {"balls", "molecules", "NNS", 90.9},
         {"billiards", "gas", "NN", 72.7},
         {"speed", "temperature", "NN", 81.8},
         {"table", "container", "NN", 95.5},
         {"bouncing", "pressing", "VBG", 77.3},
         {"moving", "moving", "VBG", 86.4},
         {"slow", "cold", "JJ", 100.0},
         {"fast", "hot", "JJ", 100.0},
     }},
    {"A9", "computer → mind",
     {
         {"computer", "mind", "NN", 90.9},
         {"processing", "thinking", "VBG", 95.5},
         {"erasing", "forgetting", "VBG", 100.0},
         {"write", "memorize", "VB", 72.7},
         {"read", "remember", "VB", 54.5},
         {"memory", "memory", "NN", 81.8},
         {"outputs", "muscles", "NNS", 72.7},
         {"inputs", "senses", "NNS", 90.9},
         {"bug", "mistake", "NN", 100.0},
     }},
    {"A10", "slot machine → bacterial mutation",
     {
         {"slot machines", "bacteria", "NNS", 68.2},
         {"reels", "genes", "NNS", 72.7},
         {"spinning", "mutating", "VBG", 86.4},
         {"winning", "reproducing", "VBG", 90.9},
         {"losing", "dying", "VBG", 100.0},
     }},
    {"M1", "war → argument",
     {
         {"war", "argument", "NN", 90.9},
         {"soldier", "debater", "NN", 100.0},
         {"destroy", "refute", "VB", 90.9},
         {"fighting", "arguing", "VBG", 95.5},
         {"defeat", "acceptance", "NN", 90.9},
         {"attacks", "criticizes", "VBZ", 95.5},
         {"weapon", "logic", "NN", 90.9},
     }},
    {"M2", "buying an item → accepting a belief",
     {
         {"buyer", "believer", "NN", 100.0},
         {"merchandise", "belief", "NN", 90.9},
         {"buying", "accepting", "VBG", 95.5},
         {"selling", "advocating", "VBG", 100.0},
         {"returning", "rejecting", "VBG", 95.5},
         {"valuable", "true", "JJ", 95.5},
         {"worthless", "false", "JJ", 95.5},
     }},
    {"M3", "grounds for a building → reasons for a theory",
     {
         {"foundations", "reasons", "NNS", 72.7},
         {"buildings", "theories", "NNS", 77.3},
         {"supporting", "confirming", "VBG", 95.5},
         {"solid", "rational", "JJ", 90.9},
         {"weak", "dubious", "JJ", 95.5},
         {"crack", "flaw", "NN", 95.5},
     }},
    {"M4", "impediments to travel → difficulties",
     {
         {"obstructions", "difficulties", "NNS", 100.0},
         {"destination", "goal", "NN", 100.0},
         {"route", "plan", "NN", 100.0},
         {"traveller", "person", "NN", 100.0},
         {"travelling", "problem solving", "VBG", 100.0},
         {"companion", "partner", "NN", 100.0},
         {"arriving", "succeeding", "VBG", 100.0},
     }},
    {"M5", "money → time",
     {
         {"money", "time", "NN", 95.5},
         {"allocate", "invest", "VB", 86.4},
         {"budget", "schedule", "NN", 86.4},
         {"effective", "efficient", "JJ", 86.4},
         {"cheap", "quick", "JJ", 50.0},
         {"expensive", "slow", "JJ", 59.1},
     }},
    {"M6", "seeds → ideas",
     {
         {"seeds", "ideas", "NNS", 90.9},
         {"planted", "inspired", "VBD", 95.5},
         {"fruitful", "productive", "JJ", 81.8},
         {"fruit", "product", "NN", 95.5},
         {"grow", "develop", "VB", 81.8},
         {"wither", "fail", "VB", 100.0},
         {"blossom", "succeed", "VB", 77.3},
     }},
    {"M7", "machine → mind",
     {
         {"machine", "mind", "NN", 95.5},
         {"working", "thinking", "VBG", 100.0},
         {"turned on", "awake", "JJ", 100.0},
         {"turned off", "asleep", "JJ", 100.0},
         {"broken", "confused", "JJ", 100.0},
         {"power", "intelligence", "NN", 95.5},
         {"repair", "therapy", "NN", 100.0},
     }},
    {"M8", "object → idea",
     {
         {"object", "idea", "NN", 90.9},
         {"hold", "understand", "VB", 81.8},
         {"weigh", "analyze", "VB", 81.8},
         {"heavy", "important", "JJ", 95.5},
         {"light", "trivial", "JJ", 95.5},
     }},
    {"M9", "following → understanding",
     {
         {"follow", "understand", "VB", 100.0},
         {"leader", "speaker", "NN", 100.0},
         {"path", "argument", "NN", 100.0},
         {"follower", "listener", "NN", 100.0},
         {"lost", "misunderstood", "JJ", 86.4},
         {"wanders", "digresses", "VBZ", 90.9},
         {"twisted", "complicated", "JJ", 95.5},
         {"straight", "simple", "JJ", 100.0},
     }},
    {"M10", "seeing → understanding",
     {
         {"seeing", "understanding", "VBG", 68.2},
         {"light", "knowledge", "NN", 77.3},
         {"illuminating", "explaining", "VBG", 86.4},
         {"darkness", "confusion", "NN", 86.4},
         {"view", "interpretation", "NN", 68.2},
         {"hidden", "secret", "JJ", 86.4},
     }},
  };
  return entries;
}

MappingProblem FromEntry(const Entry& entry) {
  MappingProblem p;
  p.id = entry.id;
  p.mnemonic = entry.mnemonic;
  std::vector<int> intended;
  for (const Row& row : entry.rows) {
    intended.push_back(static_cast<int>(p.source.size()));
    p.source.emplace_back(row.source);
    p.target.emplace_back(row.target);
    p.source_pos.emplace_back(row.pos);
    p.target_pos.emplace_back(row.pos);
    p.agreement.push_back(row.agreement);
  }
  p.intended = std::move(intended);
  p.Validate();
  return p;
}

std::string Where(const std::string& id) {
  return id.empty() ? std::string("problem") : "problem '" + id + "'";
}

std::vector<Term> ReadTerms(const ordered_json& node, const char* field,
                            const std::string& id) {
  auto it = node.find(field);
  if (it == node.end() || !it->is_array()) {
    throw DataError(Where(id) + ": '" + field + "' must be an array of terms");
  }
  std::vector<Term> terms;
  for (const auto& item : *it) {
    if (!item.is_string()) {
      throw DataError(Where(id) + ": '" + field + "' holds a non-string term");
    }
    try {
      terms.emplace_back(item.get<std::string>());
    } catch (const DataError& e) {
      throw DataError(Where(id) + ": " + e.what());
    }
  }
  return terms;
}

// Maps normalized term keys to their position in `terms`.
std::unordered_map<std::string, int> IndexOf(const std::vector<Term>& terms) {
  std::unordered_map<std::string, int> index;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    index.emplace(terms[i].key(), static_cast<int>(i));
  }
  return index;
}

int Find(const std::unordered_map<std::string, int>& index,
         const std::string& surface, const std::string& id, const char* what) {
  auto it = index.find(Term(surface).key());
  if (it == index.end()) {
    throw DataError(Where(id) + ": " + what + " '" + surface +
                    "' is not in the term list");
  }
  return it->second;
}

MappingProblem ParseOne(const ordered_json& node) {
  if (!node.is_object()) throw DataError("problem entry must be an object");
  MappingProblem p;
  auto id = node.find("id");
  if (id == node.end() || !id->is_string() || id->get<std::string>().empty()) {
    throw DataError("problem entry needs a string 'id'");
  }
  p.id = id->get<std::string>();
  if (auto mn = node.find("mnemonic"); mn != node.end() && mn->is_string()) {
    p.mnemonic = mn->get<std::string>();
  }
  p.source = ReadTerms(node, "source", p.id);
  p.target = ReadTerms(node, "target", p.id);
  if (p.source.size() != p.target.size()) {
    throw DataError(Where(p.id) + ": " + std::to_string(p.source.size()) +
                    " source terms but " + std::to_string(p.target.size()) +
                    " target terms");
  }
  const auto source_index = IndexOf(p.source);
  const auto target_index = IndexOf(p.target);

  if (auto pos = node.find("pos"); pos != node.end()) {
    if (!pos->is_object()) throw DataError(Where(p.id) + ": 'pos' must be an object");
    std::unordered_map<std::string, std::string> tags;
    for (const auto& [term, tag] : pos->items()) {
      if (!tag.is_string()) {
        throw DataError(Where(p.id) + ": tag of '" + term + "' is not a string");
      }
      tags[Term(term).key()] = tag.get<std::string>();
    }
    auto tag_of = [&](const Term& t) {
      auto it = tags.find(t.key());
      return it == tags.end() ? std::string() : it->second;
    };
    for (const Term& t : p.source) p.source_pos.push_back(tag_of(t));
    for (const Term& t : p.target) p.target_pos.push_back(tag_of(t));
  }

  if (auto intended = node.find("intended"); intended != node.end()) {
    if (!intended->is_object()) {
      throw DataError(Where(p.id) + ": 'intended' must be an object");
    }
    std::vector<int> perm(p.source.size(), -1);
    for (const auto& [src, tgt] : intended->items()) {
      if (!tgt.is_string()) {
        throw DataError(Where(p.id) + ": intended target of '" + src +
                        "' is not a string");
      }
      const int i = Find(source_index, src, p.id, "intended source");
      perm[static_cast<std::size_t>(i)] =
          Find(target_index, tgt.get<std::string>(), p.id, "intended target");
    }
    p.intended = std::move(perm);
  }

  if (auto agreement = node.find("agreement"); agreement != node.end()) {
    if (!agreement->is_object()) {
      throw DataError(Where(p.id) + ": 'agreement' must be an object");
    }
    std::vector<double> values(p.source.size(), -1.0);
    for (const auto& [src, pct] : agreement->items()) {
      if (!pct.is_number()) {
        throw DataError(Where(p.id) + ": agreement of '" + src + "' is not a number");
      }
      values[static_cast<std::size_t>(
          Find(source_index, src, p.id, "agreement term"))] = pct.get<double>();
    }
    for (double v : values) {
      if (v < 0.0) {
        throw DataError(Where(p.id) +
                        ": agreement values do not cover every source term");
      }
    }
    p.agreement = std::move(values);
  }
  p.Validate();
  return p;
}

}  // namespace

const std::vector<MappingProblem>& BuiltinProblems() {
  static const std::vector<MappingProblem> problems = [] {
    std::vector<MappingProblem> out;
    for (const Entry& e : Entries()) out.push_back(FromEntry(e));
    return out;
  }();
  return problems;
}

std::vector<MappingProblem> ParseProblems(std::string_view json_text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(json_text);
  } catch (const ordered_json::parse_error& e) {
    throw DataError(std::string("malformed problem file: ") + e.what());
  }
  const ordered_json* list = &doc;
  if (doc.is_object()) {
    auto it = doc.find("problems");
    if (it == doc.end()) throw DataError("problem file has no 'problems' array");
    list = &*it;
  }
  if (!list->is_array()) throw DataError("problem file must hold an array");
  std::vector<MappingProblem> problems;
  for (const auto& node : *list) problems.push_back(ParseOne(node));
  return problems;
}

std::vector<MappingProblem> LoadProblems(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read problem file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return ParseProblems(text.str());
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string ProblemsToJson(const std::vector<MappingProblem>& problems) {
  ordered_json list = ordered_json::array();
  for (const MappingProblem& p : problems) {
    ordered_json node;
    node["id"] = p.id;
    if (!p.mnemonic.empty()) node["mnemonic"] = p.mnemonic;
    node["source"] = ordered_json::array();
    node["target"] = ordered_json::array();
    for (const Term& t : p.source) node["source"].push_back(t.surface());
    for (const Term& t : p.target) node["target"].push_back(t.surface());
    if (!p.source_pos.empty() || !p.target_pos.empty()) {
      ordered_json pos = ordered_json::object();
      for (std::size_t i = 0; i < p.source_pos.size(); ++i) {
        if (!p.source_pos[i].empty()) pos[p.source[i].surface()] = p.source_pos[i];
      }
      for (std::size_t i = 0; i < p.target_pos.size(); ++i) {
        if (!p.target_pos[i].empty()) pos[p.target[i].surface()] = p.target_pos[i];
      }
      node["pos"] = std::move(pos);
    }
    if (p.intended) {
      ordered_json intended = ordered_json::object();
      for (std::size_t i = 0; i < p.source.size(); ++i) {
        intended[p.source[i].surface()] =
            p.target[static_cast<std::size_t>((*p.intended)[i])].surface();
      }
      node["intended"] = std::move(intended);
    }
    if (!p.agreement.empty()) {
      ordered_json agreement = ordered_json::object();
      for (std::size_t i = 0; i < p.source.size(); ++i) {
        agreement[p.source[i].surface()] = p.agreement[i];
      }
      node["agreement"] = std::move(agreement);
    }
    list.push_back(std::move(node));
  }
  return ordered_json{{"problems", std::move(list)}}.dump(2) + "\n";
}

}  // namespace lrme
