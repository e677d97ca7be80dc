// Copyright 2026 The causal-patterns Authors.
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

// Dependency patterns: generalized edge sets with a cause slot (X) and an
// effect slot (Y), their JSON persistence, and compilation of patterns from
// human-readable templates through parsed dummy sentences.

#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "causal/deptree.hpp"
#include "json.hpp"

namespace causal {

enum class EndpointKind { kLexical, kCause, kEffect };

struct PatternEndpoint {
  EndpointKind kind = EndpointKind::kLexical;
  std::string lemma;  // set iff kind == kLexical

  static PatternEndpoint lexical(std::string lemma) {
    return {EndpointKind::kLexical, std::move(lemma)};
  }
  static PatternEndpoint cause() { return {EndpointKind::kCause, {}}; }
  static PatternEndpoint effect() { return {EndpointKind::kEffect, {}}; }

  bool is_slot() const { return kind != EndpointKind::kLexical; }

  auto operator<=>(const PatternEndpoint &) const = default;
};

struct PatternEdge {
  PatternEndpoint parent;
  std::string parent_pos;
  std::string deprel;
  PatternEndpoint child;

  auto operator<=>(const PatternEdge &) const = default;
};

inline std::string endpoint_str(const PatternEndpoint &e) {
  switch (e.kind) {
    case EndpointKind::kCause: return "X";
    case EndpointKind::kEffect: return "Y";
    default: return e.lemma;
  }
}

inline std::ostream &operator<<(std::ostream &os, const PatternEdge &e) {
  return os << '(' << endpoint_str(e.parent) << ',' << e.parent_pos << ',' << e.deprel
            << ',' << endpoint_str(e.child) << ')';
}

// A set of pattern edges. Edges are kept sorted and unique so that two
// patterns with the same edge set compare equal regardless of path order.
class DependencyPattern {
 public:
  DependencyPattern() = default;
  DependencyPattern(std::string id, std::string template_text, std::vector<PatternEdge> edges)
      : id_(std::move(id)), template_(std::move(template_text)), edges_(std::move(edges)) {
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    validate();
    for (const PatternEdge &e : edges_) {
      if (!e.parent.is_slot()) lexemes_.insert(e.parent.lemma);
      if (!e.child.is_slot()) lexemes_.insert(e.child.lemma);
    }
  }

  const std::string &id() const { return id_; }
  const std::string &template_text() const { return template_; }
  const std::vector<PatternEdge> &edges() const { return edges_; }
  const std::set<std::string> &lexemes() const { return lexemes_; }

  void set_id(std::string id) { id_ = std::move(id); }

  bool same_edges(const DependencyPattern &other) const { return edges_ == other.edges_; }

  std::string edges_str() const {
    std::ostringstream os;
    os << '{';
    for (size_t i = 0; i < edges_.size(); ++i) os << (i ? ", " : "") << edges_[i];
    os << '}';
    return os.str();
  }

 private:
  void validate() const {
    auto fail = [&](const std::string &why) {
      throw Error("pattern '" + id_ + "': " + why);
    };
    int causes = 0, effects = 0;
    bool anchored = false;
    for (const PatternEdge &e : edges_) {
      if (e.parent_pos.empty() || e.deprel.empty()) fail("edge with empty POS or relation");
      if (e.parent.is_slot() && e.child.is_slot()) fail("edge joins X and Y directly");
      for (const PatternEndpoint *ep : {&e.parent, &e.child}) {
        switch (ep->kind) {
          case EndpointKind::kCause: ++causes; break;
          case EndpointKind::kEffect: ++effects; break;
          case EndpointKind::kLexical:
            if (ep->lemma.empty()) fail("lexical endpoint without lemma");
            anchored = true;
            break;
        }
        if (ep->is_slot() && !ep->lemma.empty()) fail("slot endpoint carries a lemma");
      }
    }
    if (causes != 1) fail("expected exactly one X endpoint, found " + std::to_string(causes));
    if (effects != 1) fail("expected exactly one Y endpoint, found " + std::to_string(effects));
    if (!anchored) fail("no lexical anchor");
  }

  std::string id_;
  std::string template_;
  std::vector<PatternEdge> edges_;
  std::set<std::string> lexemes_;
};

struct PatternLibrary {
  std::string version;
  std::vector<DependencyPattern> patterns;

  void validate() const {
    std::set<std::string> seen;
    for (const DependencyPattern &p : patterns) {
      if (p.id().empty()) throw Error("pattern with empty id");
      if (!seen.insert(p.id()).second) throw Error("duplicate pattern id '" + p.id() + "'");
    }
  }

  const DependencyPattern *find(const std::string &id) const {
    for (const DependencyPattern &p : patterns) {
      if (p.id() == id) return &p;
    }
    return nullptr;
  }
};

// Replaces the cause term with X and the effect term with Y in a concrete
// path. Lemma comparison is case-insensitive.
inline DependencyPattern generalize(std::span<const DepEdge> path, const std::string &u_lemma,
                                    const std::string &v_lemma, const std::string &template_text,
                                    std::string id = {}) {
  const std::string u = to_lower(u_lemma), v = to_lower(v_lemma);
  bool saw_u = false, saw_v = false;
  auto convert = [&](const std::string &lemma) {
    if (lemma == u) {
      saw_u = true;
      return PatternEndpoint::cause();
    }
    if (lemma == v) {
      saw_v = true;
      return PatternEndpoint::effect();
    }
    return PatternEndpoint::lexical(lemma);
  };
  std::vector<PatternEdge> edges;
  for (const DepEdge &e : path) {
    PatternEdge pe;
    pe.parent = convert(e.parent_lemma);
    pe.parent_pos = e.parent_pos;
    pe.deprel = e.deprel;
    pe.child = convert(e.child_lemma);
    edges.push_back(std::move(pe));
  }
  if (!saw_u) throw Error("cause lemma '" + u + "' does not occur on the path");
  if (!saw_v) throw Error("effect lemma '" + v + "' does not occur on the path");
  return DependencyPattern(std::move(id), template_text, std::move(edges));
}

// ---------------------------------------------------------------------------
// Compilation from templates

struct SeedPair {
  std::string cause;
  std::string effect;
};

struct TemplateSummary {
  std::string template_text;
  int instances = 0;     // dummy parses seen for this template
  int new_patterns = 0;  // patterns first produced by this template
  int duplicates = 0;    // instances that collapsed onto an existing pattern
  int skipped = 0;
};

struct CompileResult {
  PatternLibrary library;
  std::vector<TemplateSummary> summaries;
  std::vector<std::string> skipped;  // one message per skipped instance
  int duplicates = 0;
};

// Whitespace-separated words of a template; X and Y must each appear once
// as a word, possibly with trailing punctuation ("Y," in "Y, which ...").
inline void check_template(const std::string &t) {
  int xs = 0, ys = 0;
  std::istringstream in(t);
  std::string w;
  while (in >> w) {
    while (!w.empty() && std::ispunct(static_cast<unsigned char>(w.back()))) w.pop_back();
    if (w == "X") ++xs;
    if (w == "Y") ++ys;
  }
  if (xs != 1 || ys != 1) {
    throw Error("template '" + t + "' must contain exactly one X and one Y");
  }
}

// Head of the first token run whose forms equal the words of term
// (case-insensitive): the run member whose head lies outside the run.
inline std::optional<TokenId> find_term_head(const DepTree &tree, const std::string &term) {
  std::vector<std::string> words;
  {
    std::istringstream in(to_lower(term));
    std::string w;
    while (in >> w) words.push_back(w);
  }
  const int n = tree.size(), k = static_cast<int>(words.size());
  if (k == 0) return std::nullopt;
  for (int start = 1; start + k - 1 <= n; ++start) {
    bool ok = true;
    for (int i = 0; i < k && ok; ++i) ok = to_lower(tree.token(start + i).form) == words[i];
    if (!ok) continue;
    std::optional<TokenId> head;
    for (int id = start; id < start + k; ++id) {
      TokenId h = tree.token(id).head;
      if (h < start || h >= start + k) {
        if (head) return std::nullopt;  // the run is not a single subtree
        head = id;
      }
    }
    return head;
  }
  return std::nullopt;
}

namespace patterns_detail {

// "t<i>_p<j>" -> (i, j)
inline std::optional<std::pair<int, int>> parse_dummy_id(const std::string &id) {
  int i = 0, j = 0;
  char tail = 0;
  if (std::sscanf(id.c_str(), "t%d_p%d%c", &i, &j, &tail) != 2) return std::nullopt;
  if (i < 0 || j < 0) return std::nullopt;
  return std::make_pair(i, j);
}

inline std::string pattern_id(size_t n) {
  std::ostringstream os;
  os << 'P' << std::setw(3) << std::setfill('0') << n;
  return os.str();
}

}  // namespace patterns_detail

// Builds a library from parsed template instances. Dummy sentence ids must
// be "t<template index>_p<pair index>". Instances whose seed terms cannot be
// located, or whose path does not generalize, are skipped and reported.
inline CompileResult compile_from_templates(std::span<const std::string> templates,
                                            std::span<const SeedPair> seed_pairs,
                                            std::span<const DepTree> parsed_dummies,
                                            std::string version = "1") {
  for (const std::string &t : templates) check_template(t);

  CompileResult result;
  result.library.version = std::move(version);
  for (const std::string &t : templates) result.summaries.push_back({t});
  if (templates.empty()) return result;

  // Visit dummies in (template, pair) order so ids do not depend on file order.
  std::vector<std::pair<std::pair<int, int>, const DepTree *>> order;
  for (const DepTree &tree : parsed_dummies) {
    auto key = patterns_detail::parse_dummy_id(tree.sentence_id());
    if (!key || key->first >= static_cast<int>(templates.size()) ||
        key->second >= static_cast<int>(seed_pairs.size())) {
      result.skipped.push_back(tree.sentence_id() + ": id does not name a template/pair");
      continue;
    }
    order.push_back({*key, &tree});
  }
  std::stable_sort(order.begin(), order.end(),
                   [](const auto &a, const auto &b) { return a.first < b.first; });

  for (const auto &[key, tree] : order) {
    const auto [ti, pj] = key;
    TemplateSummary &summary = result.summaries[ti];
    ++summary.instances;
    const SeedPair &seed = seed_pairs[pj];
    auto skip = [&](const std::string &why) {
      ++summary.skipped;
      result.skipped.push_back(tree->sentence_id() + ": " + why);
    };
    std::optional<TokenId> u = find_term_head(*tree, seed.cause);
    std::optional<TokenId> v = find_term_head(*tree, seed.effect);
    if (!u) {
      skip("cause term '" + seed.cause + "' not found");
      continue;
    }
    if (!v) {
      skip("effect term '" + seed.effect + "' not found");
      continue;
    }
    if (*u == *v) {
      skip("cause and effect share a head");
      continue;
    }
    std::optional<DependencyPattern> pattern;
    try {
      std::vector<DepEdge> path = shortest_path(*tree, *u, *v);
      pattern = generalize(path, tree->token(*u).lemma, tree->token(*v).lemma,
                           templates[ti], "pending");
    } catch (const Error &e) {
      skip(e.what());
      continue;
    }
    auto &patterns = result.library.patterns;
    auto same = std::find_if(patterns.begin(), patterns.end(),
                             [&](const DependencyPattern &p) { return p.same_edges(*pattern); });
    if (same != patterns.end()) {
      ++summary.duplicates;
      ++result.duplicates;
      continue;
    }
    pattern->set_id(patterns_detail::pattern_id(patterns.size() + 1));
    patterns.push_back(std::move(*pattern));
    ++summary.new_patterns;
  }
  return result;
}

// ---------------------------------------------------------------------------
// JSON

namespace patterns_detail {

using nlohmann::json;

inline json endpoint_to_json(const PatternEndpoint &e) {
  json j;
  switch (e.kind) {
    case EndpointKind::kCause: j["kind"] = "X"; break;
    case EndpointKind::kEffect: j["kind"] = "Y"; break;
    case EndpointKind::kLexical:
      j["kind"] = "LEXICAL";
      j["lemma"] = e.lemma;
      break;
  }
  return j;
}

inline PatternEndpoint endpoint_from_json(const json &j, const std::string &pid) {
  auto fail = [&](const std::string &why) { throw Error("pattern '" + pid + "': " + why); };
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    fail("endpoint needs a string 'kind'");
  }
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "LEXICAL") {
    if (!j.contains("lemma") || !j["lemma"].is_string()) fail("LEXICAL endpoint needs 'lemma'");
    return PatternEndpoint::lexical(j["lemma"].get<std::string>());
  }
  if (j.contains("lemma")) fail(kind + " endpoint must not carry 'lemma'");
  if (kind == "X") return PatternEndpoint::cause();
  if (kind == "Y") return PatternEndpoint::effect();
  fail("unknown endpoint kind '" + kind + "'");
  return {};
}

inline std::string string_field(const json &j, const char *key, const std::string &pid) {
  if (!j.contains(key) || !j[key].is_string()) {
    throw Error("pattern '" + pid + "': missing string field '" + key + "'");
  }
  return j[key].get<std::string>();
}

}  // namespace patterns_detail

inline nlohmann::json library_to_json(const PatternLibrary &lib) {
  using patterns_detail::endpoint_to_json;
  nlohmann::json patterns = nlohmann::json::array();
  for (const DependencyPattern &p : lib.patterns) {
    nlohmann::json edges = nlohmann::json::array();
    for (const PatternEdge &e : p.edges()) {
      edges.push_back({{"parent", endpoint_to_json(e.parent)},
                       {"parent_pos", e.parent_pos},
                       {"deprel", e.deprel},
                       {"child", endpoint_to_json(e.child)}});
    }
    patterns.push_back({{"id", p.id()}, {"template", p.template_text()}, {"edges", edges}});
  }
  return {{"version", lib.version}, {"patterns", patterns}};
}

inline PatternLibrary library_from_json(const nlohmann::json &j) {
  using namespace patterns_detail;
  if (!j.is_object() || !j.contains("patterns") || !j["patterns"].is_array()) {
    throw Error("pattern library must be an object with a 'patterns' array");
  }
  PatternLibrary lib;
  if (j.contains("version")) {
    if (!j["version"].is_string()) throw Error("library 'version' must be a string");
    lib.version = j["version"].get<std::string>();
  }
  size_t index = 0;
  for (const json &pj : j["patterns"]) {
    ++index;
    std::string pid = "#" + std::to_string(index);
    if (!pj.is_object()) throw Error("pattern " + pid + ": not an object");
    pid = string_field(pj, "id", pid);
    std::string tmpl = string_field(pj, "template", pid);
    if (!pj.contains("edges") || !pj["edges"].is_array()) {
      throw Error("pattern '" + pid + "': missing 'edges' array");
    }
    std::vector<PatternEdge> edges;
    for (const json &ej : pj["edges"]) {
      if (!ej.is_object() || !ej.contains("parent") || !ej.contains("child")) {
        throw Error("pattern '" + pid + "': edge needs 'parent' and 'child'");
      }
      PatternEdge e;
      e.parent = endpoint_from_json(ej["parent"], pid);
      e.child = endpoint_from_json(ej["child"], pid);
      e.parent_pos = string_field(ej, "parent_pos", pid);
      e.deprel = string_field(ej, "deprel", pid);
      edges.push_back(std::move(e));
    }
    lib.patterns.emplace_back(pid, std::move(tmpl), std::move(edges));
  }
  lib.validate();
  return lib;
}

inline void save_library(const PatternLibrary &lib, const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write pattern library '" + path + "'");
  out << library_to_json(lib).dump(2) << '\n';
  if (!out) throw Error("failed writing pattern library '" + path + "'");
}

inline PatternLibrary load_library(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open pattern library '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception &e) {
    throw Error("pattern library '" + path + "': " + e.what());
  }
  return library_from_json(j);
}

// ---------------------------------------------------------------------------
// Template and seed files

// One template per line; blank lines and '#' comments ignored.
inline std::vector<std::string> read_templates(std::istream &in) {
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    std::string t = conllu_detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    check_template(t);
    out.push_back(std::move(t));
  }
  return out;
}

// "cause<TAB>effect" per line; blank lines and '#' comments ignored.
inline std::vector<SeedPair> read_seed_pairs(std::istream &in) {
  std::vector<SeedPair> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = conllu_detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    size_t tab = t.find('\t');
    if (tab == std::string::npos) {
      throw Error("seed line " + std::to_string(line_no) + ": expected cause<TAB>effect");
    }
    SeedPair p{conllu_detail::trim(t.substr(0, tab)), conllu_detail::trim(t.substr(tab + 1))};
    if (p.cause.empty() || p.effect.empty()) {
      throw Error("seed line " + std::to_string(line_no) + ": empty term");
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace causal
