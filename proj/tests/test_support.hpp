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

// Fixture access, random generators and brute-force oracles shared by the
// unit tests and the acceptance runner. The oracles deliberately avoid the
// library's own algorithms: BFS instead of depth walking, plain recursion
// instead of dynamic programming, backtracking instead of augmenting paths.

#pragma once

#include <algorithm>
#include <deque>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "causal/causal.hpp"

namespace causal::testing {

inline std::string source_path(const std::string &rel) {
  return std::string(CAUSAL_SOURCE_DIR) + "/" + rel;
}

inline std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::vector<DepTree> load_trees(const std::string &rel) {
  std::ifstream in(source_path(rel));
  if (!in) throw Error("missing fixture " + rel);
  return parse_conllu(in);
}

inline DepTree load_tree(const std::string &rel) { return load_trees(rel).at(0); }

inline const PatternLibrary &starter_library() {
  static const PatternLibrary lib = load_library(source_path("data/patterns.json"));
  return lib;
}

inline TokenId find_form(const DepTree &tree, const std::string &form, int occurrence = 0) {
  for (const Token &t : tree.tokens()) {
    if (t.form == form && occurrence-- == 0) return t.id;
  }
  throw Error("no token '" + form + "' in " + tree.sentence_id());
}

// Builds a tree from (form, lemma, upos, head, deprel) rows.
struct Row {
  std::string form, lemma, upos;
  TokenId head;
  std::string deprel;
  bool np = false;
};

inline DepTree make_tree(const std::string &id, const std::vector<Row> &rows) {
  std::vector<Token> tokens;
  std::string text;
  for (size_t i = 0; i < rows.size(); ++i) {
    const Row &r = rows[i];
    tokens.push_back(
        {static_cast<TokenId>(i + 1), r.form, r.lemma, r.upos, r.head, r.deprel, r.np});
    text += (i ? " " : "") + r.form;
  }
  return DepTree(id, text, std::move(tokens));
}

// ---------------------------------------------------------------------------
// Random trees

struct Vocabulary {
  std::vector<std::string> lemmas;
  std::vector<std::string> upos;
  std::vector<std::string> deprels;
};

inline Vocabulary small_vocabulary() {
  return {{"a", "b", "c", "d"}, {"NOUN", "VERB", "ADP"}, {"nsubj", "dobj", "prep", "pobj"}};
}

// Vocabulary drawn from a library's anchors, so random trees hit patterns.
inline Vocabulary library_vocabulary(const PatternLibrary &lib) {
  std::set<std::string> lemmas = {"alpha", "beta", "gamma"}, pos, rels;
  for (const DependencyPattern &p : lib.patterns) {
    lemmas.insert(p.lexemes().begin(), p.lexemes().end());
    for (const PatternEdge &e : p.edges()) {
      pos.insert(e.parent_pos);
      rels.insert(e.deprel);
    }
  }
  Vocabulary v;
  v.lemmas.assign(lemmas.begin(), lemmas.end());
  for (const std::string &p : pos) {
    std::string up = p;
    for (char &c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    v.upos.push_back(up);
  }
  v.upos.push_back("NOUN");
  v.deprels.assign(rels.begin(), rels.end());
  return v;
}

// Uniform random recursive tree: token i (in a random permutation order)
// attaches to an earlier one. np_rate < 0 leaves the flags unset.
inline DepTree random_tree(std::mt19937 &rng, int n, const Vocabulary &vocab, double np_rate = 0.5,
                           const std::string &id = "rand") {
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i + 1;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Token> tokens(n);
  auto pick = [&](const std::vector<std::string> &xs) {
    return xs[std::uniform_int_distribution<size_t>(0, xs.size() - 1)(rng)];
  };
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (int k = 0; k < n; ++k) {
    Token &t = tokens[order[k] - 1];
    t.id = order[k];
    t.lemma = pick(vocab.lemmas);
    t.form = t.lemma;
    t.upos = pick(vocab.upos);
    if (k == 0) {
      t.head = 0;
      t.deprel = "ROOT";
    } else {
      t.head = order[std::uniform_int_distribution<int>(0, k - 1)(rng)];
      t.deprel = pick(vocab.deprels);
    }
    t.is_np_candidate = np_rate >= 0 && coin(rng) < np_rate;
  }
  return DepTree(id, "", std::move(tokens));
}

// Copies a tree, relabels some tokens and hangs extra random tokens off it.
inline DepTree mutate_tree(std::mt19937 &rng, const DepTree &base, const Vocabulary &vocab,
                           int max_tokens, double relabel_rate) {
  std::vector<Token> tokens = base.tokens();
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  auto pick = [&](const std::vector<std::string> &xs) {
    return xs[std::uniform_int_distribution<size_t>(0, xs.size() - 1)(rng)];
  };
  for (Token &t : tokens) {
    if (coin(rng) < relabel_rate) t.lemma = t.form = pick(vocab.lemmas);
    if (coin(rng) < relabel_rate) t.upos = pick(vocab.upos);
    if (t.head != 0 && coin(rng) < relabel_rate) t.deprel = pick(vocab.deprels);
    if (coin(rng) < relabel_rate) t.is_np_candidate = !t.is_np_candidate;
  }
  int extra = std::uniform_int_distribution<int>(0, std::max(0, max_tokens - base.size()))(rng);
  for (int k = 0; k < extra; ++k) {
    Token t;
    t.id = static_cast<TokenId>(tokens.size() + 1);
    t.head = std::uniform_int_distribution<int>(1, static_cast<int>(tokens.size()))(rng);
    t.lemma = t.form = pick(vocab.lemmas);
    t.upos = pick(vocab.upos);
    t.deprel = pick(vocab.deprels);
    t.is_np_candidate = coin(rng) < 0.5;
    tokens.push_back(t);
  }
  return DepTree(base.sentence_id(), base.text(), std::move(tokens));
}

// ---------------------------------------------------------------------------
// Oracles

// Shortest path by breadth-first search over the undirected tree.
inline std::vector<DepEdge> bfs_path(const DepTree &tree, TokenId u, TokenId v) {
  const int n = tree.size();
  std::vector<std::vector<TokenId>> adj(n + 1);
  for (const Token &t : tree.tokens()) {
    if (t.head == 0) continue;
    adj[t.id].push_back(t.head);
    adj[t.head].push_back(t.id);
  }
  std::vector<TokenId> prev(n + 1, -1);
  std::deque<TokenId> queue = {u};
  prev[u] = 0;
  while (!queue.empty()) {
    TokenId x = queue.front();
    queue.pop_front();
    for (TokenId y : adj[x]) {
      if (prev[y] != -1) continue;
      prev[y] = x;
      queue.push_back(y);
    }
  }
  std::vector<TokenId> nodes;
  for (TokenId x = v; x != 0; x = prev[x]) nodes.push_back(x);
  std::reverse(nodes.begin(), nodes.end());
  std::vector<DepEdge> out;
  for (size_t i = 0; i + 1 < nodes.size(); ++i) {
    const Token &a = tree.token(nodes[i]), &b = tree.token(nodes[i + 1]);
    const Token &parent = a.head == b.id ? b : a;
    const Token &child = a.head == b.id ? a : b;
    out.push_back(
        {to_lower(parent.lemma), to_lower(parent.upos), child.deprel, to_lower(child.lemma)});
  }
  return out;
}

// Exponential edit distance, no memoization.
inline size_t recursive_levenshtein(const std::string &a, const std::string &b, size_t i = 0,
                                    size_t j = 0) {
  if (i == a.size()) return b.size() - j;
  if (j == b.size()) return a.size() - i;
  if (a[i] == b[j]) return recursive_levenshtein(a, b, i + 1, j + 1);
  return 1 + std::min({recursive_levenshtein(a, b, i + 1, j), recursive_levenshtein(a, b, i, j + 1),
                       recursive_levenshtein(a, b, i + 1, j + 1)});
}

inline bool oracle_endpoint(const PatternEndpoint &pe, const std::string &lemma,
                            const std::string &u, const std::string &v) {
  if (pe.kind == EndpointKind::kCause) return lemma == u;
  if (pe.kind == EndpointKind::kEffect) return lemma == v;
  return lemma == pe.lemma;
}

inline bool oracle_edge(const PatternEdge &pe, const DepEdge &de, const std::string &u,
                        const std::string &v) {
  return pe.deprel == de.deprel && to_lower(pe.parent_pos) == to_lower(de.parent_pos) &&
         oracle_endpoint(pe.parent, de.parent_lemma, u, v) &&
         oracle_endpoint(pe.child, de.child_lemma, u, v);
}

// Largest number of pattern edges that can be assigned distinct path edges,
// by exhaustive backtracking.
inline int oracle_matched(const DependencyPattern &p, const std::vector<DepEdge> &path,
                          const std::string &u, const std::string &v) {
  const auto &edges = p.edges();
  std::vector<char> used(path.size(), 0);
  std::function<int(size_t)> best = [&](size_t i) -> int {
    if (i == edges.size()) return 0;
    int result = best(i + 1);  // leave edge i unmatched
    for (size_t j = 0; j < path.size(); ++j) {
      if (used[j] || !oracle_edge(edges[i], path[j], u, v)) continue;
      used[j] = 1;
      result = std::max(result, 1 + best(i + 1));
      used[j] = 0;
    }
    return result;
  };
  return best(0);
}

// Every pattern edge has its own matching path edge.
inline bool oracle_subset(const DependencyPattern &p, const std::vector<DepEdge> &path,
                          const std::string &u, const std::string &v) {
  return oracle_matched(p, path, u, v) == static_cast<int>(p.edges().size());
}

using PairKey = std::tuple<TokenId, TokenId, std::string>;

// Candidate set at minThreshold = 1 from the subset check: for each ordered
// pair, the smallest id among fully contained patterns.
inline std::set<PairKey> oracle_candidates_full(const DepTree &tree, const PatternLibrary &lib) {
  std::set<PairKey> out;
  std::vector<TokenId> nodes;
  bool any_flag = false;
  for (const Token &t : tree.tokens()) any_flag |= t.is_np_candidate;
  for (const Token &t : tree.tokens()) {
    bool nominal = t.upos == "NOUN" || t.upos == "PROPN" || t.upos == "PRON";
    if (any_flag ? t.is_np_candidate : nominal) nodes.push_back(t.id);
  }
  for (TokenId u : nodes) {
    for (TokenId v : nodes) {
      if (u == v) continue;
      std::vector<DepEdge> path = bfs_path(tree, u, v);
      std::string ul = to_lower(tree.token(u).lemma), vl = to_lower(tree.token(v).lemma);
      std::string best;
      for (const DependencyPattern &p : lib.patterns) {
        if (oracle_subset(p, path, ul, vl) && (best.empty() || p.id() < best)) best = p.id();
      }
      if (!best.empty()) out.insert({u, v, best});
    }
  }
  return out;
}

// Maximal sentence interval around head whose tokens are all head,
// ancestors of head or descendants of head.
inline TokenSpan oracle_extension(const DepTree &tree, TokenId head) {
  auto related = [&](TokenId x) {
    if (x == head) return true;
    for (TokenId a = tree.token(x).head; a != 0; a = tree.token(a).head) {
      if (a == head) return true;  // x is below head
    }
    for (TokenId a = tree.token(head).head; a != 0; a = tree.token(a).head) {
      if (a == x) return true;  // x is above head
    }
    return false;
  };
  TokenSpan s{head, head};
  while (s.first > 1 && related(s.first - 1)) --s.first;
  while (s.last < tree.size() && related(s.last + 1)) ++s.last;
  return s;
}

// Random string over the first `alphabet` lowercase letters.
inline std::string random_string(std::mt19937 &rng, int max_len, int alphabet) {
  int len = std::uniform_int_distribution<int>(0, max_len)(rng);
  std::string s;
  for (int i = 0; i < len; ++i) {
    s += static_cast<char>('a' + std::uniform_int_distribution<int>(0, alphabet - 1)(rng));
  }
  return s;
}

// Replaces one letter in the middle of s with a different letter.
inline std::string inject_typo(const std::string &s) {
  std::string out = s;
  for (size_t k = 0; k < out.size(); ++k) {
    size_t i = (out.size() / 2 + k) % out.size();
    if (std::isalpha(static_cast<unsigned char>(out[i]))) {
      out[i] = out[i] == 'q' ? 'x' : 'q';
      return out;
    }
  }
  return out + "q";
}

inline std::map<std::string, std::string> read_tsv_map(const std::string &rel) {
  std::map<std::string, std::string> out;
  std::ifstream in(source_path(rel));
  std::string line;
  while (std::getline(in, line)) {
    size_t tab = line.find('\t');
    if (tab != std::string::npos) out[line.substr(0, tab)] = line.substr(tab + 1);
  }
  return out;
}

}  // namespace causal::testing
