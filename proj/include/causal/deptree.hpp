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

// Dependency trees: the token model, CoNLL-U reading/writing and the
// navigation primitives the matcher and the phrase extender are built on.

#pragma once

#include <algorithm>
#include <cctype>
#include <compare>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace causal {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// 1-based position of a token in its sentence; 0 is the virtual root.
using TokenId = int;

inline std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char &c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

struct Token {
  TokenId id = 0;
  std::string form;
  std::string lemma;
  std::string upos;
  TokenId head = 0;
  std::string deprel;
  bool is_np_candidate = false;

  bool operator==(const Token &) const = default;
};

// One tree edge as [parent lemma, parent POS, relation, child lemma].
// Lemmas and POS are lowercased on construction from a tree.
struct DepEdge {
  std::string parent_lemma;
  std::string parent_pos;
  std::string deprel;
  std::string child_lemma;

  auto operator<=>(const DepEdge &) const = default;
};

inline std::ostream &operator<<(std::ostream &os, const DepEdge &e) {
  return os << '(' << e.parent_lemma << ',' << e.parent_pos << ',' << e.deprel
            << ',' << e.child_lemma << ')';
}

// A parsed sentence. Immutable once constructed; the constructor checks
// that ids are 1..N, that there is exactly one root and that every token
// reaches it.
class DepTree {
 public:
  DepTree(std::string sentence_id, std::string text, std::vector<Token> tokens)
      : sentence_id_(std::move(sentence_id)),
        text_(std::move(text)),
        tokens_(std::move(tokens)) {
    validate();
    index();
  }

  const std::string &sentence_id() const { return sentence_id_; }
  const std::string &text() const { return text_; }
  const std::vector<Token> &tokens() const { return tokens_; }
  int size() const { return static_cast<int>(tokens_.size()); }
  TokenId root() const { return root_; }

  bool valid_id(TokenId id) const { return id >= 1 && id <= size(); }

  const Token &token(TokenId id) const {
    check_id(id);
    return tokens_[id - 1];
  }

  // Children in sentence order.
  const std::vector<TokenId> &children(TokenId id) const {
    check_id(id);
    return children_[id];
  }

  int depth(TokenId id) const {
    check_id(id);
    return depth_[id];
  }

  void check_id(TokenId id) const {
    if (!valid_id(id)) {
      throw Error("sentence '" + sentence_id_ + "': invalid token id " +
                  std::to_string(id));
    }
  }

 private:
  void validate() {
    const int n = size();
    int roots = 0;
    for (int i = 0; i < n; ++i) {
      const Token &t = tokens_[i];
      if (t.id != i + 1) {
        throw Error("token ids must be contiguous from 1; found " +
                    std::to_string(t.id) + " at position " + std::to_string(i + 1));
      }
      if (t.head < 0 || t.head > n) {
        throw Error("token " + std::to_string(t.id) + " has head " +
                    std::to_string(t.head) + " outside 0.." + std::to_string(n));
      }
      if (t.head == t.id) {
        throw Error("token " + std::to_string(t.id) + " is its own head");
      }
      if (t.head == 0) {
        ++roots;
        root_ = t.id;
      }
    }
    if (n > 0 && roots != 1) {
      throw Error("expected exactly one root, found " + std::to_string(roots));
    }
    // Every token must reach the root within n steps.
    for (const Token &t : tokens_) {
      TokenId cur = t.id;
      int steps = 0;
      while (cur != 0) {
        if (++steps > n) {
          throw Error("cyclic head links through token " + std::to_string(t.id));
        }
        cur = tokens_[cur - 1].head;
      }
    }
  }

  void index() {
    const int n = size();
    children_.assign(n + 1, {});
    depth_.assign(n + 1, 0);
    for (const Token &t : tokens_) {
      if (t.head != 0) children_[t.head].push_back(t.id);
    }
    for (const Token &t : tokens_) {
      int d = 0;
      for (TokenId cur = t.head; cur != 0; cur = tokens_[cur - 1].head) ++d;
      depth_[t.id] = d;
    }
  }

  std::string sentence_id_;
  std::string text_;
  std::vector<Token> tokens_;
  TokenId root_ = 0;
  std::vector<std::vector<TokenId>> children_;
  std::vector<int> depth_;
};

// ---------------------------------------------------------------------------
// CoNLL-U

namespace conllu_detail {

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      return out;
    }
    out.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

inline bool parse_int(const std::string &s, int *value) {
  if (s.empty() || s.size() > 9) return false;
  int v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  *value = v;
  return true;
}

inline std::string trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline bool misc_has_np_head(const std::string &misc) {
  if (misc == "_") return false;
  for (const std::string &item : split(misc, '|')) {
    if (item == "NPHead=Yes") return true;
  }
  return false;
}

}  // namespace conllu_detail

// Reads CoNLL-U sentence blocks. Multiword-token ranges ("3-4") and empty
// nodes ("5.1") are skipped. Sentences without a sent_id comment get their
// 1-based ordinal as id. Any structural problem throws an Error naming the
// sentence and the input line.
inline std::vector<DepTree> parse_conllu(std::istream &in) {
  using namespace conllu_detail;
  std::vector<DepTree> trees;
  std::string sent_id, text;
  std::vector<Token> tokens;
  int line_no = 0;
  int block_start = 0;
  bool in_block = false;

  auto describe = [&](int line) {
    std::string id = sent_id.empty() ? "#" + std::to_string(trees.size() + 1) : sent_id;
    return "sentence '" + id + "' (line " + std::to_string(line) + "): ";
  };

  auto flush = [&]() {
    if (!in_block) return;
    if (!tokens.empty()) {
      std::string id = sent_id.empty() ? std::to_string(trees.size() + 1) : sent_id;
      try {
        trees.emplace_back(std::move(id), std::move(text), std::move(tokens));
      } catch (const Error &e) {
        throw Error(describe(block_start) + e.what());
      }
    }
    sent_id.clear();
    text.clear();
    tokens.clear();
    in_block = false;
  };

  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) {
      flush();
      continue;
    }
    if (!in_block) {
      in_block = true;
      block_start = line_no;
    }
    if (line[0] == '#') {
      std::string body = trim(std::string_view(line).substr(1));
      auto take = [&](std::string_view key, std::string *dst) {
        if (body.rfind(key, 0) != 0) return false;
        std::string rest = trim(std::string_view(body).substr(key.size()));
        if (rest.empty() || rest[0] != '=') return false;
        *dst = trim(std::string_view(rest).substr(1));
        return true;
      };
      if (!take("sent_id", &sent_id)) take("text", &text);
      continue;
    }
    std::vector<std::string> cols = split(line, '\t');
    if (cols.size() != 10) {
      throw Error(describe(line_no) + "expected 10 tab-separated columns, found " +
                  std::to_string(cols.size()));
    }
    if (cols[0].find_first_of("-.") != std::string::npos) continue;
    Token t;
    if (!parse_int(cols[0], &t.id)) {
      throw Error(describe(line_no) + "non-integer token id '" + cols[0] + "'");
    }
    if (!parse_int(cols[6], &t.head)) {
      throw Error(describe(line_no) + "non-integer head '" + cols[6] + "'");
    }
    t.form = cols[1];
    t.lemma = cols[2] == "_" ? cols[1] : cols[2];
    t.upos = cols[3];
    t.deprel = cols[7];
    t.is_np_candidate = misc_has_np_head(cols[9]);
    if (t.id != static_cast<int>(tokens.size()) + 1) {
      throw Error(describe(line_no) + "token id " + cols[0] + " out of sequence");
    }
    tokens.push_back(std::move(t));
  }
  flush();
  return trees;
}

inline std::vector<DepTree> parse_conllu(const std::string &text) {
  std::istringstream in(text);
  return parse_conllu(in);
}

inline void write_conllu(std::ostream &out, const DepTree &tree) {
  out << "# sent_id = " << tree.sentence_id() << '\n';
  if (!tree.text().empty()) out << "# text = " << tree.text() << '\n';
  for (const Token &t : tree.tokens()) {
    out << t.id << '\t' << t.form << '\t' << t.lemma << '\t' << t.upos << "\t_\t_\t"
        << t.head << '\t' << t.deprel << "\t_\t" << (t.is_np_candidate ? "NPHead=Yes" : "_")
        << '\n';
  }
  out << '\n';
}

// ---------------------------------------------------------------------------
// Navigation

inline DepEdge make_edge(const DepTree &tree, TokenId parent, TokenId child) {
  const Token &p = tree.token(parent);
  const Token &c = tree.token(child);
  return DepEdge{to_lower(p.lemma), to_lower(p.upos), c.deprel, to_lower(c.lemma)};
}

// Token ids on the tree path from u to v, both ends included.
inline std::vector<TokenId> path_nodes(const DepTree &tree, TokenId u, TokenId v) {
  tree.check_id(u);
  tree.check_id(v);
  std::vector<TokenId> up, down;
  TokenId a = u, b = v;
  while (tree.depth(a) > tree.depth(b)) {
    up.push_back(a);
    a = tree.token(a).head;
  }
  while (tree.depth(b) > tree.depth(a)) {
    down.push_back(b);
    b = tree.token(b).head;
  }
  while (a != b) {
    up.push_back(a);
    down.push_back(b);
    a = tree.token(a).head;
    b = tree.token(b).head;
  }
  up.push_back(a);
  up.insert(up.end(), down.rbegin(), down.rend());
  return up;
}

// Edges of the undirected path from u to v, ordered from u's end. Each edge
// keeps its stored parent->child orientation.
inline std::vector<DepEdge> shortest_path(const DepTree &tree, TokenId u, TokenId v) {
  std::vector<TokenId> nodes = path_nodes(tree, u, v);
  std::vector<DepEdge> edges;
  edges.reserve(nodes.size());
  for (size_t i = 0; i + 1 < nodes.size(); ++i) {
    TokenId a = nodes[i], b = nodes[i + 1];
    if (tree.token(a).head == b) {
      edges.push_back(make_edge(tree, b, a));
    } else {
      edges.push_back(make_edge(tree, a, b));
    }
  }
  return edges;
}

// Chain of heads from id up to the root, nearest first.
inline std::vector<TokenId> ancestors(const DepTree &tree, TokenId id) {
  tree.check_id(id);
  std::vector<TokenId> out;
  for (TokenId cur = tree.token(id).head; cur != 0; cur = tree.token(cur).head) {
    out.push_back(cur);
  }
  return out;
}

// All tokens strictly below id, in sentence order.
inline std::vector<TokenId> descendants(const DepTree &tree, TokenId id) {
  tree.check_id(id);
  std::vector<TokenId> out;
  std::vector<TokenId> stack(tree.children(id).begin(), tree.children(id).end());
  while (!stack.empty()) {
    TokenId cur = stack.back();
    stack.pop_back();
    out.push_back(cur);
    for (TokenId c : tree.children(cur)) stack.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Noun-phrase heads marked during ingestion; when a tree carries no marks,
// every NOUN, PROPN and PRON token.
inline std::vector<TokenId> candidate_nodes(const DepTree &tree) {
  std::vector<TokenId> out;
  for (const Token &t : tree.tokens()) {
    if (t.is_np_candidate) out.push_back(t.id);
  }
  if (!out.empty()) return out;
  for (const Token &t : tree.tokens()) {
    if (t.upos == "NOUN" || t.upos == "PROPN" || t.upos == "PRON") out.push_back(t.id);
  }
  return out;
}

}  // namespace causal
