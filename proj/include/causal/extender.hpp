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

// Phrase extension and cleaning: grows a matched head node into a
// contiguous phrase and trims pattern words and stopwords off its ends.

#pragma once

#include <algorithm>
#include <fstream>
#include <istream>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "causal/deptree.hpp"
#include "causal/matcher.hpp"
#include "causal/patterns.hpp"

namespace causal {

using StopwordSet = std::unordered_set<std::string>;

// Function words only. Determiners and quantifiers ("the", "most",
// "both") are left out because they open noun phrases.
inline const StopwordSet &default_stopwords() {
  static const StopwordSet words = {
      // prepositions
      "about", "above", "across", "after", "against", "along", "among", "around", "as", "at",
      "before", "behind", "below", "beneath", "beside", "between", "beyond", "by", "despite",
      "down", "during", "except", "for", "from", "in", "inside", "into", "near", "of", "off",
      "on", "onto", "out", "outside", "over", "past", "since", "through", "throughout", "to",
      "toward", "towards", "under", "underneath", "until", "unto", "up", "upon", "via", "with",
      "within", "without",
      // conjunctions and connectives
      "and", "or", "nor", "but", "yet", "so", "because", "although", "though", "while",
      "whereas", "if", "unless", "than", "then", "thus", "hence", "therefore", "moreover",
      "furthermore", "however", "also", "together",
      // auxiliaries
      "be", "is", "are", "was", "were", "been", "being", "am", "have", "has", "had", "having",
      "do", "does", "did", "will", "would", "shall", "should", "can", "could", "may", "might",
      "must",
      // relative and clause words
      "which", "who", "whom", "whose", "that", "where", "when", "there", "it", "its", "not",
      // punctuation
      ",", ".", ";", ":", "!", "?", "(", ")", "[", "]", "\"", "'", "-", "--"};
  return words;
}

// One word per line; blank lines and '#' comments ignored. Words are
// lowercased.
inline StopwordSet read_stopwords(std::istream &in) {
  StopwordSet out;
  std::string line;
  while (std::getline(in, line)) {
    std::string w = conllu_detail::trim(line);
    if (w.empty() || w[0] == '#') continue;
    out.insert(to_lower(w));
  }
  return out;
}

inline StopwordSet load_stopwords(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open stopword file '" + path + "'");
  return read_stopwords(in);
}

// Inclusive token id interval.
struct TokenSpan {
  TokenId first = 0;
  TokenId last = -1;

  bool empty() const { return last < first; }
  int size() const { return empty() ? 0 : last - first + 1; }
  bool contains(TokenId id) const { return id >= first && id <= last; }
  bool operator==(const TokenSpan &) const = default;
};

namespace extender_detail {

// Widens span one token at a time while the neighbouring token is allowed.
inline TokenSpan grow(TokenSpan span, const std::vector<char> &allowed) {
  const int n = static_cast<int>(allowed.size()) - 1;
  while (true) {
    if (span.first > 1 && allowed[span.first - 1]) {
      --span.first;
    } else if (span.last < n && allowed[span.last + 1]) {
      ++span.last;
    } else {
      return span;
    }
  }
}

}  // namespace extender_detail

// Extends a head node into a phrase. The ancestor side and the descendant
// side are each grown around the head while they stay contiguous in the
// sentence; the side covering more words wins and is then re-merged with
// whatever part of the other side touches it.
inline TokenSpan extend_phrase(const DepTree &tree, TokenId head) {
  tree.check_id(head);
  const int n = tree.size();
  std::vector<char> up(n + 1, 0), down(n + 1, 0), both(n + 1, 0);
  for (TokenId a : ancestors(tree, head)) up[a] = both[a] = 1;
  for (TokenId d : descendants(tree, head)) down[d] = both[d] = 1;

  const TokenSpan seed{head, head};
  TokenSpan from_ancestors = extender_detail::grow(seed, up);
  TokenSpan from_descendants = extender_detail::grow(seed, down);
  TokenSpan chosen = from_ancestors.size() > from_descendants.size() ? from_ancestors
                                                                      : from_descendants;
  return extender_detail::grow(chosen, both);
}

// Strips tokens whose lemma is a pattern lexeme or a stopword from both
// ends of the span, then joins the remaining surface forms with single
// spaces. Interior tokens are never removed.
inline std::string clean(const DepTree &tree, TokenSpan span,
                         const std::set<std::string> &pattern_lexemes,
                         const StopwordSet &stopwords) {
  auto removable = [&](TokenId id) {
    const Token &t = tree.token(id);
    const std::string lemma = to_lower(t.lemma);
    return pattern_lexemes.count(lemma) > 0 || stopwords.count(lemma) > 0 ||
           stopwords.count(to_lower(t.form)) > 0;
  };
  TokenId first = span.first, last = span.last;
  while (first <= last && removable(first)) ++first;
  while (last >= first && removable(last)) --last;
  std::string out;
  for (TokenId id = first; id <= last; ++id) {
    if (!out.empty()) out += ' ';
    out += tree.token(id).form;
  }
  return out;
}

struct Extraction {
  std::string sentence_id;
  std::string cause;
  std::string effect;
  std::string pattern_id;
  double ratio = 0.0;
  TokenId cause_head = 0;
  TokenId effect_head = 0;

  bool operator==(const Extraction &) const = default;
};

// Matches, extends and cleans. Pairs with an empty side are dropped and
// repeated (cause, effect) strings within the sentence are kept once.
inline std::vector<Extraction> extract_causal_phrases(const DepTree &tree,
                                                      const PatternLibrary &lib,
                                                      double min_threshold,
                                                      const StopwordSet &stopwords) {
  std::vector<Extraction> out;
  for (const CandidateMatch &m : find_candidates(tree, lib, min_threshold)) {
    const DependencyPattern *p = lib.find(m.pattern_id);
    const std::set<std::string> &lexemes = p->lexemes();
    Extraction e;
    e.sentence_id = tree.sentence_id();
    e.cause = clean(tree, extend_phrase(tree, m.cause_id), lexemes, stopwords);
    e.effect = clean(tree, extend_phrase(tree, m.effect_id), lexemes, stopwords);
    if (e.cause.empty() || e.effect.empty()) continue;
    bool seen = std::any_of(out.begin(), out.end(), [&](const Extraction &x) {
      return x.cause == e.cause && x.effect == e.effect;
    });
    if (seen) continue;
    e.pattern_id = m.pattern_id;
    e.ratio = m.ratio;
    e.cause_head = m.cause_id;
    e.effect_head = m.effect_id;
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace causal
