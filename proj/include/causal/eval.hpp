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

// Evaluation of extracted (cause, effect) pairs against gold triplets:
// character edit distance, the edit similarity percentage, thresholded
// one-to-one matching, and precision/recall/F1 with per-pattern and
// per-phrase-length breakdowns.

#pragma once

#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <map>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "causal/deptree.hpp"
#include "causal/extender.hpp"
#include "json.hpp"

namespace causal {

struct GoldTriplet {
  std::string sentence_id;
  std::string cause;
  std::string effect;

  bool operator==(const GoldTriplet &) const = default;
};

// Decodes UTF-8 into code points. Malformed bytes decode as themselves so
// that every input has a length.
inline std::u32string utf8_decode(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  size_t i = 0;
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    int extra = c < 0x80 ? 0 : (c >> 5) == 0x6 ? 1 : (c >> 4) == 0xE ? 2 : (c >> 3) == 0x1E ? 3 : -1;
    if (extra < 0 || i + static_cast<size_t>(extra) >= s.size()) {
      out.push_back(c);
      ++i;
      continue;
    }
    char32_t cp = extra == 0 ? c : extra == 1 ? (c & 0x1F) : extra == 2 ? (c & 0x0F) : (c & 0x07);
    bool ok = true;
    for (int k = 1; k <= extra; ++k) {
      unsigned char cc = static_cast<unsigned char>(s[i + k]);
      if ((cc >> 6) != 0x2) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (cc & 0x3F);
    }
    if (!ok) {
      out.push_back(c);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += extra + 1;
  }
  return out;
}

inline size_t levenshtein(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), size_t{0});
  for (size_t i = 1; i <= a.size(); ++i) {
    size_t diag = row[0];
    row[0] = i;
    for (size_t j = 1; j <= b.size(); ++j) {
      size_t up = row[j];
      size_t sub = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
      row[j] = std::min({sub, up + 1, row[j - 1] + 1});
      diag = up;
    }
  }
  return row[b.size()];
}

// Edit distance over characters (code points).
inline size_t levenshtein(std::string_view s1, std::string_view s2) {
  return levenshtein(std::u32string_view(utf8_decode(s1)), std::u32string_view(utf8_decode(s2)));
}

// Edit similarity in percent: (L - d) / L * 100 with L the longer length.
// Two empty strings are identical: 100.
inline double eper(std::string_view s1, std::string_view s2) {
  std::u32string a = utf8_decode(s1), b = utf8_decode(s2);
  const size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 100.0;
  const size_t d = levenshtein(std::u32string_view(a), std::u32string_view(b));
  return static_cast<double>(longest - d) / static_cast<double>(longest) * 100.0;
}

// ASCII case-fold, whitespace runs collapsed to one space, ends trimmed.
inline std::string normalize_phrase(std::string_view s) {
  std::string out;
  bool pending_space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

inline int word_count(std::string_view s) {
  int n = 0;
  bool in_word = false;
  for (char c : s) {
    bool space = std::isspace(static_cast<unsigned char>(c));
    if (!space && !in_word) ++n;
    in_word = !space;
  }
  return n;
}

inline constexpr double kSimSlack = 1e-9;

inline void check_min_sim(double min_sim) {
  if (!(min_sim > 0.0 && min_sim <= 100.0)) {
    throw Error("minSim must lie in (0, 100], got " + std::to_string(min_sim));
  }
}

struct TripletMatch {
  size_t pred = 0;
  size_t gold = 0;
  double score = 0.0;  // min(cause ePer, effect ePer)
};

// One-to-one alignment of predictions to gold triplets of the same
// sentence. A pair qualifies when both the cause and the effect similarity
// reach min_sim; qualifying pairs are taken greedily by descending score,
// ties by prediction then gold input order. Similarities are computed on
// normalized strings, so min_sim = 100 is exact normalized equality.
inline std::vector<TripletMatch> align_triplets(std::span<const Extraction> pred,
                                                std::span<const GoldTriplet> gold,
                                                double min_sim) {
  check_min_sim(min_sim);
  std::unordered_map<std::string, std::vector<size_t>> gold_by_sentence;
  for (size_t g = 0; g < gold.size(); ++g) gold_by_sentence[gold[g].sentence_id].push_back(g);

  std::vector<std::string> gold_cause(gold.size()), gold_effect(gold.size());
  for (size_t g = 0; g < gold.size(); ++g) {
    gold_cause[g] = normalize_phrase(gold[g].cause);
    gold_effect[g] = normalize_phrase(gold[g].effect);
  }

  std::vector<TripletMatch> options;
  for (size_t p = 0; p < pred.size(); ++p) {
    auto it = gold_by_sentence.find(pred[p].sentence_id);
    if (it == gold_by_sentence.end()) continue;
    const std::string pc = normalize_phrase(pred[p].cause);
    const std::string pe = normalize_phrase(pred[p].effect);
    for (size_t g : it->second) {
      double sc = eper(pc, gold_cause[g]);
      if (sc + kSimSlack < min_sim) continue;
      double se = eper(pe, gold_effect[g]);
      if (se + kSimSlack < min_sim) continue;
      options.push_back({p, g, std::min(sc, se)});
    }
  }
  std::stable_sort(options.begin(), options.end(), [](const TripletMatch &a, const TripletMatch &b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.pred != b.pred) return a.pred < b.pred;
    return a.gold < b.gold;
  });
  std::vector<char> pred_used(pred.size(), 0), gold_used(gold.size(), 0);
  std::vector<TripletMatch> out;
  for (const TripletMatch &m : options) {
    if (pred_used[m.pred] || gold_used[m.gold]) continue;
    pred_used[m.pred] = gold_used[m.gold] = 1;
    out.push_back(m);
  }
  std::sort(out.begin(), out.end(),
            [](const TripletMatch &a, const TripletMatch &b) { return a.pred < b.pred; });
  return out;
}

inline size_t match_triplets(std::span<const Extraction> pred, std::span<const GoldTriplet> gold,
                             double min_sim) {
  return align_triplets(pred, gold, min_sim).size();
}

struct PrfCounts {
  size_t n_pred = 0;
  size_t n_gold = 0;
  size_t n_pred_matched = 0;
  size_t n_gold_matched = 0;

  double precision() const { return n_pred ? double(n_pred_matched) / double(n_pred) : 0.0; }
  double recall() const { return n_gold ? double(n_gold_matched) / double(n_gold) : 0.0; }
  double f1() const {
    double p = precision(), r = recall();
    return p + r > 0 ? 2 * p * r / (p + r) : 0.0;
  }
};

struct PatternPrecision {
  size_t predicted = 0;
  size_t correct = 0;
  double precision() const { return predicted ? double(correct) / double(predicted) : 0.0; }
};

struct EvalReport {
  double min_sim = 100.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  size_t n_pred = 0;
  size_t n_gold = 0;
  size_t n_matched = 0;
  std::map<std::string, PatternPrecision> per_pattern;
  std::map<int, PrfCounts> per_length;
  std::vector<std::string> warnings;
};

inline double f1_score(double p, double r) { return p + r > 0 ? 2 * p * r / (p + r) : 0.0; }

// Length buckets use the word count of the longer of cause and effect.
// Gold triplets fall in their own bucket; a matched prediction counts in
// the bucket of its gold triplet, an unmatched one in its own.
inline EvalReport report(std::span<const Extraction> pred, std::span<const GoldTriplet> gold,
                         double min_sim) {
  const std::vector<TripletMatch> matches = align_triplets(pred, gold, min_sim);
  EvalReport r;
  r.min_sim = min_sim;
  r.n_pred = pred.size();
  r.n_gold = gold.size();
  r.n_matched = matches.size();
  r.precision = r.n_pred ? double(r.n_matched) / double(r.n_pred) : 0.0;
  r.recall = r.n_gold ? double(r.n_matched) / double(r.n_gold) : 0.0;
  r.f1 = f1_score(r.precision, r.recall);
  if (pred.empty()) r.warnings.push_back("no predictions; precision reported as 0");
  if (gold.empty()) r.warnings.push_back("no gold triplets; recall reported as 0");

  std::vector<long> gold_of_pred(pred.size(), -1);
  for (const TripletMatch &m : matches) gold_of_pred[m.pred] = static_cast<long>(m.gold);

  auto length_of = [](const std::string &a, const std::string &b) {
    return std::max(word_count(a), word_count(b));
  };
  for (size_t g = 0; g < gold.size(); ++g) {
    ++r.per_length[length_of(gold[g].cause, gold[g].effect)].n_gold;
  }
  for (const TripletMatch &m : matches) {
    PrfCounts &bucket = r.per_length[length_of(gold[m.gold].cause, gold[m.gold].effect)];
    ++bucket.n_gold_matched;
    ++bucket.n_pred_matched;
    ++bucket.n_pred;
  }
  for (size_t p = 0; p < pred.size(); ++p) {
    PatternPrecision &pp = r.per_pattern[pred[p].pattern_id];
    ++pp.predicted;
    if (gold_of_pred[p] >= 0) {
      ++pp.correct;
    } else {
      ++r.per_length[length_of(pred[p].cause, pred[p].effect)].n_pred;
    }
  }
  return r;
}

inline nlohmann::json report_to_json(const EvalReport &r) {
  nlohmann::json per_pattern = nlohmann::json::object();
  for (const auto &[id, pp] : r.per_pattern) {
    per_pattern[id] = {{"predicted", pp.predicted}, {"correct", pp.correct},
                       {"precision", pp.precision()}};
  }
  nlohmann::json per_length = nlohmann::json::object();
  for (const auto &[len, c] : r.per_length) {
    per_length[std::to_string(len)] = {{"n_pred", c.n_pred},
                                       {"n_gold", c.n_gold},
                                       {"n_matched", c.n_gold_matched},
                                       {"precision", c.precision()},
                                       {"recall", c.recall()},
                                       {"f1", c.f1()}};
  }
  return {{"min_sim", r.min_sim},     {"precision", r.precision}, {"recall", r.recall},
          {"f1", r.f1},               {"n_pred", r.n_pred},       {"n_gold", r.n_gold},
          {"n_matched", r.n_matched}, {"per_pattern", per_pattern},
          {"per_length", per_length}, {"warnings", r.warnings}};
}

// Plain-text tables: overall Prec/Rec/F1, per-pattern precision, and F1 by
// phrase length.
inline void print_report(std::ostream &os, const EvalReport &r) {
  auto fixed3 = [](double v) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(3) << v;
    return s.str();
  };
  os << "minSim = " << r.min_sim << "%  (pred " << r.n_pred << ", gold " << r.n_gold
     << ", matched " << r.n_matched << ")\n";
  os << std::left << std::setw(10) << "" << std::right << std::setw(8) << "Prec" << std::setw(8)
     << "Rec" << std::setw(8) << "F1" << '\n';
  os << std::left << std::setw(10) << "overall" << std::right << std::setw(8)
     << fixed3(r.precision) << std::setw(8) << fixed3(r.recall) << std::setw(8) << fixed3(r.f1)
     << "\n\n";

  os << std::left << std::setw(12) << "pattern" << std::right << std::setw(10) << "predicted"
     << std::setw(10) << "correct" << std::setw(8) << "Prec" << '\n';
  for (const auto &[id, pp] : r.per_pattern) {
    os << std::left << std::setw(12) << (id.empty() ? "-" : id) << std::right << std::setw(10)
       << pp.predicted << std::setw(10) << pp.correct << std::setw(8) << fixed3(pp.precision())
       << '\n';
  }
  os << '\n';

  os << std::left << std::setw(8) << "length";
  for (const auto &[len, c] : r.per_length) os << std::right << std::setw(7) << len;
  os << '\n' << std::left << std::setw(8) << "F1";
  for (const auto &[len, c] : r.per_length) os << std::right << std::setw(7) << fixed3(c.f1());
  os << '\n';
}

}  // namespace causal
