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

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "test_support.hpp"

namespace causal {
namespace {

using testing::find_form;
using testing::load_tree;
using PE = PatternEndpoint;

DependencyPattern rho() {
  return DependencyPattern("rho", "Y is attributed to X",
                           {{PE::lexical("attribute"), "verb", "nsubjpass", PE::effect()},
                            {PE::lexical("attribute"), "verb", "prep", PE::lexical("to")},
                            {PE::lexical("to"), "adp", "pobj", PE::cause()}});
}

PatternEdge edge_of(const DependencyPattern &p, const std::string &deprel) {
  for (const PatternEdge &e : p.edges()) {
    if (e.deprel == deprel) return e;
  }
  throw Error("no edge " + deprel);
}

TEST(EdgeMatches, LexicalEdge) {
  EXPECT_TRUE(edge_matches(edge_of(rho(), "prep"), {"attribute", "verb", "prep", "to"}, "infection",
                           "case"));
}

TEST(EdgeMatches, SlotBindsToPair) {
  DepEdge de{"attribute", "verb", "nsubjpass", "case"};
  EXPECT_TRUE(edge_matches(edge_of(rho(), "nsubjpass"), de, "infection", "case"));
  EXPECT_FALSE(edge_matches(edge_of(rho(), "nsubjpass"), de, "case", "infection"));
}

TEST(EdgeMatches, PosAndRelationMustAgree) {
  EXPECT_FALSE(edge_matches(edge_of(rho(), "prep"), {"attribute", "noun", "prep", "to"}, "x", "y"));
  EXPECT_FALSE(
      edge_matches(edge_of(rho(), "prep"), {"attribute", "verb", "agent", "to"}, "x", "y"));
}

TEST(MatchRatio, FullMatchOnInfectionsPath) {
  DepTree t = load_tree("tests/fixtures/fig1.conllu");
  auto path = shortest_path(t, find_form(t, "infections"), find_form(t, "cases"));
  EXPECT_DOUBLE_EQ(match_ratio(rho(), path, "infection", "case"), 1.0);
}

TEST(MatchRatio, EmptyPathIsZero) {
  EXPECT_DOUBLE_EQ(match_ratio(rho(), {}, "infection", "case"), 0.0);
}

TEST(MatchRatio, OneOfThree) {
  std::vector<DepEdge> path = {{"attribute", "verb", "prep", "to"}};
  EXPECT_NEAR(match_ratio(rho(), path, "infection", "case"), 1.0 / 3.0, 1e-12);
}

TEST(MatchRatio, PathEdgeUsedOnce) {
  // Two identical pattern edges are impossible (edges form a set), but two
  // pattern edges can compete for one path edge through X/Y binding.
  DependencyPattern p("p", "",
                      {{PE::lexical("a"), "verb", "dobj", PE::cause()},
                       {PE::lexical("a"), "verb", "dobj", PE::effect()}});
  std::vector<DepEdge> path = {{"a", "verb", "dobj", "same"}};
  EXPECT_DOUBLE_EQ(match_ratio(p, path, "same", "same"), 0.5);
}

TEST(FindCandidates, FigureOnePairs) {
  DepTree t = load_tree("tests/fixtures/fig1.conllu");
  auto c = find_candidates(t, testing::starter_library(), 1.0);
  std::set<std::pair<TokenId, TokenId>> pairs;
  for (const CandidateMatch &m : c) {
    EXPECT_DOUBLE_EQ(m.ratio, 1.0);
    pairs.insert({m.cause_id, m.effect_id});
  }
  TokenId cases = find_form(t, "cases");
  EXPECT_TRUE(pairs.count({find_form(t, "types"), cases}));
  EXPECT_TRUE(pairs.count({find_form(t, "infections"), cases}));
  EXPECT_EQ(pairs.size(), 2u);
}

TEST(FindCandidates, NoCandidateNodes) {
  DepTree t = testing::make_tree(
      "v", {{"Run", "run", "VERB", 0, "ROOT"}, {"fast", "fast", "ADV", 1, "advmod"}});
  EXPECT_TRUE(find_candidates(t, testing::starter_library(), 1.0).empty());
}

TEST(FindCandidates, ThresholdRange) {
  DepTree t = load_tree("tests/fixtures/fig1.conllu");
  EXPECT_THROW(find_candidates(t, testing::starter_library(), 0.4), Error);
  EXPECT_THROW(find_candidates(t, testing::starter_library(), 1.01), Error);
  EXPECT_NO_THROW(find_candidates(t, testing::starter_library(), 0.5));
}

TEST(FindCandidates, TiesGoToSmallestId) {
  PatternLibrary lib;
  lib.patterns.emplace_back("P002", "", rho().edges());
  lib.patterns.emplace_back("P001", "", rho().edges());
  DepTree t = load_tree("tests/fixtures/fig1.conllu");
  auto c = find_candidates(t, lib, 1.0);
  ASSERT_FALSE(c.empty());
  for (const CandidateMatch &m : c) EXPECT_EQ(m.pattern_id, "P001");
}

// Random trees, half drawn from scratch and half grown from dummy parses so
// that full matches actually occur.
std::vector<DepTree> random_corpus(unsigned seed, int count) {
  std::mt19937 rng(seed);
  const auto &lib = testing::starter_library();
  auto vocab = testing::library_vocabulary(lib);
  auto dummies = testing::load_trees("data/dummies.conllu");
  std::vector<DepTree> out;
  for (int i = 0; i < count; ++i) {
    if (i % 2 == 0) {
      int n = std::uniform_int_distribution<int>(1, 8)(rng);
      out.push_back(testing::random_tree(rng, n, vocab, i % 4 == 0 ? -1.0 : 0.5));
    } else {
      const DepTree &base = dummies[rng() % dummies.size()];
      if (base.size() > 8) {
        --i;
        continue;
      }
      out.push_back(testing::mutate_tree(rng, base, vocab, 8, 0.1));
    }
  }
  return out;
}

TEST(FindCandidates, MatchesSubsetOracleOnRandomTrees) {
  const auto &lib = testing::starter_library();
  size_t emitted = 0;
  for (const DepTree &t : random_corpus(11, 300)) {
    std::set<testing::PairKey> got;
    for (const CandidateMatch &m : find_candidates(t, lib, 1.0)) {
      got.insert({m.cause_id, m.effect_id, m.pattern_id});
    }
    ASSERT_EQ(got, testing::oracle_candidates_full(t, lib));
    emitted += got.size();
  }
  EXPECT_GT(emitted, 20u);  // the corpus must actually exercise matches
}

TEST(FindCandidates, RatioMatchesBacktrackingOracle) {
  const auto &lib = testing::starter_library();
  for (const DepTree &t : random_corpus(12, 100)) {
    for (TokenId u = 1; u <= t.size(); ++u) {
      for (TokenId v = 1; v <= t.size(); ++v) {
        if (u == v) continue;
        auto path = shortest_path(t, u, v);
        std::string ul = to_lower(t.token(u).lemma), vl = to_lower(t.token(v).lemma);
        for (const DependencyPattern &p : lib.patterns) {
          ASSERT_EQ(matched_edge_count(p, path, ul, vl), testing::oracle_matched(p, path, ul, vl));
        }
      }
    }
  }
}

TEST(FindCandidates, LoweringThresholdNeverRemovesPairs) {
  const auto &lib = testing::starter_library();
  for (const DepTree &t : random_corpus(13, 200)) {
    std::set<std::pair<TokenId, TokenId>> prev;
    for (double thr : {1.0, 0.75, 0.5}) {
      std::set<std::pair<TokenId, TokenId>> cur;
      for (const CandidateMatch &m : find_candidates(t, lib, thr)) {
        EXPECT_GE(m.ratio + kRatioSlack, thr);
        cur.insert({m.cause_id, m.effect_id});
      }
      for (const auto &pr : prev) ASSERT_TRUE(cur.count(pr));
      prev = std::move(cur);
    }
  }
}

TEST(FindCandidates, WorkIsPairsTimesPatterns) {
  const auto &lib = testing::starter_library();
  for (const DepTree &t : random_corpus(14, 60)) {
    MatchStats stats;
    find_candidates(t, lib, 1.0, &stats);
    const std::uint64_t k = candidate_nodes(t).size();
    EXPECT_EQ(stats.paths, k * (k ? k - 1 : 0));
    EXPECT_EQ(stats.ratio_evaluations, stats.paths * lib.patterns.size());
    EXPECT_LE(stats.paths, static_cast<std::uint64_t>(t.size()) * t.size());
  }
}

}  // namespace
}  // namespace causal
