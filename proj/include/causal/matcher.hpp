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

// Pattern matching over candidate node pairs.
//
// For every ordered pair (u, v) of candidate nodes the tree path between
// them is compared against each library pattern, with X bound to u's lemma
// and Y bound to v's lemma. The match ratio is the fraction of pattern
// edges found on the path, each path edge usable once.

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "causal/deptree.hpp"
#include "causal/patterns.hpp"

namespace causal {

struct CandidateMatch {
  TokenId cause_id = 0;
  TokenId effect_id = 0;
  std::string pattern_id;
  double ratio = 0.0;

  bool operator==(const CandidateMatch &) const = default;
};

inline constexpr double kMinThresholdLow = 0.5;
inline constexpr double kMinThresholdHigh = 1.0;

// Ratios are k/n for small n; the slack only absorbs rounding in k/n.
inline constexpr double kRatioSlack = 1e-9;

inline void check_min_threshold(double t) {
  if (!(t >= kMinThresholdLow && t <= kMinThresholdHigh)) {
    throw Error("minThreshold must lie in [0.5, 1], got " + std::to_string(t));
  }
}

inline bool endpoint_matches(const PatternEndpoint &pe, const std::string &lemma,
                             const std::string &u_lemma, const std::string &v_lemma) {
  switch (pe.kind) {
    case EndpointKind::kCause: return lemma == u_lemma;
    case EndpointKind::kEffect: return lemma == v_lemma;
    default: return lemma == pe.lemma;
  }
}

// u_lemma and v_lemma are expected lowercased, as DepEdge lemmas are.
inline bool edge_matches(const PatternEdge &pe, const DepEdge &de, const std::string &u_lemma,
                         const std::string &v_lemma) {
  return pe.deprel == de.deprel && to_lower(pe.parent_pos) == to_lower(de.parent_pos) &&
         endpoint_matches(pe.parent, de.parent_lemma, u_lemma, v_lemma) &&
         endpoint_matches(pe.child, de.child_lemma, u_lemma, v_lemma);
}

// Maximum number of pattern edges that can be paired with distinct path
// edges (bipartite matching by augmenting paths).
inline int matched_edge_count(const DependencyPattern &p, std::span<const DepEdge> path,
                              const std::string &u_lemma, const std::string &v_lemma) {
  const auto &edges = p.edges();
  const size_t np = edges.size(), nd = path.size();
  if (np == 0 || nd == 0) return 0;
  std::vector<std::vector<int>> adj(np);
  for (size_t i = 0; i < np; ++i) {
    for (size_t j = 0; j < nd; ++j) {
      if (edge_matches(edges[i], path[j], u_lemma, v_lemma)) adj[i].push_back(static_cast<int>(j));
    }
  }
  std::vector<int> owner(nd, -1);
  std::vector<char> seen;
  std::function<bool(int)> augment = [&](int i) {
    for (int j : adj[i]) {
      if (seen[j]) continue;
      seen[j] = 1;
      if (owner[j] < 0 || augment(owner[j])) {
        owner[j] = i;
        return true;
      }
    }
    return false;
  };
  int matched = 0;
  for (size_t i = 0; i < np; ++i) {
    seen.assign(nd, 0);
    if (augment(static_cast<int>(i))) ++matched;
  }
  return matched;
}

inline double match_ratio(const DependencyPattern &p, std::span<const DepEdge> path,
                          const std::string &u_lemma, const std::string &v_lemma) {
  if (p.edges().empty()) return 0.0;
  return static_cast<double>(matched_edge_count(p, path, u_lemma, v_lemma)) /
         static_cast<double>(p.edges().size());
}

// Work counters, used to check the pairs x patterns cost bound.
struct MatchStats {
  std::uint64_t paths = 0;
  std::uint64_t ratio_evaluations = 0;
};

// For each ordered candidate pair keeps the best pattern at or above the
// threshold; ties go to the smallest pattern id. Output is ordered by
// (cause position in candidate list, effect position).
inline std::vector<CandidateMatch> find_candidates(const DepTree &tree, const PatternLibrary &lib,
                                                   double min_threshold,
                                                   MatchStats *stats = nullptr) {
  check_min_threshold(min_threshold);
  std::vector<CandidateMatch> out;
  const std::vector<TokenId> nodes = candidate_nodes(tree);
  for (TokenId u : nodes) {
    const std::string u_lemma = to_lower(tree.token(u).lemma);
    for (TokenId v : nodes) {
      if (u == v) continue;
      const std::string v_lemma = to_lower(tree.token(v).lemma);
      const std::vector<DepEdge> path = shortest_path(tree, u, v);
      if (stats) ++stats->paths;
      const DependencyPattern *best = nullptr;
      double best_ratio = 0.0;
      for (const DependencyPattern &p : lib.patterns) {
        if (stats) ++stats->ratio_evaluations;
        double r = match_ratio(p, path, u_lemma, v_lemma);
        if (r + kRatioSlack < min_threshold) continue;
        if (!best || r > best_ratio + kRatioSlack ||
            (r + kRatioSlack >= best_ratio && p.id() < best->id())) {
          best = &p;
          best_ratio = r;
        }
      }
      if (best) out.push_back({u, v, best->id(), best_ratio});
    }
  }
  return out;
}

}  // namespace causal
