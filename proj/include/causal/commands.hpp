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

// The command implementations behind the `causal` tool. Each returns a
// process exit status; data goes to files or `out`, diagnostics to `err`.

#pragma once

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "causal/deptree.hpp"
#include "causal/eval.hpp"
#include "causal/extender.hpp"
#include "causal/jsonl.hpp"
#include "causal/matcher.hpp"
#include "causal/patterns.hpp"

namespace causal {

struct RunConfig {
  double min_threshold = 1.0;
  double min_sim = 100.0;
  std::string patterns_path;
  std::string stopwords_path;  // empty: built-in list
  std::string input_path;
  std::string output_path;  // empty: standard output
  unsigned jobs = 0;        // 0: hardware concurrency

  void validate() const {
    check_min_threshold(min_threshold);
    check_min_sim(min_sim);
  }
};

namespace commands_detail {

inline std::ifstream open_input(const std::string &path, const std::string &what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + what + " '" + path + "'");
  return in;
}

inline std::vector<DepTree> read_trees(const std::string &path) {
  std::ifstream in = open_input(path, "CoNLL-U input");
  try {
    return parse_conllu(in);
  } catch (const Error &e) {
    throw Error(path + ": " + e.what());
  }
}

inline std::string fixed(double v, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

}  // namespace commands_detail

inline int cmd_compile(const std::string &templates_path, const std::string &seeds_path,
                       const std::string &dummies_path, const std::string &out_path,
                       std::ostream &out, std::ostream &err, const std::string &version = "1") {
  using namespace commands_detail;
  try {
    std::ifstream tin = open_input(templates_path, "templates file");
    std::vector<std::string> templates = read_templates(tin);
    std::ifstream sin = open_input(seeds_path, "seed pairs file");
    std::vector<SeedPair> seeds = read_seed_pairs(sin);
    std::vector<DepTree> dummies = read_trees(dummies_path);

    CompileResult result = compile_from_templates(templates, seeds, dummies, version);
    save_library(result.library, out_path);

    for (const std::string &s : result.skipped) err << "skipped " << s << '\n';
    for (size_t i = 0; i < result.summaries.size(); ++i) {
      const TemplateSummary &s = result.summaries[i];
      out << 't' << i << "\tinstances=" << s.instances << " new=" << s.new_patterns
          << " duplicates=" << s.duplicates << " skipped=" << s.skipped << '\t'
          << s.template_text << '\n';
    }
    out << "patterns=" << result.library.patterns.size() << " duplicates=" << result.duplicates
        << " skipped=" << result.skipped.size() << " -> " << out_path << '\n';
    return 0;
  } catch (const Error &e) {
    err << "compile: " << e.what() << '\n';
    return 1;
  }
}

// Runs extraction over trees with a bounded worker pool; results keep input
// order.
inline std::vector<std::vector<Extraction>> extract_all(const std::vector<DepTree> &trees,
                                                        const PatternLibrary &lib,
                                                        double min_threshold,
                                                        const StopwordSet &stopwords,
                                                        unsigned jobs = 0) {
  check_min_threshold(min_threshold);
  std::vector<std::vector<Extraction>> results(trees.size());
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<size_t>(jobs, std::max<size_t>(trees.size(), 1)));
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (size_t i = next++; i < trees.size(); i = next++) {
      results[i] = extract_causal_phrases(trees[i], lib, min_threshold, stopwords);
    }
  };
  if (jobs <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(work);
  }
  return results;
}

inline int cmd_extract(const RunConfig &cfg, std::ostream &out, std::ostream &err) {
  using namespace commands_detail;
  try {
    cfg.validate();
    PatternLibrary lib = load_library(cfg.patterns_path);
    StopwordSet stopwords =
        cfg.stopwords_path.empty() ? default_stopwords() : load_stopwords(cfg.stopwords_path);
    std::vector<DepTree> trees = read_trees(cfg.input_path);
    auto results = extract_all(trees, lib, cfg.min_threshold, stopwords, cfg.jobs);

    std::ofstream file;
    std::ostream *data = &out;
    if (!cfg.output_path.empty()) {
      file.open(cfg.output_path, std::ios::binary);
      if (!file) throw Error("cannot write '" + cfg.output_path + "'");
      data = &file;
    }
    size_t with_pairs = 0, pairs = 0;
    for (const auto &rows : results) {
      if (!rows.empty()) ++with_pairs;
      pairs += rows.size();
      for (const Extraction &e : rows) write_extraction(*data, e);
    }
    std::ostream &summary = cfg.output_path.empty() ? err : out;
    summary << "sentences=" << trees.size() << " with_extractions=" << with_pairs
            << " pairs=" << pairs << '\n';
    return 0;
  } catch (const Error &e) {
    err << "extract: " << e.what() << '\n';
    return 1;
  }
}

inline int cmd_eval(const std::string &pred_path, const std::string &gold_path, double min_sim,
                    const std::string &report_path, std::ostream &out, std::ostream &err) {
  using namespace commands_detail;
  try {
    check_min_sim(min_sim);
    std::ifstream pin = open_input(pred_path, "predictions file");
    std::vector<Extraction> pred = read_extractions(pin);
    std::ifstream gin = open_input(gold_path, "gold file");
    std::vector<GoldTriplet> gold = read_gold(gin);

    EvalReport r = report(pred, gold, min_sim);
    for (const std::string &w : r.warnings) err << "warning: " << w << '\n';
    print_report(out, r);
    if (!report_path.empty()) {
      std::ofstream rout(report_path, std::ios::binary);
      if (!rout) throw Error("cannot write '" + report_path + "'");
      rout << report_to_json(r).dump(2) << '\n';
    }
    return 0;
  } catch (const Error &e) {
    err << "eval: " << e.what() << '\n';
    return 1;
  }
}

// Prints the tree edges of one sentence, then every candidate pair with its
// path and the patterns that match it at all.
inline int cmd_inspect(const std::string &sentence_id, const std::string &input_path,
                       const std::string &patterns_path, double min_threshold, std::ostream &out,
                       std::ostream &err) {
  using namespace commands_detail;
  try {
    check_min_threshold(min_threshold);
    PatternLibrary lib = load_library(patterns_path);
    std::vector<DepTree> trees = read_trees(input_path);
    auto it = std::find_if(trees.begin(), trees.end(),
                           [&](const DepTree &t) { return t.sentence_id() == sentence_id; });
    if (it == trees.end()) throw Error("unknown sentence id '" + sentence_id + "'");
    const DepTree &tree = *it;

    out << "sentence " << tree.sentence_id() << ": " << tree.text() << "\n\nedges:\n";
    for (const Token &t : tree.tokens()) {
      if (t.head == 0) continue;
      out << "  " << t.head << " -> " << t.id << "  " << make_edge(tree, t.head, t.id) << '\n';
    }
    const std::vector<TokenId> nodes = candidate_nodes(tree);
    if (nodes.size() < 2) {
      out << "\nno candidates\n";
      return 0;
    }
    out << "\ncandidates:";
    for (TokenId id : nodes) out << ' ' << id << ':' << tree.token(id).form;
    out << "\n\npairs (X=cause, Y=effect):\n";
    for (TokenId u : nodes) {
      for (TokenId v : nodes) {
        if (u == v) continue;
        const std::string ul = to_lower(tree.token(u).lemma), vl = to_lower(tree.token(v).lemma);
        const std::vector<DepEdge> path = shortest_path(tree, u, v);
        std::vector<std::pair<const DependencyPattern *, double>> hits;
        for (const DependencyPattern &p : lib.patterns) {
          double r = match_ratio(p, path, ul, vl);
          if (r > 0) hits.push_back({&p, r});
        }
        if (hits.empty()) continue;
        out << "  X=" << tree.token(u).form << " Y=" << tree.token(v).form << "  path {";
        for (size_t i = 0; i < path.size(); ++i) out << (i ? ", " : "") << path[i];
        out << "}\n";
        for (const auto &[p, r] : hits) {
          out << "    " << p->id() << ' ' << fixed(r, 3)
              << (r + kRatioSlack >= min_threshold ? " *" : "  ") << "  " << p->template_text()
              << '\n';
        }
      }
    }
    return 0;
  } catch (const Error &e) {
    err << "inspect: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace causal
