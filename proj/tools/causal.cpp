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

// causal: compile pattern libraries, extract cause-effect phrases from
// CoNLL-U, evaluate extractions, and inspect single sentences.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "causal/commands.hpp"

int main(int argc, char **argv) {
  CLI::App app{"Dependency-pattern cause-effect phrase extraction"};
  app.require_subcommand(1);

  // compile
  std::string templates_path, seeds_path, dummies_path, library_out, library_version = "1";
  auto *compile = app.add_subcommand("compile", "Compile a pattern library from parsed templates");
  compile->add_option("--templates", templates_path, "Templates file, one per line")->required();
  compile->add_option("--seeds", seeds_path, "Seed pairs, cause<TAB>effect per line")->required();
  compile->add_option("--dummies", dummies_path, "CoNLL-U parses of the instantiated templates")
      ->required();
  compile->add_option("--out", library_out, "Pattern library JSON to write")->required();
  compile->add_option("--library-version", library_version, "Version tag stored in the library");

  // extract
  causal::RunConfig cfg;
  auto *extract = app.add_subcommand("extract", "Extract cause-effect pairs from CoNLL-U");
  extract->add_option("input", cfg.input_path, "CoNLL-U input")->required();
  extract->add_option("--patterns", cfg.patterns_path, "Pattern library JSON")
      ->required()
      ->envname("CAUSAL_PATTERNS");
  extract
      ->add_option("--min-threshold", cfg.min_threshold,
                   "Minimum matched fraction of pattern edges")
      ->check(CLI::Range(causal::kMinThresholdLow, causal::kMinThresholdHigh))
      ->envname("CAUSAL_MIN_THRESHOLD")
      ->capture_default_str();
  extract->add_option("--stopwords", cfg.stopwords_path, "Stopword file (default: built-in list)")
      ->envname("CAUSAL_STOPWORDS");
  extract->add_option("--out", cfg.output_path, "JSONL output (default: standard output)");
  extract->add_option("--jobs", cfg.jobs, "Worker threads (0: all cores)")->capture_default_str();

  // eval
  std::string pred_path, gold_path, report_path;
  double min_sim = 100.0;
  auto *eval = app.add_subcommand("eval", "Score predictions against gold triplets");
  eval->add_option("--pred", pred_path, "Predicted extractions, JSONL")->required();
  eval->add_option("--gold", gold_path, "Gold triplets, JSONL")->required();
  eval->add_option("--min-sim", min_sim, "Edit similarity threshold in percent")
      ->check(CLI::Range(0.0, 100.0))
      ->envname("CAUSAL_MIN_SIM")
      ->capture_default_str();
  eval->add_option("--out", report_path, "JSON report to write");

  // inspect
  std::string sentence_id, inspect_input, inspect_patterns;
  double inspect_threshold = 1.0;
  auto *inspect = app.add_subcommand("inspect", "Show paths and pattern ratios for one sentence");
  inspect->add_option("sentence_id", sentence_id, "Sentence id")->required();
  inspect->add_option("input", inspect_input, "CoNLL-U input")->required();
  inspect->add_option("--patterns", inspect_patterns, "Pattern library JSON")
      ->required()
      ->envname("CAUSAL_PATTERNS");
  inspect->add_option("--min-threshold", inspect_threshold, "Threshold used to mark matches")
      ->check(CLI::Range(causal::kMinThresholdLow, causal::kMinThresholdHigh))
      ->envname("CAUSAL_MIN_THRESHOLD");

  CLI11_PARSE(app, argc, argv);

  if (*compile) {
    return causal::cmd_compile(templates_path, seeds_path, dummies_path, library_out, std::cout,
                               std::cerr, library_version);
  }
  if (*extract) return causal::cmd_extract(cfg, std::cout, std::cerr);
  if (*eval)
    return causal::cmd_eval(pred_path, gold_path, min_sim, report_path, std::cout, std::cerr);
  if (*inspect) {
    return causal::cmd_inspect(sentence_id, inspect_input, inspect_patterns, inspect_threshold,
                               std::cout, std::cerr);
  }
  return 1;
}
