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

// JSON-lines records for extractions and gold triplets.

#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "causal/eval.hpp"
#include "causal/extender.hpp"
#include "json.hpp"

namespace causal {

inline void write_extraction(std::ostream &out, const Extraction &e) {
  nlohmann::ordered_json j = {{"sentence_id", e.sentence_id},
                              {"cause", e.cause},
                              {"effect", e.effect},
                              {"pattern_id", e.pattern_id},
                              {"ratio", e.ratio}};
  out << j.dump() << '\n';
}

namespace jsonl_detail {

template <typename Fn>
void for_each_record(std::istream &in, const std::string &what, Fn &&fn) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (conllu_detail::trim(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception &e) {
      throw Error(what + " line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!j.is_object()) throw Error(what + " line " + std::to_string(line_no) + ": not an object");
    auto field = [&](const char *key, bool required) -> std::string {
      if (!j.contains(key)) {
        if (required) {
          throw Error(what + " line " + std::to_string(line_no) + ": missing '" + key + "'");
        }
        return {};
      }
      if (!j[key].is_string()) {
        throw Error(what + " line " + std::to_string(line_no) + ": '" + key +
                    "' must be a string");
      }
      return j[key].get<std::string>();
    };
    fn(j, field, line_no);
  }
}

}  // namespace jsonl_detail

inline std::vector<Extraction> read_extractions(std::istream &in) {
  std::vector<Extraction> out;
  jsonl_detail::for_each_record(in, "predictions", [&](const nlohmann::json &j, auto &field, int) {
    Extraction e;
    e.sentence_id = field("sentence_id", true);
    e.cause = field("cause", true);
    e.effect = field("effect", true);
    e.pattern_id = field("pattern_id", false);
    if (j.contains("ratio") && j["ratio"].is_number()) e.ratio = j["ratio"].get<double>();
    out.push_back(std::move(e));
  });
  return out;
}

inline std::vector<GoldTriplet> read_gold(std::istream &in) {
  std::vector<GoldTriplet> out;
  jsonl_detail::for_each_record(in, "gold", [&](const nlohmann::json &, auto &field, int line_no) {
    GoldTriplet g{field("sentence_id", true), field("cause", true), field("effect", true)};
    if (g.sentence_id.empty() || g.cause.empty() || g.effect.empty()) {
      throw Error("gold line " + std::to_string(line_no) + ": empty field");
    }
    out.push_back(std::move(g));
  });
  return out;
}

}  // namespace causal
