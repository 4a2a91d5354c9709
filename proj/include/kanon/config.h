// Copyright 2026 The kanon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "kanon/dataset.h"
#include "kanon/engine.h"
#include "kanon/hierarchy.h"
#include "kanon/qid_space.h"

namespace kanon {

// Parses `key = value` lines. Blank lines and lines starting with '#' are
// skipped; later keys override earlier ones. ParseError on a line without
// '=' or with an empty key.
std::map<std::string, std::string> parse_key_values(std::string_view text);

// "0-100,1-99,5-95" -> percentile pairs.
std::vector<PercentilePair> parse_percentile_pairs(std::string_view text);

struct RunConfig {
  std::filesystem::path dataset;
  std::vector<std::string> numeric;
  std::vector<std::string> qids;
  std::vector<std::string> sensitive;
  // Categorical QID -> gtree edge-list file. QIDs without one get a flat gtree.
  std::map<std::string, std::filesystem::path> gtrees;
  int k = 5;
  EngineConfig engine;
  std::vector<PercentilePair> percentiles = default_percentile_pairs();
  std::size_t replicate = 1;
  bool emit_suppressed = false;
  std::filesystem::path out_dir = "out";

  // Applies one setting by key. Keys: dataset, schema, numeric, qids,
  // sensitive, gtree.<column>, k, p_min, multiplier, cutoff, workers,
  // cut_mode (median|binedge), bins, breakout (true|false),
  // breakout_threshold, max_cut_attempts, percentiles, replicate,
  // emit_suppressed, trace_funnel, out_dir. Relative paths resolve against
  // `base`. ParseError on unknown keys or malformed values.
  void set(std::string_view key, std::string_view value,
           const std::filesystem::path& base = {});

  // ArgumentError / SchemaError on invalid values.
  void validate() const;

  Schema schema() const;

  // Effective configuration with defaults resolved. Worker count and output
  // directory are left out: neither affects the result.
  nlohmann::ordered_json effective_json() const;
};

// Reads a config file; a `schema = path` entry pulls in that file's keys
// first, so entries in the main file win.
RunConfig load_run_config(const std::filesystem::path& path);
void apply_key_values(RunConfig& config, const std::map<std::string, std::string>& kv,
                      const std::filesystem::path& base);

struct RunInputs {
  Dataset dataset;
  QidSpace qids;
};

// FileError naming the path of the first missing gtree file.
GTreeMap load_gtrees(const RunConfig& config);

// Loads gtrees, the dataset (replicated if configured) and builds the QID
// space. FileError names the offending path.
RunInputs load_inputs(const RunConfig& config);

}  // namespace kanon
