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

#include "kanon/config.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "kanon/errors.h"

namespace kanon {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  while (!s.empty()) {
    const auto comma = s.find(',');
    const auto item = trim(s.substr(0, comma));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto v = trim(value);
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
    throw ParseError("bad value '" + std::string(value) + "' for '" + std::string(key) + "'");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  const auto v = trim(value);
  if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "off" || v == "no") return false;
  throw ParseError("bad boolean '" + std::string(value) + "' for '" + std::string(key) + "'");
}

std::filesystem::path resolve(const std::filesystem::path& base, std::string_view value) {
  std::filesystem::path p{std::string(trim(value))};
  if (p.is_relative() && !base.empty()) return base / p;
  return p;
}

std::string read_file(const std::filesystem::path& path, std::string_view what) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open " + std::string(what) + " '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

std::map<std::string, std::string> parse_key_values(std::string_view text) {
  std::map<std::string, std::string> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const auto line = trim(text.substr(0, nl));
    ++line_no;
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("line " + std::to_string(line_no) + ": expected key = value");
    }
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) throw ParseError("line " + std::to_string(line_no) + ": empty key");
    out[std::string(key)] = std::string(trim(line.substr(eq + 1)));
  }
  return out;
}

std::vector<PercentilePair> parse_percentile_pairs(std::string_view text) {
  std::vector<PercentilePair> out;
  for (const auto& item : split_list(text)) {
    const auto dash = item.find('-', 1);
    if (dash == std::string::npos) throw ParseError("bad percentile pair '" + item + "'");
    out.push_back({parse_number<double>("percentiles", item.substr(0, dash)),
                   parse_number<double>("percentiles", item.substr(dash + 1))});
  }
  if (out.empty()) throw ParseError("empty percentile list");
  return out;
}

void RunConfig::set(std::string_view key, std::string_view value,
                    const std::filesystem::path& base) {
  if (key == "dataset") {
    dataset = resolve(base, value);
  } else if (key == "numeric") {
    numeric = split_list(value);
  } else if (key == "qids") {
    qids = split_list(value);
  } else if (key == "sensitive") {
    sensitive = split_list(value);
  } else if (key.starts_with("gtree.")) {
    gtrees[std::string(key.substr(6))] = resolve(base, value);
  } else if (key == "k") {
    k = parse_number<int>(key, value);
  } else if (key == "p_min") {
    engine.p_min = parse_number<double>(key, value);
  } else if (key == "multiplier") {
    engine.multiplier = parse_number<double>(key, value);
  } else if (key == "cutoff") {
    engine.recursive_partition_size_cutoff = parse_number<std::size_t>(key, value);
  } else if (key == "workers") {
    engine.worker_count = parse_number<int>(key, value);
  } else if (key == "cut_mode") {
    const auto v = trim(value);
    if (v == "median") {
      engine.numeric.mode = NumericCutMode::kMedian;
    } else if (v == "binedge") {
      engine.numeric.mode = NumericCutMode::kBinEdges;
    } else {
      throw ParseError("cut_mode must be median or binedge, got '" + std::string(v) + "'");
    }
  } else if (key == "bins") {
    engine.numeric.bins = parse_number<int>(key, value);
  } else if (key == "breakout") {
    engine.breakout.enabled = parse_bool(key, value);
  } else if (key == "breakout_threshold") {
    engine.breakout.threshold = parse_number<double>(key, value);
  } else if (key == "max_cut_attempts") {
    engine.max_cut_attempts = parse_number<std::size_t>(key, value);
  } else if (key == "percentiles") {
    percentiles = parse_percentile_pairs(value);
  } else if (key == "replicate") {
    replicate = parse_number<std::size_t>(key, value);
  } else if (key == "emit_suppressed") {
    emit_suppressed = parse_bool(key, value);
  } else if (key == "trace_funnel") {
    engine.trace_funnel = parse_bool(key, value);
  } else if (key == "out_dir") {
    out_dir = resolve(base, value);
  } else {
    throw ParseError("unknown config key '" + std::string(key) + "'");
  }
}

void RunConfig::validate() const {
  if (dataset.empty()) throw ArgumentError("no dataset configured");
  if (k < 2) throw ArgumentError("k must be at least 2");
  if (replicate < 1) throw ArgumentError("replicate must be at least 1");
  engine.validate();
  schema().validate();
  for (const auto& entry : gtrees) {
    const auto& name = entry.first;
    if (std::find(numeric.begin(), numeric.end(), name) != numeric.end()) {
      throw SchemaError("gtree given for numeric column '" + name + "'");
    }
  }
}

Schema RunConfig::schema() const {
  Schema s;
  s.k = k;
  s.sensitive_columns = sensitive;
  auto add = [&](const std::string& name) {
    if (s.find(name)) return;
    const bool is_numeric = std::find(numeric.begin(), numeric.end(), name) != numeric.end();
    const bool is_qid = std::find(qids.begin(), qids.end(), name) != qids.end();
    s.columns.push_back(
        {name, is_numeric ? ColumnKind::kNumeric : ColumnKind::kCategorical, is_qid});
  };
  for (const auto& q : qids) add(q);
  for (const auto& n : numeric) add(n);
  for (const auto& n : sensitive) add(n);
  return s;
}

nlohmann::ordered_json RunConfig::effective_json() const {
  nlohmann::ordered_json j;
  j["dataset"] = dataset.filename().string();
  j["qids"] = qids;
  j["numeric"] = numeric;
  j["sensitive"] = sensitive;
  nlohmann::ordered_json g = nlohmann::ordered_json::object();
  for (const auto& [name, path] : gtrees) g[name] = path.filename().string();
  j["gtrees"] = g;
  j["k"] = k;
  j["p_min"] = engine.p_min;
  j["multiplier"] = engine.multiplier;
  j["cutoff"] = engine.recursive_partition_size_cutoff;
  j["cut_mode"] = engine.numeric.mode == NumericCutMode::kMedian ? "median" : "binedge";
  j["bins"] = engine.numeric.bins;
  j["breakout"] = engine.breakout.enabled;
  j["breakout_threshold"] = engine.breakout.threshold;
  j["max_cut_attempts"] = engine.max_cut_attempts;
  nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
  for (const auto& p : percentiles) pairs.push_back({p.low, p.high});
  j["percentiles"] = pairs;
  j["replicate"] = replicate;
  j["emit_suppressed"] = emit_suppressed;
  return j;
}

void apply_key_values(RunConfig& config, const std::map<std::string, std::string>& kv,
                      const std::filesystem::path& base) {
  for (const auto& [key, value] : kv) {
    if (key != "schema") config.set(key, value, base);
  }
}

RunConfig load_run_config(const std::filesystem::path& path) {
  const auto kv = parse_key_values(read_file(path, "config"));
  const auto base = path.parent_path();
  RunConfig config;
  if (auto it = kv.find("schema"); it != kv.end()) {
    const auto schema_path = resolve(base, it->second);
    apply_key_values(config, parse_key_values(read_file(schema_path, "schema")),
                     schema_path.parent_path());
  }
  apply_key_values(config, kv, base);
  return config;
}

GTreeMap load_gtrees(const RunConfig& config) {
  GTreeMap gtrees;
  for (const auto& [name, path] : config.gtrees) {
    if (!std::filesystem::exists(path)) {
      throw FileError("gtree file for '" + name + "' not found: " + path.string());
    }
    gtrees[name] = std::make_shared<const GTree>(load_gtree(path));
  }
  return gtrees;
}

RunInputs load_inputs(const RunConfig& config) {
  config.validate();
  const GTreeMap gtrees = load_gtrees(config);
  Dataset ds = load_dataset(config.dataset, config.schema());
  if (config.replicate > 1) ds = replicate(ds, config.replicate);
  QidSpace qids = QidSpace::build(ds, gtrees, config.percentiles);
  return {std::move(ds), std::move(qids)};
}

}  // namespace kanon
