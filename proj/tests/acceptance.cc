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

// Acceptance checks. Each criterion prints one PASS/FAIL/SKIP line. With no
// argument every criterion runs; otherwise only the named ones.
//
// Exit status: 0 when every selected criterion passes, 1 on any failure, 77
// when everything selected was skipped.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "kanon/baseline.h"
#include "kanon/budget.h"
#include "kanon/config.h"
#include "kanon/engine.h"
#include "kanon/harness.h"
#include "kanon/metrics.h"
#include "kanon/strategy.h"
#include "oracles.h"

namespace kanon {
namespace {

namespace fs = std::filesystem;

// Tolerances.
constexpr double kOneQidDmGap = 0.05;
constexpr double kStrictDmShare = 0.80;
constexpr double kMinRilmAtK5 = 0.95;
constexpr double kCutoffStepTolerance = 0.0001;  // 0.01 percentage points
constexpr double kMaxRateAtLargeCutoff = 0.0005;  // 0.05 %
constexpr double kMinSpeedupAt8 = 2.0;
constexpr double kSpeedupNoise = 0.10;
constexpr unsigned kSpeedupCores = 8;
constexpr int kOracleCases = 600;
constexpr int kBudgetSequences = 2000;

enum class State { kPass, kFail, kSkip };

struct Verdict {
  State state = State::kPass;
  std::string detail;
};

Verdict pass(std::string d) { return {State::kPass, std::move(d)}; }
Verdict fail(std::string d) { return {State::kFail, std::move(d)}; }
Verdict skip(std::string d) { return {State::kSkip, std::move(d)}; }

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

class Inputs {
 public:
  const RunConfig& adult_config() {
    if (!adult_cfg_) {
      RunConfig c = load_run_config(fs::path(KANON_SOURCE_DIR) / "configs" / "adult.cfg");
      if (const char* env = std::getenv("KANON_ADULT_CSV"); env && *env) {
        c.dataset = env;
      } else {
        c.dataset = KANON_ADULT_CSV;
      }
      adult_cfg_ = std::move(c);
    }
    return *adult_cfg_;
  }

  bool has_adult() { return fs::exists(adult_config().dataset); }

  const Dataset& adult() {
    if (!adult_) adult_ = load_dataset(adult_config().dataset, adult_config().schema());
    return *adult_;
  }

  const RunConfig& fixture_config() {
    if (!fixture_cfg_) {
      fixture_cfg_ = load_run_config(fs::path(KANON_SOURCE_DIR) / "configs" / "fixture.cfg");
    }
    return *fixture_cfg_;
  }

  const Dataset& fixture() {
    if (!fixture_) fixture_ = load_dataset(fixture_config().dataset, fixture_config().schema());
    return *fixture_;
  }

 private:
  std::optional<RunConfig> adult_cfg_;
  std::optional<Dataset> adult_;
  std::optional<RunConfig> fixture_cfg_;
  std::optional<Dataset> fixture_;
};

CoreRun core(Inputs& in, const std::vector<std::string>& qids, int k,
             std::optional<EngineConfig> engine = std::nullopt) {
  const RunConfig& c = in.adult_config();
  return run_core(in.adult(), qids, {}, c.percentiles, k, engine.value_or(c.engine));
}

// Class sizes >= k, every record in exactly one class or suppressed.
std::optional<std::string> k_anonymity_problem(const AnonymizedOutput& out, int k) {
  std::size_t counted = 0;
  for (const auto& c : out.classes) {
    if (c.size < static_cast<std::size_t>(k)) {
      return "class of size " + std::to_string(c.size) + " < k=" + std::to_string(k);
    }
    counted += c.size;
  }
  std::vector<std::size_t> per_class(out.classes.size(), 0);
  std::size_t suppressed = 0;
  for (auto c : out.class_of) {
    if (c < 0) {
      ++suppressed;
    } else {
      ++per_class[static_cast<std::size_t>(c)];
    }
  }
  for (std::size_t i = 0; i < per_class.size(); ++i) {
    if (per_class[i] != out.classes[i].size) return "class membership does not match size";
  }
  if (out.class_of.size() != out.n_records || counted + suppressed != out.n_records ||
      suppressed != out.suppressed.size()) {
    return "records unaccounted for";
  }
  return std::nullopt;
}

// Grid shared by the DM and RILM comparisons.
struct GridCell {
  std::string set;
  std::size_t dims = 0;
  int k = 0;
  MetricsReport core;
  MetricsReport baseline;
};

std::vector<GridCell> comparison_grid(Inputs& in) {
  std::vector<GridCell> cells;
  for (int dims = 1; dims <= 4; ++dims) {
    for (const auto& set : numeric_qid_sets(dims)) {
      for (int k : {5, 25, 100}) {
        cells.push_back({join_names(set), set.size(), k, core(in, set, k).metrics,
                         run_baseline(in.adult(), set, k)});
      }
    }
  }
  return cells;
}

Verdict k_anonymity(Inputs& in) {
  std::ostringstream detail;
  for (int k : {5, 25, 100}) {
    const RunConfig& fc = in.fixture_config();
    const auto f = run_core(in.fixture(), fc.qids, {}, fc.percentiles, k, fc.engine);
    if (auto p = k_anonymity_problem(f.result.output, k)) return fail("fixture: " + *p);
  }
  detail << "fixture ok";
  if (!in.has_adult()) return skip("ADULT not found at " + in.adult_config().dataset.string());
  for (int k : {5, 25, 100}) {
    const auto r = core(in, standard_qid_set(6), k);
    if (auto p = k_anonymity_problem(r.result.output, k)) return fail("ADULT: " + *p);
    detail << "; ADULT k=" << k << " min class " << r.metrics.min_class_size << ", suppressed "
           << r.metrics.suppressed;
  }
  return pass(detail.str());
}

Verdict dm_dominance(Inputs& in) {
  if (!in.has_adult()) return skip("ADULT not found");
  const auto grid = comparison_grid(in);
  std::size_t cells = 0, strict = 0;
  std::vector<std::string> problems;
  for (const auto& c : grid) {
    const double ratio = static_cast<double>(c.core.dm) / static_cast<double>(c.baseline.dm);
    if (c.dims == 1) {
      if (std::abs(ratio - 1.0) > kOneQidDmGap) {
        problems.push_back(c.set + " k=" + std::to_string(c.k) + " 1-QID gap " +
                           fmt(100 * std::abs(ratio - 1.0)) + "%");
      }
      continue;
    }
    ++cells;
    if (c.core.dm < c.baseline.dm) ++strict;
    if (c.core.dm > c.baseline.dm) {
      problems.push_back(c.set + " k=" + std::to_string(c.k) + " ratio " + fmt(ratio));
    }
  }
  const double share = static_cast<double>(strict) / static_cast<double>(cells);
  std::ostringstream d;
  d << strict << "/" << cells << " cells strictly below baseline";
  if (share < kStrictDmShare) problems.push_back("strict share " + fmt(share));
  if (!problems.empty()) {
    d << "; violations:";
    for (const auto& p : problems) d << " [" << p << "]";
    return fail(d.str());
  }
  return pass(d.str());
}

Verdict rilm_dominance(Inputs& in) {
  if (!in.has_adult()) return skip("ADULT not found");
  const auto grid = comparison_grid(in);
  std::size_t cells = 0, ok = 0;
  std::vector<std::string> problems;
  for (const auto& c : grid) {
    if (c.dims < 2) continue;
    ++cells;
    if (c.core.rilm >= c.baseline.rilm) {
      ++ok;
    } else {
      problems.push_back(c.set + " k=" + std::to_string(c.k) + " " + fmt(c.core.rilm) + " < " +
                         fmt(c.baseline.rilm));
    }
  }
  double previous = 2.0;
  double at5 = 0;
  std::ostringstream trend;
  for (int k : {5, 10, 25, 50, 100, 250, 500, 1000}) {
    const double r = core(in, numeric_qids(), k).metrics.rilm;
    if (k == 5) at5 = r;
    trend << " " << k << ":" << fmt(r);
    if (r > previous) problems.push_back("RILM rises at k=" + std::to_string(k));
    previous = r;
  }
  if (at5 < kMinRilmAtK5) problems.push_back("RILM(k=5)=" + fmt(at5));
  std::ostringstream d;
  d << ok << "/" << cells << " cells at or above baseline; 4-QID RILM by k" << trend.str();
  if (!problems.empty()) {
    d << "; violations:";
    for (const auto& p : problems) d << " [" << p << "]";
    return fail(d.str());
  }
  return pass(d.str());
}

Verdict qid_dimensionality(Inputs& in) {
  if (!in.has_adult()) return skip("ADULT not found");
  std::vector<MetricsReport> m;
  for (int dims : {4, 6, 8}) m.push_back(core(in, standard_qid_set(dims), 5).metrics);
  std::ostringstream d;
  d << "DM " << m[0].dm << " / " << m[1].dm << " / " << m[2].dm << ", RILM " << fmt(m[0].rilm)
    << " / " << fmt(m[1].rilm) << " / " << fmt(m[2].rilm) << " (4/6/8 QIDs)";
  const bool dm_ok = m[0].dm < m[1].dm && m[1].dm < m[2].dm;
  const bool rilm_ok = m[0].rilm >= m[1].rilm && m[1].rilm >= m[2].rilm;
  if (!dm_ok || !rilm_ok) {
    return fail(d.str() + (dm_ok ? "" : "; DM not increasing") +
                (rilm_ok ? "" : "; RILM not decreasing"));
  }
  return pass(d.str());
}

Verdict suppression_ceiling(Inputs& in) {
  if (!in.has_adult()) return skip("ADULT not found");
  RunConfig c = in.adult_config();
  c.engine.p_min = 0.99;
  c.engine.multiplier = 1.0;
  std::size_t runs = 0;
  for (auto suite : bench_suites()) {
    for (const auto& row : run_bench(suite, in.adult(), {}, c)) {
      ++runs;
      const auto& m = row.metrics;
      const auto cap = static_cast<std::size_t>(std::floor(0.01 * static_cast<double>(m.n_records)));
      std::string where = std::string(suite);
      for (const auto& [key, value] : row.keys) where += " " + key + "=" + value;
      if (m.suppressed > cap + m.forced_suppressed) {
        return fail(where + ": suppressed " + std::to_string(m.suppressed) + " > " +
                    std::to_string(cap) + " + forced " + std::to_string(m.forced_suppressed));
      }
      if (m.budget_warning != (m.forced_suppressed > 0)) {
        return fail(where + ": forced overage not flagged");
      }
    }
  }
  return pass(std::to_string(runs) + " benchmark runs within floor(0.01 N) + forced");
}

Verdict suppression_vs_cutoff(Inputs& in) {
  if (!in.has_adult()) return skip("ADULT not found");
  std::vector<std::string> problems;
  std::ostringstream d;
  double previous = -1;
  for (std::size_t cutoff : {10, 50, 100, 500, 1000, 5000}) {
    EngineConfig e = in.adult_config().engine;
    e.recursive_partition_size_cutoff = cutoff;
    const double rate = core(in, standard_qid_set(6), 5, e).metrics.suppression_rate;
    d << " " << cutoff << ":" << fmt(100 * rate) << "%";
    if (previous >= 0 && rate > previous + kCutoffStepTolerance) {
      problems.push_back("rate rises at cutoff " + std::to_string(cutoff));
    }
    if (cutoff >= 1000 && rate > kMaxRateAtLargeCutoff) {
      problems.push_back("rate " + fmt(100 * rate) + "% at cutoff " + std::to_string(cutoff));
    }
    previous = rate;
  }
  if (!problems.empty()) {
    d << "; violations:";
    for (const auto& p : problems) d << " [" << p << "]";
    return fail("suppression rate by cutoff" + d.str());
  }
  return pass("suppression rate by cutoff" + d.str());
}

Verdict parallel_determinism(Inputs& in) {
  if (!in.has_adult()) return skip("ADULT not found");
  const RunConfig& c = in.adult_config();
  const Dataset ds = with_qids(in.adult(), standard_qid_set(6));
  const QidSpace qids = QidSpace::build(ds, {}, c.percentiles);
  const KAnonymityStrategy strategy(ds, qids, 5, c.engine.numeric);
  std::optional<std::pair<std::string, std::string>> reference;
  for (int workers : {1, 2, 4, 8}) {
    EngineConfig e = c.engine;
    e.worker_count = workers;
    const auto r = anonymize(ds, qids, strategy, e);
    std::ostringstream csv;
    write_anonymized_csv(csv, ds, qids, r.output, false);
    auto j = metrics_json(summarize(r.output, qids, 0));
    j["config"] = c.effective_json();
    std::pair<std::string, std::string> bytes{csv.str(), j.dump(2)};
    if (!reference) {
      reference = std::move(bytes);
    } else if (bytes != *reference) {
      return fail("output differs at " + std::to_string(workers) + " workers");
    }
  }
  return pass("anonymized CSV (" + std::to_string(reference->first.size()) +
              " bytes) and metrics JSON identical for 1/2/4/8 workers");
}

Verdict parallel_speedup(Inputs& in) {
  const unsigned cores = std::thread::hardware_concurrency();
  if (cores < kSpeedupCores) {
    return skip("host has " + std::to_string(cores) + " hardware threads, needs " +
                std::to_string(kSpeedupCores));
  }
  if (!in.has_adult()) return skip("ADULT not found");
  const Dataset big = replicate(in.adult(), 8);
  EngineConfig e = in.adult_config().engine;
  e.breakout.enabled = false;
  std::vector<double> speedup;
  double base = 0;
  std::ostringstream d;
  for (int workers : {1, 2, 4, 8}) {
    e.worker_count = workers;
    double best = 1e300;
    for (int rep = 0; rep < 3; ++rep) {
      const auto t0 = std::chrono::steady_clock::now();
      run_core(big, standard_qid_set(6), {}, in.adult_config().percentiles, 5, e);
      best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    if (workers == 1) base = best;
    speedup.push_back(base / best);
    d << " " << workers << ":" << fmt(base / best) << "x";
  }
  std::vector<std::string> problems;
  if (speedup.back() < kMinSpeedupAt8) problems.push_back("8-worker speedup below 2x");
  for (std::size_t i = 1; i < speedup.size(); ++i) {
    if (speedup[i] < speedup[i - 1] * (1 - kSpeedupNoise)) problems.push_back("speedup drops");
  }
  if (!problems.empty()) return fail("speedup" + d.str() + "; " + problems.front());
  return pass("speedup" + d.str());
}

Verdict baseline_oracle(Inputs&) {
  std::mt19937 rng(20260101);
  for (int trial = 0; trial < kOracleCases; ++trial) {
    const std::size_t dims = 1 + rng() % 3;
    const std::size_t n = 1 + rng() % 50;
    const int k = std::vector<int>{2, 3, 5}[rng() % 3];
    const int spread = 1 + static_cast<int>(rng() % 40);
    oracle::Table rows(n, std::vector<double>(dims));
    std::ostringstream text;
    Schema schema;
    for (std::size_t q = 0; q < dims; ++q) {
      const std::string name = "q" + std::to_string(q);
      text << (q ? "," : "") << name;
      schema.columns.push_back({name, ColumnKind::kNumeric, true});
    }
    text << "\n";
    for (auto& r : rows) {
      for (std::size_t q = 0; q < dims; ++q) {
        r[q] = static_cast<double>(rng() % spread);
        text << (q ? "," : "") << format_number(r[q]);
      }
      text << "\n";
    }
    std::istringstream is(text.str());
    const Dataset d = read_dataset(is, schema);
    const auto got = original_mondrian(d, QidSpace::build(d), k);
    if (oracle::Classes(got.begin(), got.end()) != oracle::mondrian_classes(rows, k)) {
      return fail("case " + std::to_string(trial) + " differs from the reference recursion");
    }
  }
  return pass(std::to_string(kOracleCases) + " randomized cases match the reference recursion");
}

Verdict budget_state_machine(Inputs&) {
  std::mt19937 rng(4242);
  for (int trial = 0; trial < kBudgetSequences; ++trial) {
    SuppressionBudget b(rng() % 100);
    oracle::WindowInterpreter ref;
    const int ops = 1 + static_cast<int>(rng() % 80);
    for (int i = 0; i < ops; ++i) {
      const auto op = rng() % 4;
      if (op == 0) {
        b.checkpoint();
        ref.checkpoint();
      } else if (op == 1) {
        const std::size_t c = rng() % 20;
        b.charge(c);
        ref.charge(c);
      } else if (ref.open() && op == 2) {
        b.rollback();
        ref.rollback();
      } else if (ref.open()) {
        b.commit();
        ref.commit();
      }
    }
    if (b.charged() != ref.charged()) {
      return fail("sequence " + std::to_string(trial) + ": charged " +
                  std::to_string(b.charged()) + " vs " + std::to_string(ref.charged()));
    }
  }
  return pass(std::to_string(kBudgetSequences) + " random sequences match the interpreter");
}

std::vector<std::vector<std::string>> parse_csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) rows.push_back(split_csv_line(line));
  return rows;
}

Verdict funnel_statistics(Inputs& in) {
  if (!in.has_adult()) return skip("ADULT not found");
  EngineConfig e = in.adult_config().engine;
  e.trace_funnel = true;
  const auto r = core(in, standard_qid_set(6), 5, e);
  std::ostringstream totals_csv, trace_csv;
  write_funnel_csv(totals_csv, r.result.output.funnel);
  write_funnel_trace_csv(trace_csv, r.result.output.funnel);

  // stage,kind,count
  std::map<std::string, std::map<std::string, double>> totals;
  const auto totals_rows = parse_csv_rows(totals_csv.str());
  for (std::size_t i = 1; i < totals_rows.size(); ++i) {
    totals[totals_rows[i][0]][totals_rows[i][1]] = std::stod(totals_rows[i][2]);
  }
  // decision, then (categorical, numeric) per stage in funnel order.
  const auto trace = parse_csv_rows(trace_csv.str());
  std::size_t bad = 0;
  for (std::size_t i = 1; i < trace.size(); ++i) {
    auto v = [&](int stage, int kind) { return std::stoull(trace[i][1 + 2 * stage + kind]); };
    for (int kind = 0; kind < 2; ++kind) {
      if (v(1, kind) > v(0, kind) || v(3, kind) > v(2, kind) || v(4, kind) > v(3, kind)) ++bad;
    }
    if (v(4, 0) + v(4, 1) > 1) ++bad;
  }
  const double num_choices = totals["choices"]["numeric"];
  const double cat_choices = totals["choices"]["categorical"];
  const double num_rate = num_choices > 0 ? totals["accepted"]["numeric"] / num_choices : 0;
  const double cat_rate = cat_choices > 0 ? totals["accepted"]["categorical"] / cat_choices : 0;
  std::ostringstream d;
  d << trace.size() - 1 << " decisions; choices numeric " << num_choices << " vs categorical "
    << cat_choices << "; acceptance numeric " << fmt(num_rate) << " vs categorical "
    << fmt(cat_rate);
  std::vector<std::string> problems;
  if (bad) problems.push_back(std::to_string(bad) + " non-monotone decisions");
  if (!(num_choices > cat_choices)) problems.push_back("numeric choices do not outnumber categorical");
  if (!(cat_rate < num_rate)) problems.push_back("categorical acceptance not below numeric");
  if (!problems.empty()) {
    d << "; violations:";
    for (const auto& p : problems) d << " [" << p << "]";
    return fail(d.str());
  }
  return pass(d.str());
}

Verdict scale_run(Inputs& in) {
  if (!in.has_adult()) return skip("ADULT not found");
  std::uint64_t previous = 0;
  std::ostringstream d;
  for (std::size_t factor : {1, 2, 4}) {
    const Dataset ds = factor == 1 ? in.adult() : replicate(in.adult(), factor);
    const RunConfig& c = in.adult_config();
    const auto r = run_core(ds, standard_qid_set(6), {}, c.percentiles, 5, c.engine);
    if (auto p = k_anonymity_problem(r.result.output, 5)) {
      return fail("x" + std::to_string(factor) + ": " + *p);
    }
    d << " x" << factor << ": N=" << r.metrics.n_records << " DM=" << r.metrics.dm << " ("
      << fmt(r.metrics.runtime_seconds) << "s)";
    if (r.metrics.dm < previous) return fail("DM decreases with scale;" + d.str());
    previous = r.metrics.dm;
  }
  return pass("completed" + d.str());
}

struct Criterion {
  std::string name;
  std::function<Verdict(Inputs&)> check;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {"k-anonymity", k_anonymity},
      {"dm-dominance", dm_dominance},
      {"rilm-dominance", rilm_dominance},
      {"qid-dimensionality", qid_dimensionality},
      {"suppression-ceiling", suppression_ceiling},
      {"suppression-vs-cutoff", suppression_vs_cutoff},
      {"parallel-determinism", parallel_determinism},
      {"parallel-speedup", parallel_speedup},
      {"baseline-oracle", baseline_oracle},
      {"budget-state-machine", budget_state_machine},
      {"funnel-statistics", funnel_statistics},
      {"scale-run", scale_run},
  };
  return all;
}

}  // namespace
}  // namespace kanon

int main(int argc, char** argv) {
  using namespace kanon;
  std::vector<const Criterion*> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string want = argv[i];
    if (want == "--list") {
      for (const auto& c : criteria()) std::cout << c.name << "\n";
      return 0;
    }
    auto it = std::find_if(criteria().begin(), criteria().end(),
                           [&](const Criterion& c) { return c.name == want; });
    if (it == criteria().end()) {
      std::cerr << "unknown criterion '" << want << "'\n";
      return 2;
    }
    selected.push_back(&*it);
  }
  if (selected.empty()) {
    for (const auto& c : criteria()) selected.push_back(&c);
  }
  Inputs inputs;
  int passed = 0, failed = 0, skipped = 0;
  for (const Criterion* c : selected) {
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      v = c->check(inputs);
    } catch (const std::exception& e) {
      v = fail(std::string("error: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const char* tag = v.state == State::kPass ? "PASS" : v.state == State::kFail ? "FAIL" : "SKIP";
    std::cout << tag << "  " << c->name << "  " << v.detail << "  [" << fmt(secs) << "s]"
              << std::endl;
    (v.state == State::kPass ? passed : v.state == State::kFail ? failed : skipped)++;
  }
  if (failed) return 1;
  if (skipped && !passed) return 77;
  return 0;
}
