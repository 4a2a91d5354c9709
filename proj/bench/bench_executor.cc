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

// Serial reference executor vs the parallel executor on a replicated table.
// Uses $KANON_ADULT_CSV or data/adult.csv when present, else the fixture.

#include <benchmark/benchmark.h>

#include <cstdlib>
#include <filesystem>
#include <memory>

#include "kanon/config.h"
#include "kanon/engine.h"
#include "kanon/harness.h"
#include "kanon/strategy.h"

namespace kanon {
namespace {

namespace fs = std::filesystem;

struct Setup {
  RunConfig config;
  Dataset dataset;
  QidSpace qids;
};

const Setup& setup() {
  static const std::unique_ptr<Setup> s = [] {
    const fs::path root = KANON_SOURCE_DIR;
    fs::path adult = root / "data" / "adult.csv";
    if (const char* env = std::getenv("KANON_ADULT_CSV"); env && *env) adult = env;
    RunConfig c;
    std::size_t factor = 2;
    if (fs::exists(adult)) {
      c = load_run_config(root / "configs" / "adult.cfg");
      c.dataset = adult;
    } else {
      c = load_run_config(root / "configs" / "fixture.cfg");
      factor = 250;
    }
    Dataset d = with_qids(replicate(load_dataset(c.dataset, c.schema()), factor), c.qids);
    QidSpace q = QidSpace::build(d, {}, c.percentiles);
    return std::make_unique<Setup>(Setup{std::move(c), std::move(d), std::move(q)});
  }();
  return *s;
}

void run(benchmark::State& state, Executor executor) {
  const Setup& s = setup();
  const KAnonymityStrategy strategy(s.dataset, s.qids, s.config.k, s.config.engine.numeric);
  EngineConfig e = s.config.engine;
  e.worker_count = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto r = anonymize(s.dataset, s.qids, strategy, e, executor);
    benchmark::DoNotOptimize(r);
  }
  state.counters["records"] = static_cast<double>(s.dataset.size());
}

void BM_SerialReference(benchmark::State& state) { run(state, Executor::kSerialReference); }
void BM_Parallel(benchmark::State& state) { run(state, Executor::kParallel); }

BENCHMARK(BM_SerialReference)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Parallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace
}  // namespace kanon

BENCHMARK_MAIN();
