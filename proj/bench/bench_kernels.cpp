// Serial reference vs OpenMP kernel for the three data-parallel hot spots.

#include <benchmark/benchmark.h>

#include "support.hpp"
#include "taletorium/scene_composer.hpp"
#include "taletorium/sketch_recognizer.hpp"

namespace tt = taletorium;

namespace {

const tt::session::Resources& res() { return support::resources(); }

tt::sketch::Path probe() { return tt::sketch::normalize_strokes(support::scribble(1)); }

void BM_RecognizerSerial(benchmark::State& state) {
  const auto p = probe();
  for (auto _ : state) benchmark::DoNotOptimize(res().recognizer->score_all_serial(p));
}
void BM_RecognizerParallel(benchmark::State& state) {
  const auto p = probe();
  for (auto _ : state) benchmark::DoNotOptimize(res().recognizer->score_all(p));
}

struct MapperInput {
  tt::concepts::Vector original;
  std::vector<std::string> texts;
};

MapperInput mapper_input() {
  const std::string fragment = "the unicorn trapped in the tree";
  MapperInput in{res().vectors.embed(fragment), {}};
  for (const auto& c : res().vocab.entities) in.texts.push_back(*tt::concepts::substitute(fragment, "unicorn", c));
  return in;
}

void BM_MapperSerial(benchmark::State& state) {
  const auto in = mapper_input();
  for (auto _ : state) benchmark::DoNotOptimize(tt::concepts::score_candidates_serial(res().vectors, in.original, in.texts));
}
void BM_MapperParallel(benchmark::State& state) {
  const auto in = mapper_input();
  for (auto _ : state) benchmark::DoNotOptimize(tt::concepts::score_candidates(res().vectors, in.original, in.texts));
}

struct LayoutBatch {
  std::vector<support::RandomScene> scenes;
  std::vector<tt::layout::LayoutJob> jobs;
};

const LayoutBatch& layout_batch() {
  static const LayoutBatch batch = [] {
    LayoutBatch b;
    for (std::uint64_t s = 0; s < 256; ++s) b.scenes.push_back(support::random_scene(s, res().vocab));
    for (std::uint64_t s = 0; s < b.scenes.size(); ++s)
      b.jobs.push_back({&b.scenes[s].graph, b.scenes[s].constraints, 1.0, s});
    return b;
  }();
  return batch;
}

void BM_LayoutsSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(tt::layout::compose_layouts_serial(layout_batch().jobs));
}
void BM_LayoutsParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(tt::layout::compose_layouts(layout_batch().jobs));
}

}  // namespace

BENCHMARK(BM_RecognizerSerial);
BENCHMARK(BM_RecognizerParallel);
BENCHMARK(BM_MapperSerial);
BENCHMARK(BM_MapperParallel);
BENCHMARK(BM_LayoutsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LayoutsParallel)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
