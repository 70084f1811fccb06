#include <benchmark/benchmark.h>

#include "mirkit/losses.hpp"
#include "mirkit/sampling.hpp"

#include "bench_util.hpp"

using namespace mirkit;
using namespace mirkit::bench;

static void BM_InfoNce(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const EmbeddingMatrix v = unit_embeddings(n, 256, 1);
  const EmbeddingMatrix t = unit_embeddings(n, 256, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(info_nce(v, t, 0.05).value);
  }
}
BENCHMARK(BM_InfoNce)->Arg(64)->Arg(256);

static void BM_EgoNce(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const std::vector<ClipMeta> metas = batch_metas(n, 3);
  const std::vector<ClipMeta> pool = batch_metas(4 * n, 4);
  const TrainingBatch base = make_training_batch(
      unit_embeddings(n, 256, 5), unit_embeddings(n, 256, 6), metas);
  const TrainingBatch batch = augment_batch(
      base, sample_scene_negatives(metas, pool, 60.0, 7), pool,
      unit_embeddings(4 * n, 256, 8), unit_embeddings(4 * n, 256, 9));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ego_nce(batch, 0.05).value);
  }
}
BENCHMARK(BM_EgoNce)->Arg(64)->Arg(256);

static void BM_MiMm(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const EmbeddingMatrix v = unit_embeddings(n, 256, 10);
  const EmbeddingMatrix t = unit_embeddings(n, 256, 11);
  const std::vector<ClipMeta> metas = batch_metas(n, 12);
  const CorrelationMatrix corr = compute_correlation(metas, metas);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mi_mm(v, t, corr, 0.2, 0.1).value);
  }
}
BENCHMARK(BM_MiMm)->Arg(64)->Arg(128);

static void BM_AdaptiveMiMm(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const EmbeddingMatrix v = unit_embeddings(n, 256, 13);
  const EmbeddingMatrix t = unit_embeddings(n, 256, 14);
  const std::vector<ClipMeta> metas = batch_metas(n, 15);
  const CorrelationMatrix corr = compute_correlation(metas, metas);
  for (auto _ : state) {
    benchmark::DoNotOptimize(adaptive_mi_mm(v, t, corr, 0.4, 0.1).value);
  }
}
BENCHMARK(BM_AdaptiveMiMm)->Arg(64)->Arg(128);
