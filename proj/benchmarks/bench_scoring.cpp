#include <benchmark/benchmark.h>

#include "mirkit/inference.hpp"
#include "mirkit/metrics.hpp"
#include "mirkit/sampling.hpp"

#include "bench_util.hpp"

using namespace mirkit;
using namespace mirkit::bench;

static void BM_Similarity(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const EmbeddingMatrix text = unit_embeddings(n, 256, 21);
  const EmbeddingMatrix video = unit_embeddings(n, 256, 22);
  for (auto _ : state) {
    benchmark::DoNotOptimize(similarity(text, video).matrix().data.data());
  }
}
BENCHMARK(BM_Similarity)->Arg(256)->Arg(512);

static void BM_PlainScores(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const SimilarityMatrix sim =
      similarity(unit_embeddings(n, 256, 23), unit_embeddings(n, 256, 24));
  for (auto _ : state) {
    benchmark::DoNotOptimize(plain_scores(sim).matrix().data.data());
  }
}
BENCHMARK(BM_PlainScores)->Arg(256)->Arg(512);

static void BM_DualSoftmaxScores(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const SimilarityMatrix sim =
      similarity(unit_embeddings(n, 256, 25), unit_embeddings(n, 256, 26));
  for (auto _ : state) {
    benchmark::DoNotOptimize(dual_softmax_scores(sim, 500.0).matrix().data.data());
  }
}
BENCHMARK(BM_DualSoftmaxScores)->Arg(256)->Arg(512);

static void BM_Evaluate(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const std::vector<ClipMeta> metas = batch_metas(n, 27);
  const CorrelationMatrix corr = compute_correlation(metas, metas);
  const ScoreMatrix scores = plain_scores(
      similarity(unit_embeddings(n, 256, 28), unit_embeddings(n, 256, 29)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate(scores, corr).map_avg);
  }
}
BENCHMARK(BM_Evaluate)->Arg(128)->Arg(256);
