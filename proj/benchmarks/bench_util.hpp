#ifndef MIRKIT_BENCHMARKS_BENCH_UTIL_HPP_
#define MIRKIT_BENCHMARKS_BENCH_UTIL_HPP_

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "mirkit/matrix.hpp"
#include "mirkit/sampling.hpp"

namespace mirkit::bench {

inline Matrix unit_rows(std::size_t rows, std::size_t cols,
                        std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    double norm2 = 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
      m.at(r, c) = dist(gen);
      norm2 += m.at(r, c) * m.at(r, c);
    }
    const double norm = std::sqrt(norm2);
    for (std::size_t c = 0; c < cols; ++c) m.at(r, c) /= norm;
  }
  return m;
}

inline EmbeddingMatrix unit_embeddings(std::size_t rows, std::size_t cols,
                                       std::uint64_t seed) {
  return EmbeddingMatrix::validated(unit_rows(rows, cols, seed));
}

inline std::vector<ClipMeta> batch_metas(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<ClipMeta> metas(n);
  for (std::size_t i = 0; i < n; ++i) {
    metas[i].clip_id = "clip" + std::to_string(i);
    metas[i].video_id = "video" + std::to_string(gen() % 8);
    metas[i].t_start = static_cast<double>(gen() % 600);
    metas[i].t_end = metas[i].t_start + 4.0;
    metas[i].nouns = {static_cast<int>(gen() % 12)};
    metas[i].verbs = {static_cast<int>(gen() % 12)};
    metas[i].verb_class = static_cast<int>(gen() % 10);
    metas[i].noun_class = static_cast<int>(gen() % 10);
  }
  return metas;
}

}  // namespace mirkit::bench

#endif  // MIRKIT_BENCHMARKS_BENCH_UTIL_HPP_
