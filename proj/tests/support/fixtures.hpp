#ifndef MIRKIT_TESTS_FIXTURES_HPP_
#define MIRKIT_TESTS_FIXTURES_HPP_

#include <cmath>
#include <string>
#include <vector>

#include "mirkit/matrix.hpp"
#include "mirkit/sampling.hpp"
#include "mirkit/trainer.hpp"

#include "test_util.hpp"

namespace mirkit::testing {

inline Matrix random_matrix(TestRng& rng, std::size_t rows, std::size_t cols,
                            double lo = -1.0, double hi = 1.0) {
  Matrix m(rows, cols);
  for (double& v : m.data) v = rng.uniform(lo, hi);
  return m;
}

// Gaussian rows normalized by hand (independent of l2_normalize).
inline Matrix random_unit_rows(TestRng& rng, std::size_t rows,
                               std::size_t cols) {
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (std::size_t c = 0; c < cols; ++c) {
        m.at(r, c) = rng.gauss();
        norm2 += m.at(r, c) * m.at(r, c);
      }
    } while (norm2 < 1e-8);
    const double norm = std::sqrt(norm2);
    for (std::size_t c = 0; c < cols; ++c) m.at(r, c) /= norm;
  }
  return m;
}

inline EmbeddingMatrix random_embeddings(TestRng& rng, std::size_t rows,
                                         std::size_t cols) {
  return EmbeddingMatrix::validated(random_unit_rows(rng, rows, cols));
}

struct MetaOptions {
  std::size_t n_videos = 3;
  std::size_t tag_pool = 6;
  std::size_t max_tags = 3;
  std::size_t n_classes = 4;
  double max_time = 240.0;
};

inline std::vector<ClipMeta> random_metas(TestRng& rng, std::size_t n,
                                          const MetaOptions& opt = {}) {
  std::vector<ClipMeta> metas(n);
  for (std::size_t i = 0; i < n; ++i) {
    ClipMeta& m = metas[i];
    m.clip_id = "clip" + std::to_string(i);
    m.video_id = "video" + std::to_string(rng.index(opt.n_videos));
    const double start = rng.uniform(0.0, opt.max_time);
    m.t_start = start;
    m.t_end = start + rng.uniform(0.5, 8.0);
    const std::size_t n_nouns = rng.index(opt.max_tags + 1);
    const std::size_t n_verbs = rng.index(opt.max_tags + 1);
    for (std::size_t t = 0; t < n_nouns; ++t) {
      m.nouns.insert(static_cast<int>(rng.index(opt.tag_pool)));
    }
    for (std::size_t t = 0; t < n_verbs; ++t) {
      m.verbs.insert(static_cast<int>(rng.index(opt.tag_pool)));
    }
    m.verb_class = static_cast<int>(rng.index(opt.n_classes));
    m.noun_class = static_cast<int>(rng.index(opt.n_classes));
    m.text = "narration " + std::to_string(i);
  }
  return metas;
}

// Random batch with scene-negative augmentation drawn from a 4x pool.
inline TrainingBatch random_augmented_batch(TestRng& rng, std::size_t n,
                                            std::size_t dim) {
  const std::vector<ClipMeta> metas = random_metas(rng, n);
  const std::vector<ClipMeta> pool = random_metas(rng, 4 * n);
  const TrainingBatch base = make_training_batch(
      random_embeddings(rng, n, dim), random_embeddings(rng, n, dim), metas);
  const ScenePairing pairing =
      sample_scene_negatives(metas, pool, 60.0, rng.raw());
  return augment_batch(base, pairing, pool, random_embeddings(rng, 4 * n, dim),
                       random_embeddings(rng, 4 * n, dim));
}

// Every clip gets unique tags, so positive sets collapse to {i}.
inline std::vector<ClipMeta> distinct_tag_metas(std::size_t n) {
  std::vector<ClipMeta> metas(n);
  for (std::size_t i = 0; i < n; ++i) {
    ClipMeta& m = metas[i];
    m.clip_id = "clip" + std::to_string(i);
    m.video_id = "video0";
    m.t_start = 10.0 * static_cast<double>(i);
    m.t_end = m.t_start + 5.0;
    m.nouns = {static_cast<int>(i)};
    m.verbs = {static_cast<int>(n + i)};
    m.verb_class = static_cast<int>(i);
    m.noun_class = static_cast<int>(i);
    m.text = "clip " + std::to_string(i);
  }
  return metas;
}

// k separated clusters on the feature sphere; each cluster owns one verb and
// one noun class, so same-cluster correlation is 1 and cross-cluster is 0.
struct ClusterFixture {
  FeatureSet train;
  FeatureSet val;
};

inline ClusterFixture cluster_fixture(std::size_t clusters,
                                      std::size_t train_per_cluster,
                                      std::size_t val_per_cluster,
                                      std::size_t d_in, double noise,
                                      std::uint64_t seed) {
  TestRng rng(seed);
  std::vector<std::vector<double>> centers_video(clusters),
      centers_text(clusters);
  for (std::size_t c = 0; c < clusters; ++c) {
    centers_video[c].resize(d_in);
    centers_text[c].resize(d_in);
    for (std::size_t k = 0; k < d_in; ++k) {
      centers_video[c][k] = rng.gauss();
      // Paired modalities share cluster geometry up to small jitter.
      centers_text[c][k] = centers_video[c][k] + 0.1 * rng.gauss();
    }
  }
  const auto emit = [&](std::size_t per_cluster,
                        std::size_t id_offset) -> FeatureSet {
    FeatureSet set;
    const std::size_t n = clusters * per_cluster;
    set.video_features = Matrix(n, d_in);
    set.text_features = Matrix(n, d_in);
    std::size_t row = 0;
    for (std::size_t c = 0; c < clusters; ++c) {
      for (std::size_t s = 0; s < per_cluster; ++s, ++row) {
        for (std::size_t k = 0; k < d_in; ++k) {
          set.video_features.at(row, k) =
              centers_video[c][k] + noise * rng.gauss();
          set.text_features.at(row, k) =
              centers_text[c][k] + noise * rng.gauss();
        }
        ClipMeta meta;
        meta.clip_id = "clip" + std::to_string(id_offset + row);
        meta.video_id = "video" + std::to_string(c);
        meta.t_start = 100.0 * static_cast<double>(row);
        meta.t_end = meta.t_start + 5.0;
        meta.nouns = {static_cast<int>(c)};
        meta.verbs = {static_cast<int>(c)};
        meta.verb_class = static_cast<int>(c);
        meta.noun_class = static_cast<int>(c);
        meta.text = "cluster " + std::to_string(c);
        set.metas.push_back(std::move(meta));
      }
    }
    return set;
  };
  ClusterFixture fixture;
  fixture.train = emit(train_per_cluster, 0);
  fixture.val = emit(val_per_cluster, clusters * train_per_cluster);
  return fixture;
}

}  // namespace mirkit::testing

#endif  // MIRKIT_TESTS_FIXTURES_HPP_
