#include "mirkit/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "mirkit/error.hpp"
#include "mirkit/rng.hpp"

namespace mirkit {

namespace {

bool sets_intersect(const std::set<int>& a, const std::set<int>& b) {
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      return true;
    }
  }
  return false;
}

void copy_row(const Matrix& src, std::size_t src_row, Matrix& dst,
              std::size_t dst_row) {
  auto s = src.row(src_row);
  std::copy(s.begin(), s.end(), dst.row(dst_row).begin());
}

}  // namespace

bool PositiveSets::contains(std::size_t i, std::size_t j) const {
  const auto& s = sets[i];
  return std::binary_search(s.begin(), s.end(), j);
}

PositiveSets build_positive_sets(const std::vector<ClipMeta>& metas) {
  if (metas.empty()) {
    throw Error(ErrorKind::InvalidArgument, "build_positive_sets: empty batch");
  }
  const std::size_t n = metas.size();
  PositiveSets out;
  out.sets.assign(n, {});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      // The anchor's own pair is always a positive, even with empty tag sets.
      const bool positive =
          i == j || (sets_intersect(metas[i].nouns, metas[j].nouns) &&
                     sets_intersect(metas[i].verbs, metas[j].verbs));
      if (positive) out.sets[i].push_back(j);
    }
  }
  return out;
}

ScenePairing sample_scene_negatives(const std::vector<ClipMeta>& batch_metas,
                                    const std::vector<ClipMeta>& pool,
                                    double window, std::uint64_t seed) {
  if (!(window > 0.0)) {
    throw Error(ErrorKind::InvalidArgument,
                "sample_scene_negatives: window must be > 0");
  }
  Rng rng(seed);
  ScenePairing pairing(batch_metas.size());
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < batch_metas.size(); ++i) {
    const ClipMeta& anchor = batch_metas[i];
    candidates.clear();
    for (std::size_t p = 0; p < pool.size(); ++p) {
      if (pool[p].video_id != anchor.video_id) continue;
      if (pool[p].clip_id == anchor.clip_id) continue;
      if (std::abs(pool[p].midpoint() - anchor.midpoint()) >= window) continue;
      candidates.push_back(p);
    }
    if (!candidates.empty()) {
      pairing[i] = candidates[rng.uniform_index(candidates.size())];
    }
  }
  return pairing;
}

TrainingBatch make_training_batch(EmbeddingMatrix video_emb,
                                  EmbeddingMatrix text_emb,
                                  std::vector<ClipMeta> metas) {
  if (video_emb.rows() != text_emb.rows() || video_emb.rows() != metas.size()) {
    throw Error(ErrorKind::ShapeMismatch,
                "make_training_batch: row counts disagree");
  }
  PositiveSets positives = build_positive_sets(metas);
  const std::size_t n = metas.size();
  return TrainingBatch{std::move(video_emb),
                       std::move(text_emb),
                       std::move(metas),
                       n,
                       std::move(positives),
                       std::vector<bool>(n, false)};
}

TrainingBatch augment_batch(const TrainingBatch& base,
                            const ScenePairing& pairing,
                            const std::vector<ClipMeta>& pool_metas,
                            const EmbeddingMatrix& pool_video,
                            const EmbeddingMatrix& pool_text) {
  const std::size_t n = base.base_size;
  if (base.rows() != n) {
    throw Error(ErrorKind::InvalidArgument,
                "augment_batch: base batch is already augmented");
  }
  if (pairing.size() != n) {
    throw Error(ErrorKind::ShapeMismatch,
                "augment_batch: pairing size != batch size");
  }
  if (pool_video.dim() != base.video_emb.dim() ||
      pool_text.dim() != base.text_emb.dim()) {
    throw Error(ErrorKind::ShapeMismatch,
                "augment_batch: pool embedding dim != base dim");
  }
  if (pool_metas.size() != pool_video.rows() ||
      pool_metas.size() != pool_text.rows()) {
    throw Error(ErrorKind::ShapeMismatch,
                "augment_batch: pool metadata/embedding row counts disagree");
  }

  std::vector<ClipMeta> meta = base.meta;
  std::vector<bool> self_filled(2 * n, false);
  Matrix video(2 * n, base.video_emb.dim());
  Matrix text(2 * n, base.text_emb.dim());
  for (std::size_t i = 0; i < n; ++i) {
    copy_row(base.video_emb.matrix(), i, video, i);
    copy_row(base.text_emb.matrix(), i, text, i);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (pairing[i].has_value()) {
      const std::size_t p = *pairing[i];
      if (p >= pool_metas.size()) {
        throw Error(ErrorKind::InvalidArgument,
                    "augment_batch: pairing index out of range");
      }
      meta.push_back(pool_metas[p]);
      copy_row(pool_video.matrix(), p, video, n + i);
      copy_row(pool_text.matrix(), p, text, n + i);
    } else {
      meta.push_back(base.meta[i]);
      self_filled[n + i] = true;
      copy_row(base.video_emb.matrix(), i, video, n + i);
      copy_row(base.text_emb.matrix(), i, text, n + i);
    }
  }

  PositiveSets positives = build_positive_sets(meta);
  return TrainingBatch{EmbeddingMatrix::validated(std::move(video)),
                       EmbeddingMatrix::validated(std::move(text)),
                       std::move(meta),
                       n,
                       std::move(positives),
                       std::move(self_filled)};
}

CorrelationMatrix compute_correlation(const std::vector<ClipMeta>& metas_text,
                                      const std::vector<ClipMeta>& metas_video) {
  if (metas_text.empty() || metas_video.empty()) {
    throw Error(ErrorKind::InvalidArgument, "compute_correlation: empty list");
  }
  Matrix c(metas_text.size(), metas_video.size());
  for (std::size_t i = 0; i < metas_text.size(); ++i) {
    for (std::size_t j = 0; j < metas_video.size(); ++j) {
      const double verb =
          metas_text[i].verb_class == metas_video[j].verb_class ? 1.0 : 0.0;
      const double noun =
          metas_text[i].noun_class == metas_video[j].noun_class ? 1.0 : 0.0;
      c.at(i, j) = 0.5 * (verb + noun);
    }
  }
  return CorrelationMatrix::validated(std::move(c));
}

}  // namespace mirkit
