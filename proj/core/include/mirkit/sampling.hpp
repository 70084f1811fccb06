#ifndef MIRKIT_SAMPLING_HPP_
#define MIRKIT_SAMPLING_HPP_

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mirkit/matrix.hpp"

namespace mirkit {

// Per-clip metadata. Noun/verb tag ids and action class ids arrive
// pre-extracted; no text parsing happens here.
struct ClipMeta {
  std::string clip_id;
  std::string video_id;
  double t_start = 0.0;
  double t_end = 0.0;
  std::set<int> nouns;
  std::set<int> verbs;
  int verb_class = 0;
  int noun_class = 0;
  std::string text;

  double midpoint() const { return 0.5 * (t_start + t_end); }
};

// For each batch index i, the set of batch indices whose narrations share at
// least one noun and at least one verb with i. Always reflexive (i is in
// P_i) and symmetric.
struct PositiveSets {
  std::vector<std::vector<std::size_t>> sets;  // sorted ascending

  std::size_t size() const { return sets.size(); }
  bool contains(std::size_t i, std::size_t j) const;
};

PositiveSets build_positive_sets(const std::vector<ClipMeta>& metas);

// Per batch index, the pool index of the chosen scene negative, or absent
// when no same-video clip lies within the time window.
using ScenePairing = std::vector<std::optional<std::size_t>>;

// Uniformly samples (seeded) one pool clip per batch clip with the same
// video_id, a different clip_id, and midpoint gap strictly below `window`
// seconds.
ScenePairing sample_scene_negatives(const std::vector<ClipMeta>& batch_metas,
                                    const std::vector<ClipMeta>& pool,
                                    double window, std::uint64_t seed);

// Paired video/text embeddings plus the metadata needed by ego_nce. Rows
// [0, base_size) are the base batch; rows [base_size, rows) hold scene
// negatives paired index-wise with the base rows. A row whose pairing was
// absent duplicates its base clip and carries self_filled = true; such rows
// are inert in the loss (never anchors, positives, or denominator terms).
struct TrainingBatch {
  EmbeddingMatrix video_emb;
  EmbeddingMatrix text_emb;
  std::vector<ClipMeta> meta;
  std::size_t base_size = 0;
  PositiveSets positive_sets;
  std::vector<bool> self_filled;  // one flag per row

  std::size_t rows() const { return meta.size(); }
  bool augmented() const { return rows() == 2 * base_size; }
};

// Unaugmented batch; positive sets are computed from the metas.
TrainingBatch make_training_batch(EmbeddingMatrix video_emb,
                                  EmbeddingMatrix text_emb,
                                  std::vector<ClipMeta> metas);

// Appends the paired scene negatives to `base`, producing a 2N-row batch.
// Positive sets are recomputed over all 2N rows.
TrainingBatch augment_batch(const TrainingBatch& base,
                            const ScenePairing& pairing,
                            const std::vector<ClipMeta>& pool_metas,
                            const EmbeddingMatrix& pool_video,
                            const EmbeddingMatrix& pool_text);

// c_ij = (1[verb_class_i == verb_class_j] + 1[noun_class_i == noun_class_j]) / 2,
// rows indexed by metas_text, columns by metas_video. Values are {0, 0.5, 1}.
CorrelationMatrix compute_correlation(const std::vector<ClipMeta>& metas_text,
                                      const std::vector<ClipMeta>& metas_video);

}  // namespace mirkit

#endif  // MIRKIT_SAMPLING_HPP_
