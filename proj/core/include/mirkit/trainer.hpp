#ifndef MIRKIT_TRAINER_HPP_
#define MIRKIT_TRAINER_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include "mirkit/losses.hpp"
#include "mirkit/matrix.hpp"
#include "mirkit/sampling.hpp"

namespace mirkit {

// Linear projection heads over fixed input features, one per modality.
// Output embeddings are L2-normalized as part of the forward pass.
struct ProjectionHead {
  Matrix weight_video;  // d_in x d_out
  Matrix weight_text;   // d_in x d_out
};

struct TrainConfig {
  LossKind loss_kind = LossKind::infonce;
  double learning_rate = 3e-5;
  std::size_t epochs = 100;
  std::size_t batch_size = 0;  // 0 = full batch
  std::uint64_t seed = 0;
  std::size_t proj_dim = 0;  // 0 = keep the input dimension
  double tau = 0.05;
  double gamma = 0.2;
  double positive_threshold = 0.1;
  double scene_window = 60.0;  // egonce scene-negative adjacency, seconds

  void validate() const;
};

struct EpochRecord {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double val_map_avg = 0.0;
  double val_ndcg_avg = 0.0;
};

using TrainingCurve = std::vector<EpochRecord>;

// Raw (not normalized) per-sample features plus their metadata.
struct FeatureSet {
  Matrix video_features;
  Matrix text_features;
  std::vector<ClipMeta> metas;

  std::size_t size() const { return metas.size(); }
  FeatureSet gather(const std::vector<std::size_t>& rows) const;
};

// Seeded uniform init in [-1/sqrt(d_in), +1/sqrt(d_in)].
ProjectionHead init_head(std::size_t d_in, std::size_t d_out,
                         std::uint64_t seed);

// Project then L2-normalize each row. Throws ZeroRow when a projected row
// has near-zero norm.
std::pair<EmbeddingMatrix, EmbeddingMatrix> forward(
    const ProjectionHead& head, const Matrix& video_features,
    const Matrix& text_features);

// One optimization step's quantities: loss value at the current head plus
// analytic gradients with respect to both weight matrices, chained through
// projection, normalization, and the configured loss. For egonce a non-null
// scene_pool supplies the candidates for scene-negative augmentation.
struct StepEval {
  double loss = 0.0;
  Matrix grad_weight_video;
  Matrix grad_weight_text;
};

StepEval loss_and_head_gradients(const ProjectionHead& head,
                                 const FeatureSet& batch,
                                 const FeatureSet* scene_pool,
                                 const TrainConfig& config,
                                 std::uint64_t sampling_seed);

struct TrainResult {
  ProjectionHead head;
  TrainingCurve curve;
};

// Plain gradient descent over the projection head. Bit-deterministic for a
// fixed config and data. Each record holds the mean training loss of the
// epoch (measured at pre-update weights per mini-batch) and validation
// metrics from plain-softmax scoring after the epoch's updates.
TrainResult train(const FeatureSet& train_split, const FeatureSet& val_split,
                  const TrainConfig& config);

}  // namespace mirkit

#endif  // MIRKIT_TRAINER_HPP_
