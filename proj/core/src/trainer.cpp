#include "mirkit/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mirkit/error.hpp"
#include "mirkit/inference.hpp"
#include "mirkit/metrics.hpp"
#include "mirkit/rng.hpp"

namespace mirkit {

namespace {

struct ForwardState {
  Matrix embedded;            // unit rows
  std::vector<double> norms;  // pre-normalization row norms
};

ForwardState project_normalize(const Matrix& features, const Matrix& weight) {
  Matrix y = matmul_nn(features, weight);
  ForwardState state{Matrix(y.rows, y.cols), std::vector<double>(y.rows)};
  for (std::size_t r = 0; r < y.rows; ++r) {
    const double norm = row_norm(y, r);
    if (norm < 1e-12) {
      throw Error(ErrorKind::ZeroRow,
                  "projected row " + std::to_string(r) + " has near-zero norm");
    }
    state.norms[r] = norm;
    for (std::size_t c = 0; c < y.cols; ++c) {
      state.embedded.at(r, c) = y.at(r, c) / norm;
    }
  }
  return state;
}

// d L/d y for e = y / ||y||:  (g - (e.g) e) / ||y||.
Matrix normalize_backward(const ForwardState& state, const Matrix& grad_emb) {
  Matrix grad_y(grad_emb.rows, grad_emb.cols);
  for (std::size_t r = 0; r < grad_emb.rows; ++r) {
    double dot = 0.0;
    for (std::size_t c = 0; c < grad_emb.cols; ++c) {
      dot += state.embedded.at(r, c) * grad_emb.at(r, c);
    }
    for (std::size_t c = 0; c < grad_emb.cols; ++c) {
      grad_y.at(r, c) =
          (grad_emb.at(r, c) - dot * state.embedded.at(r, c)) / state.norms[r];
    }
  }
  return grad_y;
}

Matrix gather_rows(const Matrix& m, const std::vector<std::size_t>& rows) {
  Matrix out(rows.size(), m.cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    auto src = m.row(rows[r]);
    std::copy(src.begin(), src.end(), out.row(r).begin());
  }
  return out;
}

}  // namespace

void TrainConfig::validate() const {
  if (!(learning_rate >= 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "learning_rate must be >= 0");
  }
  if (epochs < 1) {
    throw Error(ErrorKind::InvalidArgument, "epochs must be >= 1");
  }
  if (batch_size == 1) {
    throw Error(ErrorKind::InvalidArgument,
                "batch_size must be >= 2 (or 0 for full batch)");
  }
  LossConfig loss_cfg{tau, gamma, positive_threshold};
  loss_cfg.validate();
  if (!(scene_window > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "scene_window must be > 0");
  }
}

FeatureSet FeatureSet::gather(const std::vector<std::size_t>& rows) const {
  FeatureSet out;
  out.video_features = gather_rows(video_features, rows);
  out.text_features = gather_rows(text_features, rows);
  out.metas.reserve(rows.size());
  for (std::size_t r : rows) out.metas.push_back(metas[r]);
  return out;
}

ProjectionHead init_head(std::size_t d_in, std::size_t d_out,
                         std::uint64_t seed) {
  if (d_in < 1 || d_out < 1) {
    throw Error(ErrorKind::InvalidArgument, "head dims must be >= 1");
  }
  const double bound = 1.0 / std::sqrt(static_cast<double>(d_in));
  Rng rng(seed);
  ProjectionHead head{Matrix(d_in, d_out), Matrix(d_in, d_out)};
  for (double& w : head.weight_video.data) {
    w = rng.uniform_real(-bound, bound);
  }
  for (double& w : head.weight_text.data) {
    w = rng.uniform_real(-bound, bound);
  }
  return head;
}

std::pair<EmbeddingMatrix, EmbeddingMatrix> forward(
    const ProjectionHead& head, const Matrix& video_features,
    const Matrix& text_features) {
  ForwardState video = project_normalize(video_features, head.weight_video);
  ForwardState text = project_normalize(text_features, head.weight_text);
  return {EmbeddingMatrix::validated(std::move(video.embedded)),
          EmbeddingMatrix::validated(std::move(text.embedded))};
}

StepEval loss_and_head_gradients(const ProjectionHead& head,
                                 const FeatureSet& batch,
                                 const FeatureSet* scene_pool,
                                 const TrainConfig& config,
                                 std::uint64_t sampling_seed) {
  if (batch.video_features.rows != batch.size() ||
      batch.text_features.rows != batch.size()) {
    throw Error(ErrorKind::ShapeMismatch,
                "feature rows and metadata rows disagree");
  }
  const std::size_t n = batch.size();

  // Feature rows entering the forward pass. For egonce with a scene pool the
  // augmented half is appended, sourcing each paired negative's features (or
  // the base row again when the pairing is absent).
  Matrix video_in = batch.video_features;
  Matrix text_in = batch.text_features;
  std::vector<ClipMeta> metas = batch.metas;
  std::vector<bool> self_filled(n, false);
  if (config.loss_kind == LossKind::egonce && scene_pool != nullptr) {
    const ScenePairing pairing = sample_scene_negatives(
        batch.metas, scene_pool->metas, config.scene_window, sampling_seed);
    video_in.data.resize(2 * n * video_in.cols);
    text_in.data.resize(2 * n * text_in.cols);
    video_in.rows = 2 * n;
    text_in.rows = 2 * n;
    self_filled.resize(2 * n, false);
    for (std::size_t i = 0; i < n; ++i) {
      std::span<const double> vsrc, tsrc;
      if (pairing[i].has_value()) {
        vsrc = scene_pool->video_features.row(*pairing[i]);
        tsrc = scene_pool->text_features.row(*pairing[i]);
        metas.push_back(scene_pool->metas[*pairing[i]]);
      } else {
        vsrc = batch.video_features.row(i);
        tsrc = batch.text_features.row(i);
        metas.push_back(batch.metas[i]);
        self_filled[n + i] = true;
      }
      std::copy(vsrc.begin(), vsrc.end(), video_in.row(n + i).begin());
      std::copy(tsrc.begin(), tsrc.end(), text_in.row(n + i).begin());
    }
  }

  ForwardState video = project_normalize(video_in, head.weight_video);
  ForwardState text = project_normalize(text_in, head.weight_text);
  EmbeddingMatrix video_emb = EmbeddingMatrix::validated(video.embedded);
  EmbeddingMatrix text_emb = EmbeddingMatrix::validated(text.embedded);

  LossResult loss;
  switch (config.loss_kind) {
    case LossKind::infonce:
      loss = info_nce(video_emb, text_emb, config.tau);
      break;
    case LossKind::egonce: {
      PositiveSets positives = build_positive_sets(metas);
      TrainingBatch tb{std::move(video_emb), std::move(text_emb),
                       std::move(metas),     n,
                       std::move(positives), self_filled};
      loss = ego_nce(tb, config.tau);
      break;
    }
    case LossKind::mimm:
    case LossKind::ada_mimm: {
      const CorrelationMatrix corr =
          compute_correlation(batch.metas, batch.metas);
      loss = config.loss_kind == LossKind::mimm
                 ? mi_mm(video_emb, text_emb, corr, config.gamma,
                         config.positive_threshold)
                 : adaptive_mi_mm(video_emb, text_emb, corr, config.gamma,
                                  config.positive_threshold);
      break;
    }
  }

  const Matrix grad_video_y = normalize_backward(video, loss.grad_video);
  const Matrix grad_text_y = normalize_backward(text, loss.grad_text);
  StepEval eval;
  eval.loss = loss.value;
  eval.grad_weight_video = matmul_tn(video_in, grad_video_y);
  eval.grad_weight_text = matmul_tn(text_in, grad_text_y);
  return eval;
}

TrainResult train(const FeatureSet& train_split, const FeatureSet& val_split,
                  const TrainConfig& config) {
  config.validate();
  if (train_split.size() < 2) {
    throw Error(ErrorKind::InvalidArgument,
                "train split must hold at least 2 samples");
  }
  if (val_split.size() < 1) {
    throw Error(ErrorKind::InvalidArgument, "validation split must be non-empty");
  }
  if (train_split.video_features.cols != train_split.text_features.cols) {
    throw Error(ErrorKind::ShapeMismatch,
                "video/text feature dims differ (shared head input dim)");
  }
  const std::size_t d_in = train_split.video_features.cols;
  const std::size_t d_out = config.proj_dim == 0 ? d_in : config.proj_dim;
  const std::size_t n = train_split.size();
  const std::size_t batch_size =
      config.batch_size == 0 ? n : std::min(config.batch_size, n);

  ProjectionHead head = init_head(d_in, d_out, config.seed);
  const CorrelationMatrix val_corr =
      compute_correlation(val_split.metas, val_split.metas);

  TrainResult result;
  result.curve.reserve(config.epochs);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    if (batch_size < n) {
      // Shuffle seeds sit past [seed, seed + epochs), the scene-sampling
      // seed range, so the two streams stay distinct.
      Rng shuffle_rng(config.seed + config.epochs + epoch);
      fisher_yates_shuffle(order, shuffle_rng);
    }

    double loss_sum = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < n; start += batch_size) {
      const std::size_t stop = std::min(start + batch_size, n);
      if (stop - start < 2) continue;  // a 1-row remainder has no negatives
      const std::vector<std::size_t> rows(order.begin() + start,
                                          order.begin() + stop);
      const FeatureSet batch = train_split.gather(rows);
      const FeatureSet* pool =
          config.loss_kind == LossKind::egonce ? &train_split : nullptr;
      StepEval step = loss_and_head_gradients(head, batch, pool, config,
                                              config.seed + epoch);
      if (!std::isfinite(step.loss)) {
        throw Error(ErrorKind::Diverged, "non-finite loss at epoch " +
                                             std::to_string(epoch));
      }
      loss_sum += step.loss;
      ++batches;
      if (config.learning_rate != 0.0) {
        for (std::size_t i = 0; i < head.weight_video.data.size(); ++i) {
          head.weight_video.data[i] -=
              config.learning_rate * step.grad_weight_video.data[i];
        }
        for (std::size_t i = 0; i < head.weight_text.data.size(); ++i) {
          head.weight_text.data[i] -=
              config.learning_rate * step.grad_weight_text.data[i];
        }
      }
    }
    if (batches == 0) {
      throw Error(ErrorKind::InvalidArgument,
                  "no trainable mini-batch (batch_size too large for split?)");
    }

    auto [val_video, val_text] =
        forward(head, val_split.video_features, val_split.text_features);
    const ScoreMatrix scores = plain_scores(similarity(val_text, val_video));
    const RetrievalReport report = evaluate(scores, val_corr);
    result.curve.push_back({epoch, loss_sum / static_cast<double>(batches),
                            report.map_avg, report.ndcg_avg});
  }
  result.head = std::move(head);
  return result;
}

}  // namespace mirkit
