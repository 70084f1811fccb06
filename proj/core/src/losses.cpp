#include "mirkit/losses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "mirkit/error.hpp"

namespace mirkit {

namespace {

// log sum_{j in idx} exp(z[j]) with max subtraction; also fills probs[j] =
// softmax over idx (probs must be zeroed for indices outside idx by caller).
double logsumexp_subset(const std::vector<double>& z,
                        const std::vector<std::size_t>& idx,
                        std::vector<double>& probs) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t j : idx) m = std::max(m, z[j]);
  double sum = 0.0;
  for (std::size_t j : idx) sum += std::exp(z[j] - m);
  const double lse = m + std::log(sum);
  for (std::size_t j : idx) probs[j] = std::exp(z[j] - m) / sum;
  return lse;
}

void check_pair_shapes(const EmbeddingMatrix& video,
                       const EmbeddingMatrix& text) {
  if (video.rows() != text.rows()) {
    throw Error(ErrorKind::ShapeMismatch,
                "video/text row counts differ in paired batch");
  }
  if (video.dim() != text.dim()) {
    throw Error(ErrorKind::ShapeMismatch, "video/text dims differ");
  }
}

void check_tau(double tau) {
  if (!(tau > 0.0)) {
    throw Error(ErrorKind::NonPositiveTau, "temperature must be > 0");
  }
}

LossResult finalize(double value, const Matrix& grad_sim, const Matrix& video,
                    const Matrix& text) {
  LossResult res;
  res.value = value;
  res.grad_video = matmul_nn(grad_sim, text);
  res.grad_text = matmul_tn(grad_sim, video);
  if (!std::isfinite(res.value) || !all_finite(res.grad_video) ||
      !all_finite(res.grad_text)) {
    throw Error(ErrorKind::NonFinite, "loss produced NaN/Inf");
  }
  return res;
}

// Shared core of mi_mm and adaptive_mi_mm; margin per triple is
// gamma (adaptive = false) or c_ij * gamma (adaptive = true).
LossResult max_margin_impl(const EmbeddingMatrix& video,
                           const EmbeddingMatrix& text,
                           const CorrelationMatrix& corr, double gamma,
                           double positive_threshold, bool adaptive) {
  check_pair_shapes(video, text);
  const std::size_t n = video.rows();
  if (corr.n_text() != n || corr.n_video() != n) {
    throw Error(ErrorKind::ShapeMismatch,
                "correlation matrix must be square over the batch");
  }
  if (!(gamma >= 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "margin gamma must be >= 0");
  }
  if (!(positive_threshold >= 0.0 && positive_threshold < 1.0)) {
    throw Error(ErrorKind::InvalidArgument,
                "positive_threshold must lie in [0,1)");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(corr.at(i, i) - 1.0) > 1e-9) {
      throw Error(ErrorKind::InvalidArgument,
                  "correlation diagonal must equal 1 over a paired batch");
    }
  }

  // a(x, y) = v_x . t_y; the text-anchored term t_i.v_k equals a(k, i).
  const Matrix sim = matmul_nt(video.matrix(), text.matrix());

  Matrix grad_sim(n, n);
  double sum = 0.0;
  std::size_t triples = 0;
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < n; ++i) {
    pos.clear();
    neg.clear();
    for (std::size_t j = 0; j < n; ++j) {
      (corr.at(i, j) > positive_threshold ? pos : neg).push_back(j);
    }
    triples += pos.size() * neg.size();
    for (std::size_t j : pos) {
      const double margin = adaptive ? corr.at(i, j) * gamma : gamma;
      for (std::size_t k : neg) {
        const double h_video = margin + sim.at(i, k) - sim.at(i, j);
        if (h_video > 0.0) {
          sum += h_video;
          grad_sim.at(i, k) += 1.0;
          grad_sim.at(i, j) -= 1.0;
        }
        const double h_text = margin + sim.at(k, i) - sim.at(j, i);
        if (h_text > 0.0) {
          sum += h_text;
          grad_sim.at(k, i) += 1.0;
          grad_sim.at(j, i) -= 1.0;
        }
      }
    }
  }
  if (triples == 0) {
    throw Error(ErrorKind::EmptyTripleSet,
                "no (i,j,k) with c_ij > threshold and c_ik <= threshold");
  }
  const double inv = 1.0 / static_cast<double>(triples);
  for (double& g : grad_sim.data) g *= inv;
  return finalize(sum * inv, grad_sim, video.matrix(), text.matrix());
}

}  // namespace

LossKind parse_loss_kind(const std::string& name) {
  if (name == "infonce") return LossKind::infonce;
  if (name == "egonce") return LossKind::egonce;
  if (name == "mimm") return LossKind::mimm;
  if (name == "ada-mimm" || name == "ada_mimm") return LossKind::ada_mimm;
  throw Error(ErrorKind::InvalidArgument, "unknown loss kind '" + name + "'");
}

std::string loss_kind_name(LossKind kind) {
  switch (kind) {
    case LossKind::infonce: return "infonce";
    case LossKind::egonce: return "egonce";
    case LossKind::mimm: return "mimm";
    case LossKind::ada_mimm: return "ada-mimm";
  }
  return "?";
}

LossConfig LossConfig::defaults_for(LossKind kind) {
  LossConfig cfg;
  if (kind == LossKind::ada_mimm) cfg.gamma = 0.4;
  return cfg;
}

void LossConfig::validate() const {
  check_tau(tau);
  if (!(gamma >= 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "gamma must be >= 0");
  }
  if (!(positive_threshold >= 0.0 && positive_threshold < 1.0)) {
    throw Error(ErrorKind::InvalidArgument,
                "positive_threshold must lie in [0,1)");
  }
}

LossResult info_nce(const EmbeddingMatrix& video, const EmbeddingMatrix& text,
                    double tau) {
  check_pair_shapes(video, text);
  check_tau(tau);
  const std::size_t n = video.rows();

  Matrix z = matmul_nt(video.matrix(), text.matrix());
  for (double& v : z.data) v /= tau;

  std::vector<std::size_t> all(n);
  for (std::size_t j = 0; j < n; ++j) all[j] = j;

  Matrix grad_z(n, n);
  std::vector<double> line(n), probs(n);
  double sum_v2t = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) line[j] = z.at(i, j);
    const double lse = logsumexp_subset(line, all, probs);
    sum_v2t += lse - z.at(i, i);
    for (std::size_t j = 0; j < n; ++j) {
      grad_z.at(i, j) += probs[j] - (j == i ? 1.0 : 0.0);
    }
  }
  double sum_t2v = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) line[j] = z.at(j, i);
    const double lse = logsumexp_subset(line, all, probs);
    sum_t2v += lse - z.at(i, i);
    for (std::size_t j = 0; j < n; ++j) {
      grad_z.at(j, i) += probs[j] - (j == i ? 1.0 : 0.0);
    }
  }

  const double inv_anchors = 1.0 / static_cast<double>(n);
  const double scale = inv_anchors / tau;
  for (double& g : grad_z.data) g *= scale;
  return finalize((sum_v2t + sum_t2v) * inv_anchors, grad_z, video.matrix(),
                  text.matrix());
}

LossResult ego_nce(const TrainingBatch& batch, double tau) {
  check_tau(tau);
  const std::size_t rows = batch.rows();
  if (batch.video_emb.rows() != rows || batch.text_emb.rows() != rows ||
      batch.self_filled.size() != rows) {
    throw Error(ErrorKind::ShapeMismatch,
                "training batch embeddings/metadata row counts disagree");
  }
  if (batch.video_emb.dim() != batch.text_emb.dim()) {
    throw Error(ErrorKind::ShapeMismatch, "video/text dims differ");
  }
  if (rows != batch.base_size && rows != 2 * batch.base_size) {
    throw Error(ErrorKind::InvalidArgument,
                "batch row count must be N or 2N");
  }
  if (batch.positive_sets.size() != rows) {
    throw Error(ErrorKind::MissingPositiveSets,
                "batch carries no positive sets for its anchor range");
  }

  // Active rows: everything except self-filled scene negatives, which are
  // skipped as anchors, positives, and denominator terms.
  std::vector<std::size_t> active;
  for (std::size_t r = 0; r < rows; ++r) {
    if (!batch.self_filled[r]) active.push_back(r);
  }

  Matrix z = matmul_nt(batch.video_emb.matrix(), batch.text_emb.matrix());
  for (double& v : z.data) v /= tau;

  Matrix grad_z(rows, rows);
  std::vector<double> line(rows), pden(rows), pnum(rows);
  std::vector<std::size_t> positives;
  double sum_v2t = 0.0;
  double sum_t2v = 0.0;
  for (std::size_t i : active) {
    positives.clear();
    for (std::size_t k : batch.positive_sets.sets[i]) {
      if (!batch.self_filled[k]) positives.push_back(k);
    }
    // v2t: anchor video i against text columns.
    for (std::size_t j = 0; j < rows; ++j) line[j] = z.at(i, j);
    std::fill(pden.begin(), pden.end(), 0.0);
    std::fill(pnum.begin(), pnum.end(), 0.0);
    const double den_v = logsumexp_subset(line, active, pden);
    const double num_v = logsumexp_subset(line, positives, pnum);
    sum_v2t += den_v - num_v;
    for (std::size_t j = 0; j < rows; ++j) grad_z.at(i, j) += pden[j] - pnum[j];
    // t2v: anchor text i against video rows (column i of z).
    for (std::size_t j = 0; j < rows; ++j) line[j] = z.at(j, i);
    std::fill(pden.begin(), pden.end(), 0.0);
    std::fill(pnum.begin(), pnum.end(), 0.0);
    const double den_t = logsumexp_subset(line, active, pden);
    const double num_t = logsumexp_subset(line, positives, pnum);
    sum_t2v += den_t - num_t;
    for (std::size_t j = 0; j < rows; ++j) grad_z.at(j, i) += pden[j] - pnum[j];
  }

  const double inv_anchors = 1.0 / static_cast<double>(active.size());
  const double scale = inv_anchors / tau;
  for (double& g : grad_z.data) g *= scale;
  return finalize((sum_v2t + sum_t2v) * inv_anchors, grad_z,
                  batch.video_emb.matrix(), batch.text_emb.matrix());
}

LossResult mi_mm(const EmbeddingMatrix& video, const EmbeddingMatrix& text,
                 const CorrelationMatrix& corr, double gamma,
                 double positive_threshold) {
  return max_margin_impl(video, text, corr, gamma, positive_threshold, false);
}

LossResult adaptive_mi_mm(const EmbeddingMatrix& video,
                          const EmbeddingMatrix& text,
                          const CorrelationMatrix& corr, double gamma,
                          double positive_threshold) {
  return max_margin_impl(video, text, corr, gamma, positive_threshold, true);
}

}  // namespace mirkit
