#ifndef MIRKIT_LOSSES_HPP_
#define MIRKIT_LOSSES_HPP_

#include <string>

#include "mirkit/matrix.hpp"
#include "mirkit/sampling.hpp"

namespace mirkit {

enum class LossKind { infonce, egonce, mimm, ada_mimm };

LossKind parse_loss_kind(const std::string& name);  // infonce|egonce|mimm|ada-mimm
std::string loss_kind_name(LossKind kind);

struct LossConfig {
  double tau = 0.05;
  double gamma = 0.2;  // 0.4 for ada_mimm (see defaults_for)
  double positive_threshold = 0.1;

  static LossConfig defaults_for(LossKind kind);
  void validate() const;
};

// Scalar loss plus exact analytic gradients with respect to both embedding
// matrices (same shapes as the inputs).
struct LossResult {
  double value = 0.0;
  Matrix grad_video;
  Matrix grad_text;
};

// Symmetric InfoNCE over index-paired batches:
//   L = -(1/N) sum_i [ log softmax_j(v_i.t_j / tau) |_{j=i} ]
//       -(1/N) sum_i [ log softmax_j(t_i.v_j / tau) |_{j=i} ]
LossResult info_nce(const EmbeddingMatrix& video, const EmbeddingMatrix& text,
                    double tau);

// EgoNCE: InfoNCE with action-aware positive sets in the numerator and
// scene-aware negatives in the denominator. Per anchor i,
//   term_i = -log [ sum_{k in P_i} exp(v_i.t_k/tau)
//                   / sum_{j over all active rows} exp(v_i.t_j/tau) ],
// averaged over active anchors and summed with the symmetric t2v direction.
// Self-filled scene negatives are skipped everywhere (never anchors,
// positives, or denominator terms). Reduces to info_nce when P_i = {i} and
// there is no augmentation.
LossResult ego_nce(const TrainingBatch& batch, double tau);

// Multi-instance max-margin over triples
//   Omega = {(i,j,k) | c_ij > positive_threshold, c_ik <= positive_threshold}:
//   L = (1/|Omega|) sum_Omega [ max(0, gamma + v_i.t_k - v_i.t_j)
//                             + max(0, gamma + t_i.v_k - t_i.v_j) ]
// Subgradient at the hinge kink is 0.
LossResult mi_mm(const EmbeddingMatrix& video, const EmbeddingMatrix& text,
                 const CorrelationMatrix& corr, double gamma,
                 double positive_threshold);

// mi_mm with the per-triple margin scaled by the correlation: margin =
// c_ij * gamma, so semantically identical pairs (c_ij = 1) keep the full
// margin and barely-correlated pairs get a smaller one.
LossResult adaptive_mi_mm(const EmbeddingMatrix& video,
                          const EmbeddingMatrix& text,
                          const CorrelationMatrix& corr, double gamma,
                          double positive_threshold);

}  // namespace mirkit

#endif  // MIRKIT_LOSSES_HPP_
