#ifndef MIRKIT_INFERENCE_HPP_
#define MIRKIT_INFERENCE_HPP_

#include <string>
#include <vector>

#include "mirkit/matrix.hpp"

namespace mirkit {

enum class ScoreMethod { plain, dual_softmax };

ScoreMethod parse_score_method(const std::string& name);  // plain|dual-softmax
std::string score_method_name(ScoreMethod method);

struct InferenceConfig {
  ScoreMethod method = ScoreMethod::plain;
  double prior_temperature = 500.0;
};

enum class Direction { text_to_video, video_to_text };

// sim(i, j) = t_i . v_j; rows are texts (N), columns are videos (M).
SimilarityMatrix similarity(const EmbeddingMatrix& text,
                            const EmbeddingMatrix& video);

// Column-wise softmax: per video, a distribution over texts.
ScoreMatrix plain_scores(const SimilarityMatrix& sim);

// Two-stage normalization: a row-wise prior softmax of sim/prior_temperature
// is multiplied elementwise into sim before the column-wise softmax.
ScoreMatrix dual_softmax_scores(const SimilarityMatrix& sim,
                                double prior_temperature = 500.0);

ScoreMatrix score(const SimilarityMatrix& sim, const InferenceConfig& config);

// Per-query ranked index lists: one list per text row (text_to_video) or per
// video column (video_to_text), sorted by descending score with ties broken
// by ascending index.
std::vector<std::vector<std::size_t>> rank(const ScoreMatrix& scores,
                                           Direction direction);

// Ranking-only internals, usable on raw matrices (metrics depend only on
// score order, not on score normalization).
std::vector<std::size_t> rank_row(const Matrix& m, std::size_t row);
std::vector<std::size_t> rank_col(const Matrix& m, std::size_t col);

// Softmax with max subtraction, along each column / row.
Matrix softmax_columns(const Matrix& m);
Matrix softmax_rows(const Matrix& m);

}  // namespace mirkit

#endif  // MIRKIT_INFERENCE_HPP_
