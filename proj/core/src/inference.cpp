#include "mirkit/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mirkit/error.hpp"

namespace mirkit {

ScoreMethod parse_score_method(const std::string& name) {
  if (name == "plain") return ScoreMethod::plain;
  if (name == "dual-softmax" || name == "dual_softmax") {
    return ScoreMethod::dual_softmax;
  }
  throw Error(ErrorKind::InvalidArgument,
              "unknown score method '" + name + "'");
}

std::string score_method_name(ScoreMethod method) {
  return method == ScoreMethod::plain ? "plain" : "dual-softmax";
}

SimilarityMatrix similarity(const EmbeddingMatrix& text,
                            const EmbeddingMatrix& video) {
  if (text.dim() != video.dim()) {
    throw Error(ErrorKind::ShapeMismatch, "text/video dims differ");
  }
  return SimilarityMatrix::validated(matmul_nt(text.matrix(), video.matrix()));
}

Matrix softmax_columns(const Matrix& m) {
  Matrix out(m.rows, m.cols);
  for (std::size_t c = 0; c < m.cols; ++c) {
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < m.rows; ++r) top = std::max(top, m.at(r, c));
    double sum = 0.0;
    for (std::size_t r = 0; r < m.rows; ++r) {
      out.at(r, c) = std::exp(m.at(r, c) - top);
      sum += out.at(r, c);
    }
    for (std::size_t r = 0; r < m.rows; ++r) out.at(r, c) /= sum;
  }
  return out;
}

Matrix softmax_rows(const Matrix& m) {
  Matrix out(m.rows, m.cols);
  for (std::size_t r = 0; r < m.rows; ++r) {
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < m.cols; ++c) top = std::max(top, m.at(r, c));
    double sum = 0.0;
    for (std::size_t c = 0; c < m.cols; ++c) {
      out.at(r, c) = std::exp(m.at(r, c) - top);
      sum += out.at(r, c);
    }
    for (std::size_t c = 0; c < m.cols; ++c) out.at(r, c) /= sum;
  }
  return out;
}

ScoreMatrix plain_scores(const SimilarityMatrix& sim) {
  return ScoreMatrix::validated(softmax_columns(sim.matrix()));
}

ScoreMatrix dual_softmax_scores(const SimilarityMatrix& sim,
                                double prior_temperature) {
  if (!(prior_temperature > 0.0)) {
    throw Error(ErrorKind::NonPositiveTemperature,
                "prior temperature must be > 0");
  }
  Matrix scaled = sim.matrix();
  for (double& v : scaled.data) v /= prior_temperature;
  const Matrix prior = softmax_rows(scaled);
  Matrix weighted(prior.rows, prior.cols);
  for (std::size_t i = 0; i < weighted.data.size(); ++i) {
    weighted.data[i] = prior.data[i] * sim.matrix().data[i];
  }
  return ScoreMatrix::validated(softmax_columns(weighted));
}

ScoreMatrix score(const SimilarityMatrix& sim, const InferenceConfig& config) {
  return config.method == ScoreMethod::plain
             ? plain_scores(sim)
             : dual_softmax_scores(sim, config.prior_temperature);
}

namespace {

std::vector<std::size_t> rank_values(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (values[a] != values[b]) return values[a] > values[b];
    return a < b;
  });
  return order;
}

}  // namespace

std::vector<std::size_t> rank_row(const Matrix& m, std::size_t row) {
  std::vector<double> values(m.cols);
  for (std::size_t c = 0; c < m.cols; ++c) values[c] = m.at(row, c);
  return rank_values(values);
}

std::vector<std::size_t> rank_col(const Matrix& m, std::size_t col) {
  std::vector<double> values(m.rows);
  for (std::size_t r = 0; r < m.rows; ++r) values[r] = m.at(r, col);
  return rank_values(values);
}

std::vector<std::vector<std::size_t>> rank(const ScoreMatrix& scores,
                                           Direction direction) {
  std::vector<std::vector<std::size_t>> out;
  if (direction == Direction::text_to_video) {
    out.reserve(scores.n_text());
    for (std::size_t r = 0; r < scores.n_text(); ++r) {
      out.push_back(rank_row(scores.matrix(), r));
    }
  } else {
    out.reserve(scores.n_video());
    for (std::size_t c = 0; c < scores.n_video(); ++c) {
      out.push_back(rank_col(scores.matrix(), c));
    }
  }
  return out;
}

}  // namespace mirkit
