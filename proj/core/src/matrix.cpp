#include "mirkit/matrix.hpp"

#include <cmath>
#include <string>

#include "mirkit/error.hpp"

namespace mirkit {

namespace {

void require(bool ok, ErrorKind kind, const std::string& msg) {
  if (!ok) throw Error(kind, msg);
}

}  // namespace

Matrix matmul_nn(const Matrix& a, const Matrix& b) {
  require(a.cols == b.rows, ErrorKind::ShapeMismatch,
          "matmul_nn: inner dimensions differ");
  Matrix c(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t k = 0; k < a.cols; ++k) {
      const double aik = a.at(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols; ++j) {
        c.at(i, j) += aik * b.at(k, j);
      }
    }
  }
  return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  require(a.cols == b.cols, ErrorKind::ShapeMismatch,
          "matmul_nt: inner dimensions differ");
  Matrix c(a.rows, b.rows);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t j = 0; j < b.rows; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols; ++k) {
        s += a.at(i, k) * b.at(j, k);
      }
      c.at(i, j) = s;
    }
  }
  return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  require(a.rows == b.rows, ErrorKind::ShapeMismatch,
          "matmul_tn: inner dimensions differ");
  Matrix c(a.cols, b.cols);
  for (std::size_t k = 0; k < a.rows; ++k) {
    for (std::size_t i = 0; i < a.cols; ++i) {
      const double aki = a.at(k, i);
      if (aki == 0.0) continue;
      for (std::size_t j = 0; j < b.cols; ++j) {
        c.at(i, j) += aki * b.at(k, j);
      }
    }
  }
  return c;
}

bool all_finite(const Matrix& m) {
  for (double v : m.data) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

double row_norm(const Matrix& m, std::size_t r) {
  double s = 0.0;
  for (double v : m.row(r)) s += v * v;
  return std::sqrt(s);
}

EmbeddingMatrix EmbeddingMatrix::validated(Matrix m) {
  require(m.rows >= 1 && m.cols >= 1, ErrorKind::ShapeMismatch,
          "embedding matrix must be at least 1x1");
  require(all_finite(m), ErrorKind::NonFinite,
          "embedding matrix has NaN/Inf entries");
  for (std::size_t r = 0; r < m.rows; ++r) {
    const double norm = row_norm(m, r);
    require(std::abs(norm - 1.0) <= kNormTolerance, ErrorKind::OutOfRange,
            "row " + std::to_string(r) + " has norm " + std::to_string(norm) +
                ", expected 1 within 1e-4");
  }
  return EmbeddingMatrix(std::move(m));
}

EmbeddingMatrix l2_normalize(const Matrix& raw) {
  Matrix out = raw;
  if (!all_finite(out)) {
    throw Error(ErrorKind::NonFinite, "l2_normalize: NaN/Inf input");
  }
  for (std::size_t r = 0; r < out.rows; ++r) {
    const double norm = row_norm(out, r);
    if (norm < 1e-12) {
      throw Error(ErrorKind::ZeroRow,
                  "l2_normalize: row " + std::to_string(r) + " has norm " +
                      std::to_string(norm));
    }
    for (double& v : out.row(r)) v /= norm;
  }
  return EmbeddingMatrix::validated(std::move(out));
}

CorrelationMatrix CorrelationMatrix::validated(Matrix m) {
  require(all_finite(m), ErrorKind::NonFinite,
          "correlation matrix has NaN/Inf entries");
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < m.cols; ++c) {
      const double v = m.at(r, c);
      require(v >= 0.0 && v <= 1.0, ErrorKind::OutOfRange,
              "correlation entry (" + std::to_string(r) + "," +
                  std::to_string(c) + ") = " + std::to_string(v) +
                  " outside [0,1]");
    }
  }
  return CorrelationMatrix(std::move(m));
}

CorrelationMatrix validate_correlation(Matrix raw) {
  return CorrelationMatrix::validated(std::move(raw));
}

SimilarityMatrix SimilarityMatrix::validated(Matrix m) {
  require(all_finite(m), ErrorKind::NonFinite,
          "similarity matrix has NaN/Inf entries");
  return SimilarityMatrix(std::move(m));
}

ScoreMatrix ScoreMatrix::validated(Matrix m) {
  require(all_finite(m), ErrorKind::NonFinite,
          "score matrix has NaN/Inf entries");
  for (std::size_t c = 0; c < m.cols; ++c) {
    double sum = 0.0;
    for (std::size_t r = 0; r < m.rows; ++r) {
      const double v = m.at(r, c);
      require(v >= 0.0 && v <= 1.0, ErrorKind::OutOfRange,
              "score entry outside [0,1]");
      sum += v;
    }
    require(std::abs(sum - 1.0) <= kColumnSumTolerance, ErrorKind::OutOfRange,
            "score column " + std::to_string(c) + " sums to " +
                std::to_string(sum) + ", expected 1");
  }
  return ScoreMatrix(std::move(m));
}

}  // namespace mirkit
