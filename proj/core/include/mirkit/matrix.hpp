#ifndef MIRKIT_MATRIX_HPP_
#define MIRKIT_MATRIX_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace mirkit {

// Dense row-major matrix of doubles. All internal computation is done in
// 64-bit; file interchange narrows to 32-bit (see dataio).
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;  // row-major, rows * cols entries

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  std::span<double> row(std::size_t r) { return {data.data() + r * cols, cols}; }
  std::span<const double> row(std::size_t r) const {
    return {data.data() + r * cols, cols};
  }

  bool same_shape(const Matrix& other) const {
    return rows == other.rows && cols == other.cols;
  }
};

// C = A * B
Matrix matmul_nn(const Matrix& a, const Matrix& b);
// C = A * B^T
Matrix matmul_nt(const Matrix& a, const Matrix& b);
// C = A^T * B
Matrix matmul_tn(const Matrix& a, const Matrix& b);

bool all_finite(const Matrix& m);
double row_norm(const Matrix& m, std::size_t r);

// n x d matrix whose rows are unit vectors (video or text embeddings).
// Rows are accepted within 1e-4 of unit norm so that 32-bit file payloads
// round-trip; internally normalized rows land within 1e-7.
class EmbeddingMatrix {
 public:
  static constexpr double kNormTolerance = 1e-4;

  // Validates finiteness and row norms. Throws NonFinite / ZeroRow /
  // OutOfRange.
  static EmbeddingMatrix validated(Matrix m);

  std::size_t rows() const { return m_.rows; }
  std::size_t dim() const { return m_.cols; }
  const Matrix& matrix() const { return m_; }
  std::span<const double> row(std::size_t r) const { return m_.row(r); }

 private:
  explicit EmbeddingMatrix(Matrix m) : m_(std::move(m)) {}
  Matrix m_;
};

// Normalizes every row to unit Euclidean norm. Throws ZeroRow for rows with
// norm below 1e-12 and NonFinite for NaN/Inf input.
EmbeddingMatrix l2_normalize(const Matrix& raw);

// n_text x n_video matrix of graded relevance values in [0, 1].
class CorrelationMatrix {
 public:
  static CorrelationMatrix validated(Matrix m);

  std::size_t n_text() const { return m_.rows; }
  std::size_t n_video() const { return m_.cols; }
  const Matrix& matrix() const { return m_; }
  double at(std::size_t i, std::size_t j) const { return m_.at(i, j); }

 private:
  explicit CorrelationMatrix(Matrix m) : m_(std::move(m)) {}
  Matrix m_;
};

// Range/finiteness validation for a raw correlation matrix. Throws
// OutOfRange / NonFinite.
CorrelationMatrix validate_correlation(Matrix raw);

// n_text x n_video matrix of raw inner products t_i . v_j.
class SimilarityMatrix {
 public:
  static SimilarityMatrix validated(Matrix m);  // finiteness only

  std::size_t n_text() const { return m_.rows; }
  std::size_t n_video() const { return m_.cols; }
  const Matrix& matrix() const { return m_; }
  double at(std::size_t i, std::size_t j) const { return m_.at(i, j); }

 private:
  explicit SimilarityMatrix(Matrix m) : m_(std::move(m)) {}
  Matrix m_;
};

// n_text x n_video matrix of normalized retrieval scores: entries in [0, 1],
// every column sums to 1 within 1e-6.
class ScoreMatrix {
 public:
  static constexpr double kColumnSumTolerance = 1e-6;

  static ScoreMatrix validated(Matrix m);

  std::size_t n_text() const { return m_.rows; }
  std::size_t n_video() const { return m_.cols; }
  const Matrix& matrix() const { return m_; }
  double at(std::size_t i, std::size_t j) const { return m_.at(i, j); }

 private:
  explicit ScoreMatrix(Matrix m) : m_(std::move(m)) {}
  Matrix m_;
};

}  // namespace mirkit

#endif  // MIRKIT_MATRIX_HPP_
