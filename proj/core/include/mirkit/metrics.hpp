#ifndef MIRKIT_METRICS_HPP_
#define MIRKIT_METRICS_HPP_

#include <cstddef>
#include <vector>

#include "mirkit/inference.hpp"
#include "mirkit/matrix.hpp"

namespace mirkit {

// Six metric values in percent, one retrieval report row. Queries with no
// relevant item (mAP) or zero ideal gain (nDCG) are excluded from the means
// and counted in the skipped fields.
struct RetrievalReport {
  double map_v2t = 0.0;
  double map_t2v = 0.0;
  double map_avg = 0.0;
  double ndcg_v2t = 0.0;
  double ndcg_t2v = 0.0;
  double ndcg_avg = 0.0;
  std::size_t skipped_map_v2t = 0;
  std::size_t skipped_map_t2v = 0;
  std::size_t skipped_ndcg_v2t = 0;
  std::size_t skipped_ndcg_t2v = 0;
  std::size_t evaluated_map_v2t = 0;
  std::size_t evaluated_map_t2v = 0;
  std::size_t evaluated_ndcg_v2t = 0;
  std::size_t evaluated_ndcg_t2v = 0;

  // True when every query of every field was skipped (degenerate relevance).
  bool empty() const {
    return evaluated_map_v2t + evaluated_map_t2v + evaluated_ndcg_v2t +
               evaluated_ndcg_t2v ==
           0;
  }
};

// AP = (1/R) * sum over relevant positions p of (relevant in top p) / p.
// Throws NoRelevant when the list contains no relevant item.
double average_precision(const std::vector<int>& relevance_in_rank_order);

// DCG = sum_p gains[p] / log2(p + 1), ranks starting at 1.
double dcg(const std::vector<double>& gains_in_rank_order);

// Mean AP in percent under binary relevance c > cutoff. Ranking-only: scores
// enter through rank order alone.
double mean_ap(const Matrix& scores, const CorrelationMatrix& corr,
               Direction direction, double cutoff = 0.0);
double mean_ap(const ScoreMatrix& scores, const CorrelationMatrix& corr,
               Direction direction, double cutoff = 0.0);

// Mean nDCG in percent with the raw correlations as graded gains.
double ndcg(const Matrix& scores, const CorrelationMatrix& corr,
            Direction direction);
double ndcg(const ScoreMatrix& scores, const CorrelationMatrix& corr,
            Direction direction);

RetrievalReport evaluate(const Matrix& scores, const CorrelationMatrix& corr,
                         double map_cutoff = 0.0);
RetrievalReport evaluate(const ScoreMatrix& scores,
                         const CorrelationMatrix& corr,
                         double map_cutoff = 0.0);

}  // namespace mirkit

#endif  // MIRKIT_METRICS_HPP_
