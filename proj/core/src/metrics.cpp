#include "mirkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "mirkit/error.hpp"

namespace mirkit {

namespace {

struct QueryMean {
  double sum = 0.0;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;

  double percent() const {
    return evaluated == 0 ? 0.0
                          : 100.0 * sum / static_cast<double>(evaluated);
  }
};

void check_inputs(const Matrix& scores, const CorrelationMatrix& corr) {
  if (scores.rows != corr.n_text() || scores.cols != corr.n_video()) {
    throw Error(ErrorKind::ShapeMismatch,
                "score and correlation shapes disagree");
  }
  if (!all_finite(scores)) {
    throw Error(ErrorKind::NonFinite, "scores contain NaN/Inf");
  }
}

// Iterates queries of one direction: for T->V the queries are text rows and
// the candidates are videos; for V->T the queries are video columns. `gain`
// receives (query, candidate).
template <typename PerQuery>
void for_each_query(const Matrix& scores, Direction direction,
                    PerQuery&& per_query) {
  if (direction == Direction::text_to_video) {
    for (std::size_t q = 0; q < scores.rows; ++q) {
      per_query(q, rank_row(scores, q));
    }
  } else {
    for (std::size_t q = 0; q < scores.cols; ++q) {
      per_query(q, rank_col(scores, q));
    }
  }
}

double corr_gain(const CorrelationMatrix& corr, Direction direction,
                 std::size_t query, std::size_t candidate) {
  return direction == Direction::text_to_video ? corr.at(query, candidate)
                                               : corr.at(candidate, query);
}

QueryMean mean_ap_detail(const Matrix& scores, const CorrelationMatrix& corr,
                         Direction direction, double cutoff) {
  check_inputs(scores, corr);
  QueryMean acc;
  for_each_query(scores, direction,
                 [&](std::size_t q, const std::vector<std::size_t>& order) {
                   std::vector<int> rel(order.size());
                   bool any = false;
                   for (std::size_t p = 0; p < order.size(); ++p) {
                     rel[p] = corr_gain(corr, direction, q, order[p]) > cutoff;
                     any = any || rel[p] != 0;
                   }
                   if (!any) {
                     ++acc.skipped;
                     return;
                   }
                   acc.sum += average_precision(rel);
                   ++acc.evaluated;
                 });
  return acc;
}

QueryMean ndcg_detail(const Matrix& scores, const CorrelationMatrix& corr,
                      Direction direction) {
  check_inputs(scores, corr);
  QueryMean acc;
  for_each_query(scores, direction,
                 [&](std::size_t q, const std::vector<std::size_t>& order) {
                   std::vector<double> gains(order.size());
                   for (std::size_t p = 0; p < order.size(); ++p) {
                     gains[p] = corr_gain(corr, direction, q, order[p]);
                   }
                   std::vector<double> ideal = gains;
                   std::sort(ideal.begin(), ideal.end(), std::greater<>());
                   const double idcg = dcg(ideal);
                   if (idcg <= 0.0) {
                     ++acc.skipped;
                     return;
                   }
                   acc.sum += dcg(gains) / idcg;
                   ++acc.evaluated;
                 });
  return acc;
}

}  // namespace

double average_precision(const std::vector<int>& relevance_in_rank_order) {
  if (relevance_in_rank_order.empty()) {
    throw Error(ErrorKind::InvalidArgument, "average_precision: empty ranking");
  }
  double hits = 0.0;
  double sum = 0.0;
  for (std::size_t p = 0; p < relevance_in_rank_order.size(); ++p) {
    if (relevance_in_rank_order[p] != 0) {
      hits += 1.0;
      sum += hits / static_cast<double>(p + 1);
    }
  }
  if (hits == 0.0) {
    throw Error(ErrorKind::NoRelevant,
                "average_precision: no relevant item in ranking");
  }
  return sum / hits;
}

double dcg(const std::vector<double>& gains_in_rank_order) {
  if (gains_in_rank_order.empty()) {
    throw Error(ErrorKind::InvalidArgument, "dcg: empty gain list");
  }
  double sum = 0.0;
  for (std::size_t p = 0; p < gains_in_rank_order.size(); ++p) {
    const double g = gains_in_rank_order[p];
    if (g < 0.0) {
      throw Error(ErrorKind::NegativeGain, "dcg: negative gain");
    }
    sum += g / std::log2(static_cast<double>(p + 2));
  }
  return sum;
}

double mean_ap(const Matrix& scores, const CorrelationMatrix& corr,
               Direction direction, double cutoff) {
  return mean_ap_detail(scores, corr, direction, cutoff).percent();
}

double mean_ap(const ScoreMatrix& scores, const CorrelationMatrix& corr,
               Direction direction, double cutoff) {
  return mean_ap(scores.matrix(), corr, direction, cutoff);
}

double ndcg(const Matrix& scores, const CorrelationMatrix& corr,
            Direction direction) {
  return ndcg_detail(scores, corr, direction).percent();
}

double ndcg(const ScoreMatrix& scores, const CorrelationMatrix& corr,
            Direction direction) {
  return ndcg(scores.matrix(), corr, direction);
}

RetrievalReport evaluate(const Matrix& scores, const CorrelationMatrix& corr,
                         double map_cutoff) {
  RetrievalReport report;
  const QueryMean map_v2t =
      mean_ap_detail(scores, corr, Direction::video_to_text, map_cutoff);
  const QueryMean map_t2v =
      mean_ap_detail(scores, corr, Direction::text_to_video, map_cutoff);
  const QueryMean ndcg_v2t =
      ndcg_detail(scores, corr, Direction::video_to_text);
  const QueryMean ndcg_t2v =
      ndcg_detail(scores, corr, Direction::text_to_video);
  report.map_v2t = map_v2t.percent();
  report.map_t2v = map_t2v.percent();
  report.map_avg = 0.5 * (report.map_v2t + report.map_t2v);
  report.ndcg_v2t = ndcg_v2t.percent();
  report.ndcg_t2v = ndcg_t2v.percent();
  report.ndcg_avg = 0.5 * (report.ndcg_v2t + report.ndcg_t2v);
  report.skipped_map_v2t = map_v2t.skipped;
  report.skipped_map_t2v = map_t2v.skipped;
  report.skipped_ndcg_v2t = ndcg_v2t.skipped;
  report.skipped_ndcg_t2v = ndcg_t2v.skipped;
  report.evaluated_map_v2t = map_v2t.evaluated;
  report.evaluated_map_t2v = map_t2v.evaluated;
  report.evaluated_ndcg_v2t = ndcg_v2t.evaluated;
  report.evaluated_ndcg_t2v = ndcg_t2v.evaluated;
  return report;
}

RetrievalReport evaluate(const ScoreMatrix& scores,
                         const CorrelationMatrix& corr, double map_cutoff) {
  return evaluate(scores.matrix(), corr, map_cutoff);
}

}  // namespace mirkit
