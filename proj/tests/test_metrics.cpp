#include <doctest.h>

#include <cmath>

#include "mirkit/error.hpp"
#include "mirkit/inference.hpp"
#include "mirkit/metrics.hpp"
#include "mirkit/sampling.hpp"

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/test_util.hpp"

using namespace mirkit;
using namespace mirkit::testing;

namespace {

CorrelationMatrix corr_from(Matrix m) {
  return validate_correlation(std::move(m));
}

// Correlation with guaranteed relevant items per row and column.
CorrelationMatrix random_relevant_corr(TestRng& rng, std::size_t n) {
  Matrix c(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t pick = rng.index(4);
      c.at(i, j) = pick == 0 ? 1.0 : (pick == 1 ? 0.5 : 0.0);
    }
    c.at(i, i) = 1.0;
  }
  return corr_from(c);
}

}  // namespace

TEST_SUITE_BEGIN("metrics");

TEST_CASE("average_precision closed forms") {
  CHECK(average_precision({1, 1, 0, 0}) == 1.0);
  CHECK(average_precision({0, 1}) == 0.5);
  CHECK(average_precision({1}) == 1.0);
}

TEST_CASE("average_precision matches exhaustive enumeration up to 6 items") {
  for (std::size_t n = 1; n <= 6; ++n) {
    for (std::size_t r = 1; r <= std::min<std::size_t>(3, n); ++r) {
      for_each_placement(n, r, [&](const std::vector<int>& rel) {
        CHECK(average_precision(rel) == ap_reference(rel));
      });
    }
  }
}

TEST_CASE("average_precision throws NoRelevant on an all-zero list") {
  CHECK(thrown_kind([] { average_precision({0, 0, 0}); }) ==
        ErrorKind::NoRelevant);
}

TEST_CASE("dcg closed forms and formula oracle") {
  CHECK(dcg({1.0, 0.0, 0.0}) == 1.0);
  CHECK(dcg({0.0, 1.0}) ==
        doctest::Approx(1.0 / std::log2(3.0)).epsilon(1e-12));
  TestRng rng(307);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> gains(8);
    for (double& g : gains) g = rng.uniform(0.0, 2.0);
    CHECK(dcg(gains) == doctest::Approx(dcg_reference(gains)).epsilon(1e-12));
  }
}

TEST_CASE("dcg rejects negative gains") {
  CHECK(thrown_kind([] { dcg({0.5, -0.1}); }) == ErrorKind::NegativeGain);
}

TEST_CASE("oracle scoring yields 100% mAP in both directions") {
  TestRng rng(311);
  const CorrelationMatrix corr = random_relevant_corr(rng, 6);
  // scores equal to the correlation rank every relevant item first
  CHECK(mean_ap(corr.matrix(), corr, Direction::text_to_video) == 100.0);
  CHECK(mean_ap(corr.matrix(), corr, Direction::video_to_text) == 100.0);
  CHECK(ndcg(corr.matrix(), corr, Direction::text_to_video) ==
        doctest::Approx(100.0).epsilon(1e-12));
  CHECK(ndcg(corr.matrix(), corr, Direction::video_to_text) ==
        doctest::Approx(100.0).epsilon(1e-12));
}

TEST_CASE("hand-built 3x3 mAP with one relevant per query") {
  // T->V: query 0 hits at rank 1, query 1 at rank 2, query 2 at rank 3.
  Matrix scores(3, 3);
  scores.data = {
      0.9, 0.5, 0.1,   // rank: 0,1,2 -> relevant 0 at rank 1
      0.8, 0.6, 0.1,   // rank: 0,1,2 -> relevant 1 at rank 2
      0.9, 0.5, 0.2,   // rank: 0,1,2 -> relevant 2 at rank 3
  };
  Matrix c(3, 3);
  c.at(0, 0) = 1.0;
  c.at(1, 1) = 1.0;
  c.at(2, 2) = 1.0;
  const double expected = 100.0 * (1.0 + 0.5 + 1.0 / 3.0) / 3.0;
  CHECK(mean_ap(scores, corr_from(c), Direction::text_to_video) ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("mean over 10000 uniform trials approaches the enumeration expectation") {
  TestRng rng(313);
  const std::size_t n = 6;
  const CorrelationMatrix corr = random_relevant_corr(rng, n);
  // expected mAP: mean over rows of E[AP] for that row's relevant count
  double expected = 0.0;
  std::size_t used = 0;
  for (std::size_t q = 0; q < n; ++q) {
    std::size_t rel = 0;
    for (std::size_t j = 0; j < n; ++j) rel += corr.at(q, j) > 0.0 ? 1 : 0;
    if (rel == 0) continue;
    expected += expected_ap_reference(n, rel);
    ++used;
  }
  expected = 100.0 * expected / static_cast<double>(used);

  double mean = 0.0;
  const int trials = 10000;
  for (int trial = 0; trial < trials; ++trial) {
    Matrix scores(n, n);
    for (double& v : scores.data) v = rng.uniform(0.0, 1.0);
    mean += mean_ap(scores, corr, Direction::text_to_video);
  }
  mean /= trials;
  CHECK(std::abs(mean - expected) <= 1.0);  // within +-1 percentage point
}

TEST_CASE("ndcg of a reversed-ideal ranking matches the formula oracle") {
  Matrix scores(1, 3);
  scores.data = {0.1, 0.2, 0.3};  // retrieved order 2,1,0
  Matrix c(1, 3);
  c.data = {1.0, 0.5, 0.0};  // ideal gains (1, 0.5, 0)
  const double dcg_rev = dcg_reference({0.0, 0.5, 1.0});
  const double idcg = dcg_reference({1.0, 0.5, 0.0});
  CHECK(ndcg(scores, corr_from(c), Direction::text_to_video) ==
        doctest::Approx(100.0 * dcg_rev / idcg).epsilon(1e-12));
}

TEST_CASE("ndcg matches an independent re-implementation on random instances") {
  TestRng rng(317);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix scores(6, 6);
    for (double& v : scores.data) v = rng.uniform(0.0, 1.0);
    const CorrelationMatrix corr = random_relevant_corr(rng, 6);
    CHECK(ndcg(scores, corr, Direction::text_to_video) ==
          doctest::Approx(ndcg_reference(scores, corr.matrix(), true))
              .epsilon(1e-10));
    CHECK(ndcg(scores, corr, Direction::video_to_text) ==
          doctest::Approx(ndcg_reference(scores, corr.matrix(), false))
              .epsilon(1e-10));
    CHECK(mean_ap(scores, corr, Direction::text_to_video) ==
          doctest::Approx(mean_ap_reference(scores, corr.matrix(), true, 0.0))
              .epsilon(1e-10));
    CHECK(mean_ap(scores, corr, Direction::video_to_text) ==
          doctest::Approx(mean_ap_reference(scores, corr.matrix(), false, 0.0))
              .epsilon(1e-10));
  }
}

TEST_CASE("evaluate fills the six-field report under oracle scoring") {
  TestRng rng(331);
  const CorrelationMatrix corr = random_relevant_corr(rng, 5);
  const RetrievalReport report = evaluate(corr.matrix(), corr);
  CHECK(report.map_v2t == 100.0);
  CHECK(report.map_t2v == 100.0);
  CHECK(report.map_avg == 100.0);
  CHECK(report.ndcg_v2t == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(report.ndcg_t2v == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(report.ndcg_avg == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(std::abs(report.map_avg - 0.5 * (report.map_v2t + report.map_t2v)) <=
        1e-9);
  CHECK(report.empty() == false);
  CHECK(report.skipped_map_t2v == 0);
}

TEST_CASE("evaluate flags an all-zero correlation as an empty report") {
  TestRng rng(337);
  Matrix scores(4, 4);
  for (double& v : scores.data) v = rng.uniform(0.0, 1.0);
  const RetrievalReport report = evaluate(scores, corr_from(Matrix(4, 4)));
  CHECK(report.empty());
  CHECK(report.skipped_map_v2t == 4);
  CHECK(report.skipped_map_t2v == 4);
  CHECK(report.skipped_ndcg_v2t == 4);
  CHECK(report.skipped_ndcg_t2v == 4);
  CHECK(report.map_avg == 0.0);
  CHECK(report.ndcg_avg == 0.0);
}

TEST_CASE("a fixed 8x8 instance matches the end-to-end pipeline oracle") {
  TestRng rng(8181);
  Matrix scores(8, 8);
  for (double& v : scores.data) v = rng.uniform(0.0, 1.0);
  const CorrelationMatrix corr = random_relevant_corr(rng, 8);
  const RetrievalReport report = evaluate(scores, corr);
  CHECK(report.map_t2v ==
        doctest::Approx(mean_ap_reference(scores, corr.matrix(), true, 0.0))
            .epsilon(1e-10));
  CHECK(report.map_v2t ==
        doctest::Approx(mean_ap_reference(scores, corr.matrix(), false, 0.0))
            .epsilon(1e-10));
  CHECK(report.ndcg_t2v ==
        doctest::Approx(ndcg_reference(scores, corr.matrix(), true))
            .epsilon(1e-10));
  CHECK(report.ndcg_v2t ==
        doctest::Approx(ndcg_reference(scores, corr.matrix(), false))
            .epsilon(1e-10));
  CHECK(report.map_avg ==
        doctest::Approx(0.5 * (report.map_v2t + report.map_t2v))
            .epsilon(1e-12));
  CHECK(report.ndcg_avg ==
        doctest::Approx(0.5 * (report.ndcg_v2t + report.ndcg_t2v))
            .epsilon(1e-12));
}

TEST_CASE("metrics are invariant under monotone score transforms") {
  TestRng rng(347);
  Matrix scores(7, 7);
  for (double& v : scores.data) v = rng.uniform(0.0, 1.0);
  const CorrelationMatrix corr = random_relevant_corr(rng, 7);
  Matrix transformed = scores;
  for (double& v : transformed.data) v = 2.0 * v + 1.0;

  for (std::size_t r = 0; r < 7; ++r) {
    CHECK(rank_row(scores, r) == rank_row(transformed, r));
  }
  for (std::size_t c = 0; c < 7; ++c) {
    CHECK(rank_col(scores, c) == rank_col(transformed, c));
  }
  CHECK(mean_ap(scores, corr, Direction::text_to_video) ==
        mean_ap(transformed, corr, Direction::text_to_video));
  CHECK(mean_ap(scores, corr, Direction::video_to_text) ==
        mean_ap(transformed, corr, Direction::video_to_text));
  CHECK(ndcg(scores, corr, Direction::text_to_video) ==
        ndcg(transformed, corr, Direction::text_to_video));
  CHECK(ndcg(scores, corr, Direction::video_to_text) ==
        ndcg(transformed, corr, Direction::video_to_text));
}

TEST_CASE("the mAP relevance cutoff is configurable") {
  Matrix scores(1, 3);
  scores.data = {0.2, 0.9, 0.1};  // ranks item 1 first, then 0, then 2
  Matrix c(1, 3);
  c.data = {1.0, 0.5, 0.0};
  const CorrelationMatrix corr = corr_from(c);
  // default cutoff 0: items 0 and 1 are relevant, found at ranks 1 and 2
  CHECK(mean_ap(scores, corr, Direction::text_to_video, 0.0) ==
        doctest::Approx(100.0 * 0.5 * (1.0 + 1.0)).epsilon(1e-12));
  // cutoff 0.5 drops the half-correlated item; the only relevant is at rank 2
  CHECK(mean_ap(scores, corr, Direction::text_to_video, 0.5) ==
        doctest::Approx(100.0 * 0.5).epsilon(1e-12));
}

TEST_CASE("per-query ndcg is 1 only for gain-sorted retrieval") {
  Matrix good(1, 4), bad(1, 4);
  good.data = {0.9, 0.6, 0.3, 0.1};
  bad.data = {0.1, 0.6, 0.3, 0.9};
  Matrix c(1, 4);
  c.data = {1.0, 0.5, 0.5, 0.0};
  const CorrelationMatrix corr = corr_from(c);
  CHECK(ndcg(good, corr, Direction::text_to_video) ==
        doctest::Approx(100.0).epsilon(1e-12));
  CHECK(ndcg(bad, corr, Direction::text_to_video) < 100.0);
}

TEST_CASE("shape mismatches are rejected") {
  Matrix scores(3, 4);
  Matrix c(3, 3);
  for (std::size_t i = 0; i < 3; ++i) c.at(i, i) = 1.0;
  CHECK(thrown_kind([&] {
          mean_ap(scores, corr_from(c), Direction::text_to_video);
        }) == ErrorKind::ShapeMismatch);
}

TEST_SUITE_END();
