#include <doctest.h>

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "cli.hpp"
#include "mirkit/dataio.hpp"
#include "mirkit/sampling.hpp"

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/test_util.hpp"

using namespace mirkit;
using namespace mirkit::testing;

namespace {

int run_cli(const std::vector<std::string>& args) {
  return mirkit::cli::run(args);
}

nlohmann::json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  REQUIRE(in);
  return nlohmann::json::parse(in);
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("eval on oracle scoring reports six 100.00 fields") {
  TempDir dir;
  TestRng rng(601);
  const std::vector<ClipMeta> metas = random_metas(rng, 6);
  const CorrelationMatrix corr = compute_correlation(metas, metas);
  const auto corr_csv = dir.file("corr.csv");
  write_csv_matrix(make_csv_matrix(corr.matrix(), "t", "v"), corr_csv);
  const auto report_path = dir.file("report.json");

  CaptureStdout capture;
  const int rc = run_cli({"eval", "--scores", corr_csv.string(),
                          "--correlation", corr_csv.string(), "--out",
                          report_path.string()});
  REQUIRE(rc == 0);
  CHECK(capture.str().find("100.00") != std::string::npos);

  const nlohmann::json report = load_json(report_path);
  CHECK(report["map"]["v2t"] == 100.0);
  CHECK(report["map"]["t2v"] == 100.0);
  CHECK(report["map"]["avg"] == 100.0);
  CHECK(report["ndcg"]["v2t"] == 100.0);
  CHECK(report["ndcg"]["t2v"] == 100.0);
  CHECK(report["ndcg"]["avg"] == 100.0);
  CHECK(report["empty"] == false);
  CHECK(report["config"]["map_cutoff"] == 0.0);
  CHECK(report["skipped_queries"]["map_v2t"] == 0);
}

TEST_CASE("loss mimm on the equal-similarity two-sample fixture prints 0.4") {
  TempDir dir;
  Matrix video(2, 2), text(2, 2), corr(2, 2);
  video.at(0, 0) = 1.0;
  video.at(1, 0) = 1.0;
  text.at(0, 1) = 1.0;
  text.at(1, 1) = 1.0;
  corr.data = {1.0, 0.0, 1.0, 1.0};
  write_matrix(video, dir.file("v.bin"));
  write_matrix(text, dir.file("t.bin"));
  write_csv_matrix(make_csv_matrix(corr, "t", "v"), dir.file("corr.csv"));

  CaptureStdout capture;
  const int rc = run_cli({"loss", "--video-emb", dir.file("v.bin").string(),
                          "--text-emb", dir.file("t.bin").string(),
                          "--correlation", dir.file("corr.csv").string(),
                          "--loss", "mimm"});
  REQUIRE(rc == 0);
  CHECK(last_line(capture.str()) == "0.4");
  CHECK(capture.str().find("gamma=0.2") != std::string::npos);
  CHECK(capture.str().find("threshold=0.1") != std::string::npos);
}

TEST_CASE("loss --grad-check reports a tiny max relative error") {
  TempDir dir;
  TestRng rng(607);
  write_embeddings(random_embeddings(rng, 4, 6), dir.file("v.bin"));
  write_embeddings(random_embeddings(rng, 4, 6), dir.file("t.bin"));

  CaptureStdout capture;
  const int rc = run_cli({"loss", "--video-emb", dir.file("v.bin").string(),
                          "--text-emb", dir.file("t.bin").string(), "--loss",
                          "infonce", "--tau", "0.5", "--grad-check"});
  REQUIRE(rc == 0);
  const std::string out = capture.str();
  const auto pos = out.find("grad_check_max_rel_err=");
  REQUIRE(pos != std::string::npos);
  const double err = std::stod(out.substr(pos + 23));
  CHECK(err <= 1e-4);
}

TEST_CASE("score --method dual-softmax matches the pipeline oracle") {
  TempDir dir;
  TestRng rng(613);
  write_embeddings(random_embeddings(rng, 5, 8), dir.file("t.bin"));
  write_embeddings(random_embeddings(rng, 7, 8), dir.file("v.bin"));
  const auto out_csv = dir.file("scores.csv");

  CaptureStdout capture;
  const int rc = run_cli({"score", "--text-emb", dir.file("t.bin").string(),
                          "--video-emb", dir.file("v.bin").string(),
                          "--method", "dual-softmax", "--out",
                          out_csv.string()});
  REQUIRE(rc == 0);

  // oracle path from the 32-bit-rounded files
  const Matrix text = read_matrix(dir.file("t.bin"));
  const Matrix video = read_matrix(dir.file("v.bin"));
  const Matrix expected =
      dual_softmax_reference(naive_similarity(text, video), 500.0);

  const CsvMatrix written = read_csv_matrix(out_csv);
  REQUIRE(written.values.rows == 5);
  REQUIRE(written.values.cols == 7);
  for (std::size_t i = 0; i < expected.data.size(); ++i) {
    CHECK(std::abs(written.values.data[i] - expected.data[i]) <= 1e-6);
  }
  // config echo embedded in the artifact
  bool has_method = false;
  for (const std::string& c : written.comments) {
    has_method = has_method || c.find("method=dual-softmax") != std::string::npos;
  }
  CHECK(has_method);
}

TEST_CASE("batch emits positive sets and the seeded pairing") {
  TempDir dir;
  TestRng rng(617);
  const std::vector<ClipMeta> metas = random_metas(rng, 5);
  const std::vector<ClipMeta> pool = random_metas(rng, 20);
  write_metadata(metas, dir.file("meta.jsonl"));
  write_metadata(pool, dir.file("pool.jsonl"));
  const auto out = dir.file("batch.json");

  CaptureStdout capture;
  const int rc = run_cli({"batch", "--meta", dir.file("meta.jsonl").string(),
                          "--pool", dir.file("pool.jsonl").string(),
                          "--window", "60", "--seed", "33", "--out",
                          out.string()});
  REQUIRE(rc == 0);

  const nlohmann::json doc = load_json(out);
  const PositiveSets expected_sets = build_positive_sets(metas);
  const ScenePairing expected_pairing =
      sample_scene_negatives(metas, pool, 60.0, 33);
  REQUIRE(doc["positive_sets"].size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(doc["positive_sets"][i].get<std::vector<std::size_t>>() ==
          expected_sets.sets[i]);
    const auto& entry = doc["pairing"][i];
    if (expected_pairing[i].has_value()) {
      CHECK(entry["pool_index"].get<std::size_t>() == *expected_pairing[i]);
    } else {
      CHECK(entry["pool_index"].is_null());
    }
  }
  CHECK(doc["config"]["seed"] == 33);
  CHECK(doc["config"]["window"] == 60.0);
}

TEST_CASE("correlation subcommand writes the indicator matrix") {
  TempDir dir;
  TestRng rng(619);
  const std::vector<ClipMeta> a = random_metas(rng, 4);
  const std::vector<ClipMeta> b = random_metas(rng, 6);
  write_metadata(a, dir.file("a.jsonl"));
  write_metadata(b, dir.file("b.jsonl"));
  const auto out = dir.file("corr.csv");

  CaptureStdout capture;
  const int rc = run_cli({"correlation", "--meta-a", dir.file("a.jsonl").string(),
                          "--meta-b", dir.file("b.jsonl").string(), "--out",
                          out.string()});
  REQUIRE(rc == 0);
  const CsvMatrix written = read_csv_matrix(out);
  const CorrelationMatrix expected = compute_correlation(a, b);
  CHECK(written.values.data == expected.matrix().data);
}

TEST_CASE("train writes a reproducible head and curve") {
  TempDir dir;
  TestRng rng(631);
  const std::size_t n = 12, d_in = 4;
  write_matrix(random_matrix(rng, n, d_in), dir.file("vf.bin"));
  write_matrix(random_matrix(rng, n, d_in), dir.file("tf.bin"));
  write_metadata(distinct_tag_metas(n), dir.file("meta.jsonl"));
  {
    std::ofstream cfg(dir.file("config.json"));
    cfg << R"({"learning_rate": 0.001, "epochs": 3, "seed": 5, "tau": 0.5})";
  }

  const std::vector<std::string> args{
      "train",
      "--features-video", dir.file("vf.bin").string(),
      "--features-text", dir.file("tf.bin").string(),
      "--meta", dir.file("meta.jsonl").string(),
      "--loss", "infonce",
      "--config", dir.file("config.json").string(),
      "--out-head", dir.file("head.bin").string(),
      "--out-curve", dir.file("curve.csv").string()};
  {
    CaptureStdout capture;
    REQUIRE(run_cli(args) == 0);
    CHECK(capture.str().find("final epoch 2") != std::string::npos);
  }

  const ProjectionHead head = read_head(dir.file("head.bin"));
  CHECK(head.weight_video.rows == d_in);
  CHECK(head.weight_video.cols == d_in);

  std::ifstream curve(dir.file("curve.csv"));
  std::string line;
  std::size_t comments = 0, data_rows = 0;
  bool header_seen = false;
  while (std::getline(curve, line)) {
    if (line.rfind("# ", 0) == 0) {
      ++comments;
    } else if (!header_seen) {
      CHECK(line == "epoch,loss,map_avg,ndcg_avg");
      header_seen = true;
    } else if (!line.empty()) {
      ++data_rows;
    }
  }
  CHECK(comments >= 10);  // full config echo
  CHECK(data_rows == 3);

  // bit-deterministic rerun
  std::vector<std::string> args2 = args;
  args2[args2.size() - 3] = dir.file("head2.bin").string();
  args2[args2.size() - 1] = dir.file("curve2.csv").string();
  {
    CaptureStdout capture;
    REQUIRE(run_cli(args2) == 0);
  }
  std::ifstream h1(dir.file("head.bin"), std::ios::binary);
  std::ifstream h2(dir.file("head2.bin"), std::ios::binary);
  const std::string b1((std::istreambuf_iterator<char>(h1)),
                       std::istreambuf_iterator<char>());
  const std::string b2((std::istreambuf_iterator<char>(h2)),
                       std::istreambuf_iterator<char>());
  CHECK(b1 == b2);
}

TEST_CASE("exit codes distinguish usage, data, and numeric failures") {
  TempDir dir;
  CaptureStdout capture;

  // usage: no subcommand
  CHECK(run_cli({}) == 1);
  // usage: non-positive tau
  TestRng rng(641);
  write_embeddings(random_embeddings(rng, 3, 4), dir.file("e.bin"));
  CHECK(run_cli({"loss", "--video-emb", dir.file("e.bin").string(),
                 "--text-emb", dir.file("e.bin").string(), "--loss", "infonce",
                 "--tau", "0"}) == 1);
  // usage: egonce without metadata
  CHECK(run_cli({"loss", "--video-emb", dir.file("e.bin").string(),
                 "--text-emb", dir.file("e.bin").string(), "--loss",
                 "egonce"}) == 1);
  // data: missing file
  CHECK(run_cli({"eval", "--scores", dir.file("nope.csv").string(),
                 "--correlation", dir.file("nope.csv").string(), "--out",
                 dir.file("r.json").string()}) == 2);
  // numeric: NaN scores
  const auto nan_csv = dir.file("nan.csv");
  {
    std::ofstream out(nan_csv);
    out << ",v0\nt0,nan\n";
  }
  const auto ok_corr = dir.file("okcorr.csv");
  Matrix c(1, 1);
  c.at(0, 0) = 1.0;
  write_csv_matrix(make_csv_matrix(c, "t", "v"), ok_corr);
  CHECK(run_cli({"eval", "--scores", nan_csv.string(), "--correlation",
                 ok_corr.string(), "--out", dir.file("r.json").string()}) == 3);
}

TEST_SUITE_END();
