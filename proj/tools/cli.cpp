#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "mirkit/dataio.hpp"
#include "mirkit/error.hpp"
#include "mirkit/inference.hpp"
#include "mirkit/losses.hpp"
#include "mirkit/matrix.hpp"
#include "mirkit/metrics.hpp"
#include "mirkit/sampling.hpp"
#include "mirkit/trainer.hpp"

namespace mirkit::cli {

namespace {

double round2(double v) { return std::round(v * 100.0) / 100.0; }

std::string kv(const std::string& key, const std::string& value) {
  return key + "=" + value;
}

std::string kv(const std::string& key, double value) {
  return key + "=" + format_double(value);
}

std::string kv(const std::string& key, std::size_t value) {
  return key + "=" + std::to_string(value);
}

struct ScoreArgs {
  std::string text_emb, video_emb, out;
  std::string method;
  double prior_temp = 500.0;
};

int run_score(const ScoreArgs& args) {
  const EmbeddingMatrix text = read_embeddings(args.text_emb);
  const EmbeddingMatrix video = read_embeddings(args.video_emb);
  const SimilarityMatrix sim = similarity(text, video);
  InferenceConfig config{parse_score_method(args.method), args.prior_temp};
  const ScoreMatrix scores = score(sim, config);

  std::vector<std::string> comments{
      kv("command", "score"),
      kv("text_emb", args.text_emb),
      kv("video_emb", args.video_emb),
      kv("method", score_method_name(config.method)),
      kv("prior_temp", config.prior_temperature),
  };
  write_csv_matrix(make_csv_matrix(scores.matrix(), "t", "v", comments),
                   args.out);
  std::cout << "wrote " << args.out << " (" << scores.n_text() << " texts x "
            << scores.n_video() << " videos, " << score_method_name(config.method)
            << ")\n";
  return 0;
}

struct EvalArgs {
  std::string scores, correlation, out;
  double map_cutoff = 0.0;
};

int run_eval(const EvalArgs& args) {
  const CsvMatrix scores_csv = read_csv_matrix(args.scores);
  const CsvMatrix corr_csv = read_csv_matrix(args.correlation);
  if (!all_finite(scores_csv.values)) {
    throw Error(ErrorKind::NonFinite, "scores contain NaN/Inf");
  }
  const CorrelationMatrix corr = validate_correlation(corr_csv.values);
  // Ranking-only evaluation: any monotone rescaling of a query's scores
  // yields the same report, so raw CSV values are accepted as-is.
  const RetrievalReport report =
      evaluate(scores_csv.values, corr, args.map_cutoff);

  nlohmann::ordered_json doc;
  doc["config"] = {{"command", "eval"},
                   {"scores", args.scores},
                   {"correlation", args.correlation},
                   {"map_cutoff", args.map_cutoff}};
  doc["map"] = {{"v2t", round2(report.map_v2t)},
                {"t2v", round2(report.map_t2v)},
                {"avg", round2(report.map_avg)}};
  doc["ndcg"] = {{"v2t", round2(report.ndcg_v2t)},
                 {"t2v", round2(report.ndcg_t2v)},
                 {"avg", round2(report.ndcg_avg)}};
  doc["evaluated_queries"] = {{"map_v2t", report.evaluated_map_v2t},
                              {"map_t2v", report.evaluated_map_t2v},
                              {"ndcg_v2t", report.evaluated_ndcg_v2t},
                              {"ndcg_t2v", report.evaluated_ndcg_t2v}};
  doc["skipped_queries"] = {{"map_v2t", report.skipped_map_v2t},
                            {"map_t2v", report.skipped_map_t2v},
                            {"ndcg_v2t", report.skipped_ndcg_v2t},
                            {"ndcg_t2v", report.skipped_ndcg_t2v}};
  doc["empty"] = report.empty();
  std::ofstream out(args.out);
  if (!out) throw Error(ErrorKind::IoError, "cannot open " + args.out);
  out << doc.dump(2) << '\n';

  char line[128];
  std::snprintf(line, sizeof(line), "mAP%%   V->T %.2f  T->V %.2f  Avg %.2f",
                report.map_v2t, report.map_t2v, report.map_avg);
  std::cout << line << '\n';
  std::snprintf(line, sizeof(line), "nDCG%%  V->T %.2f  T->V %.2f  Avg %.2f",
                report.ndcg_v2t, report.ndcg_t2v, report.ndcg_avg);
  std::cout << line << '\n';
  const std::size_t skipped = report.skipped_map_v2t + report.skipped_map_t2v +
                              report.skipped_ndcg_v2t + report.skipped_ndcg_t2v;
  if (report.empty()) {
    std::cout << "report is empty: every query was skipped\n";
  } else if (skipped > 0) {
    std::cout << "skipped queries: " << skipped << " (see " << args.out
              << ")\n";
  }
  return 0;
}

struct LossArgs {
  std::string video_emb, text_emb, loss;
  std::string meta, correlation;
  std::optional<double> tau, gamma, threshold;
  bool grad_check = false;
};

// Central finite differences of the loss value over every embedding entry.
double grad_check_max_rel_err(const Matrix& video, const Matrix& text,
                              const LossResult& analytic,
                              const std::function<double(const Matrix&, const Matrix&)>& value_at) {
  const double step = 1e-5;
  double worst = 0.0;
  const auto probe = [&](const Matrix& base, bool is_video,
                         const Matrix& grad) {
    for (std::size_t i = 0; i < base.data.size(); ++i) {
      Matrix lo = base;
      Matrix hi = base;
      lo.data[i] -= step;
      hi.data[i] += step;
      const double fd = is_video
                            ? (value_at(hi, text) - value_at(lo, text)) / (2 * step)
                            : (value_at(video, hi) - value_at(video, lo)) / (2 * step);
      const double a = grad.data[i];
      const double denom = std::max({std::abs(a), std::abs(fd), 1e-6});
      worst = std::max(worst, std::abs(a - fd) / denom);
    }
  };
  probe(video, true, analytic.grad_video);
  probe(text, false, analytic.grad_text);
  return worst;
}

int run_loss(const LossArgs& args) {
  const LossKind kind = parse_loss_kind(args.loss);
  LossConfig config = LossConfig::defaults_for(kind);
  if (args.tau) config.tau = *args.tau;
  if (args.gamma) config.gamma = *args.gamma;
  if (args.threshold) config.positive_threshold = *args.threshold;
  config.validate();

  const EmbeddingMatrix video = read_embeddings(args.video_emb);
  const EmbeddingMatrix text = read_embeddings(args.text_emb);

  std::vector<ClipMeta> metas;
  if (!args.meta.empty()) metas = parse_metadata(args.meta);
  std::optional<CorrelationMatrix> corr;
  if (!args.correlation.empty()) {
    corr = validate_correlation(read_csv_matrix(args.correlation).values);
  } else if ((kind == LossKind::mimm || kind == LossKind::ada_mimm) &&
             !metas.empty()) {
    corr = compute_correlation(metas, metas);
  }

  // Loss value as a function of raw embedding matrices, used for both the
  // reported value and the optional finite-difference check.
  std::function<LossResult(const Matrix&, const Matrix&)> eval_at;
  switch (kind) {
    case LossKind::infonce:
      eval_at = [&](const Matrix& v, const Matrix& t) {
        return info_nce(EmbeddingMatrix::validated(v),
                        EmbeddingMatrix::validated(t), config.tau);
      };
      break;
    case LossKind::egonce:
      if (metas.empty()) {
        throw Error(ErrorKind::InvalidArgument,
                    "egonce needs --meta for positive sets");
      }
      eval_at = [&](const Matrix& v, const Matrix& t) {
        TrainingBatch batch = make_training_batch(
            EmbeddingMatrix::validated(v), EmbeddingMatrix::validated(t), metas);
        return ego_nce(batch, config.tau);
      };
      break;
    case LossKind::mimm:
    case LossKind::ada_mimm:
      if (!corr) {
        throw Error(ErrorKind::InvalidArgument,
                    "mimm/ada-mimm need --correlation or --meta");
      }
      eval_at = [&, kind](const Matrix& v, const Matrix& t) {
        return kind == LossKind::mimm
                   ? mi_mm(EmbeddingMatrix::validated(v),
                           EmbeddingMatrix::validated(t), *corr, config.gamma,
                           config.positive_threshold)
                   : adaptive_mi_mm(EmbeddingMatrix::validated(v),
                                    EmbeddingMatrix::validated(t), *corr,
                                    config.gamma, config.positive_threshold);
      };
      break;
  }

  const LossResult result = eval_at(video.matrix(), text.matrix());
  std::cout << "# " << kv("command", "loss") << '\n';
  std::cout << "# " << kv("loss", loss_kind_name(kind)) << '\n';
  std::cout << "# " << kv("video_emb", args.video_emb) << '\n';
  std::cout << "# " << kv("text_emb", args.text_emb) << '\n';
  if (!args.meta.empty()) std::cout << "# " << kv("meta", args.meta) << '\n';
  if (!args.correlation.empty()) {
    std::cout << "# " << kv("correlation", args.correlation) << '\n';
  }
  std::cout << "# " << kv("tau", config.tau) << '\n';
  std::cout << "# " << kv("gamma", config.gamma) << '\n';
  std::cout << "# " << kv("threshold", config.positive_threshold) << '\n';
  if (args.grad_check) {
    const double err = grad_check_max_rel_err(
        video.matrix(), text.matrix(), result,
        [&](const Matrix& v, const Matrix& t) { return eval_at(v, t).value; });
    std::cout << "# " << kv("grad_check_max_rel_err", err) << '\n';
  }
  std::cout << format_double(result.value) << '\n';
  return 0;
}

struct BatchArgs {
  std::string meta, pool, out;
  double window = 60.0;
  std::uint64_t seed = 0;
};

int run_batch(const BatchArgs& args) {
  const std::vector<ClipMeta> metas = parse_metadata(args.meta);
  const std::vector<ClipMeta> pool = parse_metadata(args.pool);
  const PositiveSets positives = build_positive_sets(metas);
  const ScenePairing pairing =
      sample_scene_negatives(metas, pool, args.window, args.seed);

  nlohmann::ordered_json doc;
  doc["config"] = {{"command", "batch"},
                   {"meta", args.meta},
                   {"pool", args.pool},
                   {"window", args.window},
                   {"seed", args.seed}};
  doc["positive_sets"] = positives.sets;
  nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < pairing.size(); ++i) {
    nlohmann::ordered_json entry;
    entry["index"] = i;
    entry["clip_id"] = metas[i].clip_id;
    if (pairing[i].has_value()) {
      entry["pool_index"] = *pairing[i];
      entry["pool_clip_id"] = pool[*pairing[i]].clip_id;
    } else {
      entry["pool_index"] = nullptr;
    }
    pairs.push_back(std::move(entry));
  }
  doc["pairing"] = std::move(pairs);
  std::ofstream out(args.out);
  if (!out) throw Error(ErrorKind::IoError, "cannot open " + args.out);
  out << doc.dump(2) << '\n';
  std::size_t present = 0;
  for (const auto& p : pairing) present += p.has_value() ? 1 : 0;
  std::cout << "wrote " << args.out << " (" << pairing.size() << " clips, "
            << present << " scene negatives)\n";
  return 0;
}

struct CorrelationArgs {
  std::string meta_a, meta_b, out;
};

int run_correlation(const CorrelationArgs& args) {
  const std::vector<ClipMeta> a = parse_metadata(args.meta_a);
  const std::vector<ClipMeta> b = parse_metadata(args.meta_b);
  const CorrelationMatrix corr = compute_correlation(a, b);
  std::vector<std::string> comments{
      kv("command", "correlation"),
      kv("meta_a", args.meta_a),
      kv("meta_b", args.meta_b),
  };
  write_csv_matrix(make_csv_matrix(corr.matrix(), "t", "v", comments),
                   args.out);
  std::cout << "wrote " << args.out << " (" << corr.n_text() << " x "
            << corr.n_video() << ")\n";
  return 0;
}

struct TrainArgs {
  std::string features_video, features_text, meta, loss;
  std::string config_path, out_head, out_curve;
};

TrainConfig load_train_config(const std::string& path, LossKind kind,
                              double* val_fraction) {
  TrainConfig config;
  config.loss_kind = kind;
  config.gamma = LossConfig::defaults_for(kind).gamma;
  if (path.empty()) return config;
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::BadType,
                path + ": malformed JSON config: " + e.what());
  }
  for (const auto& [key, value] : doc.items()) {
    if (key == "learning_rate") config.learning_rate = value.get<double>();
    else if (key == "epochs") config.epochs = value.get<std::size_t>();
    else if (key == "batch_size") config.batch_size = value.get<std::size_t>();
    else if (key == "seed") config.seed = value.get<std::uint64_t>();
    else if (key == "proj_dim") config.proj_dim = value.get<std::size_t>();
    else if (key == "tau") config.tau = value.get<double>();
    else if (key == "gamma") config.gamma = value.get<double>();
    else if (key == "positive_threshold") config.positive_threshold = value.get<double>();
    else if (key == "scene_window") config.scene_window = value.get<double>();
    else if (key == "val_fraction") *val_fraction = value.get<double>();
    else throw Error(ErrorKind::InvalidArgument,
                     path + ": unknown config key '" + key + "'");
  }
  return config;
}

int run_train(const TrainArgs& args) {
  const LossKind kind = parse_loss_kind(args.loss);
  double val_fraction = 0.2;
  const TrainConfig config =
      load_train_config(args.config_path, kind, &val_fraction);
  config.validate();
  if (!(val_fraction > 0.0 && val_fraction < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "val_fraction must lie in (0,1)");
  }

  FeatureSet all;
  all.video_features = read_matrix(args.features_video);
  all.text_features = read_matrix(args.features_text);
  all.metas = parse_metadata(args.meta);
  if (all.video_features.rows != all.metas.size() ||
      all.text_features.rows != all.metas.size()) {
    throw Error(ErrorKind::ShapeMismatch,
                "feature rows and metadata lines disagree");
  }

  // Deterministic order-based split: last ceil(f*n) rows validate.
  const std::size_t n = all.size();
  const std::size_t n_val = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(val_fraction * n)));
  if (n_val >= n - 1) {
    throw Error(ErrorKind::InvalidArgument,
                "val_fraction leaves fewer than 2 training samples");
  }
  std::vector<std::size_t> train_rows(n - n_val), val_rows(n_val);
  for (std::size_t i = 0; i < n - n_val; ++i) train_rows[i] = i;
  for (std::size_t i = 0; i < n_val; ++i) val_rows[i] = n - n_val + i;
  const FeatureSet train_split = all.gather(train_rows);
  const FeatureSet val_split = all.gather(val_rows);

  const TrainResult result = train(train_split, val_split, config);
  write_head(result.head, args.out_head);

  std::ofstream out(args.out_curve);
  if (!out) throw Error(ErrorKind::IoError, "cannot open " + args.out_curve);
  out << "# " << kv("command", "train") << '\n';
  out << "# " << kv("optimizer", "sgd") << '\n';  // plain gradient descent
  out << "# " << kv("loss", loss_kind_name(kind)) << '\n';
  out << "# " << kv("features_video", args.features_video) << '\n';
  out << "# " << kv("features_text", args.features_text) << '\n';
  out << "# " << kv("meta", args.meta) << '\n';
  out << "# " << kv("learning_rate", config.learning_rate) << '\n';
  out << "# " << kv("epochs", config.epochs) << '\n';
  out << "# " << kv("batch_size", config.batch_size) << '\n';
  out << "# " << kv("seed", static_cast<std::size_t>(config.seed)) << '\n';
  out << "# " << kv("proj_dim", config.proj_dim) << '\n';
  out << "# " << kv("tau", config.tau) << '\n';
  out << "# " << kv("gamma", config.gamma) << '\n';
  out << "# " << kv("threshold", config.positive_threshold) << '\n';
  out << "# " << kv("scene_window", config.scene_window) << '\n';
  out << "# " << kv("val_fraction", val_fraction) << '\n';
  out << "# " << kv("n_train", train_split.size()) << '\n';
  out << "# " << kv("n_val", val_split.size()) << '\n';
  out << "epoch,loss,map_avg,ndcg_avg\n";
  for (const EpochRecord& rec : result.curve) {
    out << rec.epoch << ',' << format_double(rec.train_loss) << ','
        << format_double(rec.val_map_avg) << ','
        << format_double(rec.val_ndcg_avg) << '\n';
  }
  if (!out) throw Error(ErrorKind::IoError, "short write to " + args.out_curve);

  const EpochRecord& last = result.curve.back();
  char line[160];
  std::snprintf(line, sizeof(line),
                "final epoch %zu: loss %s, val mAP %.2f, val nDCG %.2f",
                last.epoch, format_double(last.train_loss).c_str(),
                last.val_map_avg, last.val_ndcg_avg);
  std::cout << line << '\n';
  std::cout << "wrote " << args.out_head << " and " << args.out_curve << '\n';
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"multi-instance retrieval toolkit: contrastive/margin losses, "
               "dual-softmax scoring, mAP/nDCG evaluation, projection-head "
               "fine-tuning"};
  app.require_subcommand(1);

  ScoreArgs score_args;
  CLI::App* score_cmd =
      app.add_subcommand("score", "similarity -> normalized score matrix CSV");
  score_cmd->add_option("--text-emb", score_args.text_emb, "text embeddings (MIRK)")
      ->required();
  score_cmd->add_option("--video-emb", score_args.video_emb, "video embeddings (MIRK)")
      ->required();
  score_cmd->add_option("--method", score_args.method, "plain | dual-softmax")
      ->required();
  score_cmd->add_option("--prior-temp", score_args.prior_temp,
                        "dual-softmax prior temperature");
  score_cmd->add_option("--out", score_args.out, "output CSV path")->required();

  EvalArgs eval_args;
  CLI::App* eval_cmd =
      app.add_subcommand("eval", "mAP/nDCG report from scores + correlation");
  eval_cmd->add_option("--scores", eval_args.scores, "score matrix CSV")
      ->required();
  eval_cmd->add_option("--correlation", eval_args.correlation,
                       "correlation matrix CSV")
      ->required();
  eval_cmd->add_option("--map-cutoff", eval_args.map_cutoff,
                       "binary relevance cutoff: relevant iff c > cutoff");
  eval_cmd->add_option("--out", eval_args.out, "report JSON path")->required();

  LossArgs loss_args;
  CLI::App* loss_cmd = app.add_subcommand("loss", "evaluate a loss on embeddings");
  loss_cmd->add_option("--video-emb", loss_args.video_emb, "video embeddings (MIRK)")
      ->required();
  loss_cmd->add_option("--text-emb", loss_args.text_emb, "text embeddings (MIRK)")
      ->required();
  loss_cmd->add_option("--loss", loss_args.loss,
                       "infonce | egonce | mimm | ada-mimm")
      ->required();
  loss_cmd->add_option("--meta", loss_args.meta, "metadata JSONL");
  loss_cmd->add_option("--correlation", loss_args.correlation,
                       "correlation matrix CSV");
  double tau_opt = 0.0, gamma_opt = 0.0, threshold_opt = 0.0;
  CLI::Option* tau_flag = loss_cmd->add_option("--tau", tau_opt, "temperature");
  CLI::Option* gamma_flag = loss_cmd->add_option("--gamma", gamma_opt, "margin");
  CLI::Option* threshold_flag =
      loss_cmd->add_option("--threshold", threshold_opt, "positive threshold");
  loss_cmd->add_flag("--grad-check", loss_args.grad_check,
                     "compare analytic gradients against finite differences");

  BatchArgs batch_args;
  CLI::App* batch_cmd = app.add_subcommand(
      "batch", "positive sets + scene-negative pairing document");
  batch_cmd->add_option("--meta", batch_args.meta, "batch metadata JSONL")
      ->required();
  batch_cmd->add_option("--pool", batch_args.pool, "candidate pool JSONL")
      ->required();
  batch_cmd->add_option("--window", batch_args.window,
                        "adjacency window, seconds");
  batch_cmd->add_option("--seed", batch_args.seed, "sampling seed")->required();
  batch_cmd->add_option("--out", batch_args.out, "output JSON path")->required();

  CorrelationArgs corr_args;
  CLI::App* corr_cmd =
      app.add_subcommand("correlation", "class-indicator correlation CSV");
  corr_cmd->add_option("--meta-a", corr_args.meta_a, "row metadata JSONL")
      ->required();
  corr_cmd->add_option("--meta-b", corr_args.meta_b, "column metadata JSONL")
      ->required();
  corr_cmd->add_option("--out", corr_args.out, "output CSV path")->required();

  TrainArgs train_args;
  CLI::App* train_cmd =
      app.add_subcommand("train", "fine-tune projection heads over features");
  train_cmd->add_option("--features-video", train_args.features_video,
                        "video features (MIRK)")
      ->required();
  train_cmd->add_option("--features-text", train_args.features_text,
                        "text features (MIRK)")
      ->required();
  train_cmd->add_option("--meta", train_args.meta, "metadata JSONL")->required();
  train_cmd->add_option("--loss", train_args.loss,
                        "infonce | egonce | mimm | ada-mimm")
      ->required();
  train_cmd->add_option("--config", train_args.config_path,
                        "training config JSON");
  train_cmd->add_option("--out-head", train_args.out_head, "head dump path")
      ->required();
  train_cmd->add_option("--out-curve", train_args.out_curve, "curve CSV path")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*score_cmd) return run_score(score_args);
    if (*eval_cmd) return run_eval(eval_args);
    if (*loss_cmd) {
      if (tau_flag->count() > 0) loss_args.tau = tau_opt;
      if (gamma_flag->count() > 0) loss_args.gamma = gamma_opt;
      if (threshold_flag->count() > 0) loss_args.threshold = threshold_opt;
      return run_loss(loss_args);
    }
    if (*batch_cmd) return run_batch(batch_args);
    if (*corr_cmd) return run_correlation(corr_args);
    if (*train_cmd) return run_train(train_args);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return error_exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

int run(const std::vector<std::string>& args) {
  std::vector<std::string> full;
  full.reserve(args.size() + 1);
  full.push_back("mirkit");
  full.insert(full.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  argv.reserve(full.size());
  for (const std::string& a : full) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace mirkit::cli
