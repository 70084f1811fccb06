// Demonstrates how feature quality drives head fine-tuning speed: cleanly
// clustered input features (the stand-in for strong pretrained encoders)
// cross the 95% validation mAP line within a handful of epochs, while noisy
// features need many more. Prints a table; asserts nothing.

#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include "mirkit/trainer.hpp"

using namespace mirkit;

namespace {

FeatureSet make_split(std::size_t clusters, std::size_t per_cluster,
                      std::size_t d_in, double noise, std::mt19937_64& gen,
                      const std::vector<std::vector<double>>& centers,
                      std::size_t id_offset) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  FeatureSet set;
  const std::size_t n = clusters * per_cluster;
  set.video_features = Matrix(n, d_in);
  set.text_features = Matrix(n, d_in);
  std::size_t row = 0;
  for (std::size_t c = 0; c < clusters; ++c) {
    for (std::size_t s = 0; s < per_cluster; ++s, ++row) {
      for (std::size_t k = 0; k < d_in; ++k) {
        set.video_features.at(row, k) = centers[c][k] + noise * gauss(gen);
        set.text_features.at(row, k) = centers[c][k] + noise * gauss(gen);
      }
      ClipMeta meta;
      meta.clip_id = "clip" + std::to_string(id_offset + row);
      meta.video_id = "video" + std::to_string(c);
      meta.t_start = 100.0 * static_cast<double>(row);
      meta.t_end = meta.t_start + 5.0;
      meta.nouns = {static_cast<int>(c)};
      meta.verbs = {static_cast<int>(c)};
      meta.verb_class = static_cast<int>(c);
      meta.noun_class = static_cast<int>(c);
      set.metas.push_back(std::move(meta));
    }
  }
  return set;
}

}  // namespace

int main() {
  const std::size_t clusters = 3, d_in = 16;
  std::printf("feature noise vs epochs to reach 95%% validation mAP\n");
  std::printf("%-12s %-18s %-12s %-12s\n", "noise", "epochs_to_95_mAP",
              "final_mAP", "final_nDCG");
  for (double noise : {0.05, 0.2, 0.5, 0.8, 1.2}) {
    std::mt19937_64 gen(321);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<std::vector<double>> centers(clusters,
                                             std::vector<double>(d_in));
    for (auto& center : centers) {
      for (double& v : center) v = gauss(gen);
    }
    const FeatureSet train_split =
        make_split(clusters, 16, d_in, noise, gen, centers, 0);
    const FeatureSet val_split =
        make_split(clusters, 8, d_in, noise, gen, centers, clusters * 16);

    TrainConfig config;
    config.loss_kind = LossKind::ada_mimm;
    config.learning_rate = 0.02;
    config.epochs = 120;
    config.seed = 9;
    config.gamma = 0.4;
    config.proj_dim = 8;
    const TrainResult result = train(train_split, val_split, config);

    std::string first_hit = ">120";
    for (const EpochRecord& rec : result.curve) {
      if (rec.val_map_avg >= 95.0) {
        first_hit = std::to_string(rec.epoch);
        break;
      }
    }
    const EpochRecord& last = result.curve.back();
    std::printf("%-12.2f %-18s %-12.2f %-12.2f\n", noise, first_hit.c_str(),
                last.val_map_avg, last.val_ndcg_avg);
  }
  return 0;
}
