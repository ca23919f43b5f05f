#pragma once

#include <cstdint>
#include <vector>

#include "json.hpp"
#include "xfer/datamodel/feature_set.hpp"
#include "xfer/nn/checkpoint.hpp"

namespace xfer::eval {

using datamodel::FeatureSet;

/// Linear probe: a C x d classifier with bias, zero-initialized, trained by
/// minibatch SGD (Nesterov momentum, per-step cosine decay, no weight decay)
/// on frozen features, once per swept learning rate.
struct ProbeConfig {
  std::size_t epochs = 100;
  std::vector<double> sweep{0.16, 0.48, 1.44, 4.8, 14.4, 48.0};
  double lr_scale = 1.0;  ///< multiplies every sweep value
  std::size_t batch_size = 256;
  double momentum = 0.9;
  std::uint64_t seed = 0;

  void validate() const;
};

struct ProbeResult {
  double best_top1 = 0.0;
  double chosen_lr = 0.0;
  std::vector<double> lrs;    ///< effective rates (sweep x lr_scale)
  std::vector<double> top1;   ///< per rate; 0 when the run diverged
  std::vector<bool> diverged;
};

ProbeResult linear_probe(const FeatureSet& train, const FeatureSet& test, const ProbeConfig& cfg);

/// Eval-mode activations of encoder stage `stage` (1-based) with labels and
/// domains carried through.
FeatureSet extract_features(const nn::Checkpoint& ckpt, const FeatureSet& set, std::size_t stage);

/// One probe per encoder stage, stage 1 first.
std::vector<ProbeResult> stage_wise_eval(const nn::Checkpoint& ckpt, const FeatureSet& eval_train,
                                         const FeatureSet& eval_test, const ProbeConfig& cfg);

nlohmann::json to_json(const ProbeResult& r);
nlohmann::json to_json(const ProbeConfig& c);

}  // namespace xfer::eval
