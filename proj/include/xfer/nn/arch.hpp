#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "xfer/numkit/matrix.hpp"
#include "xfer/numkit/rng.hpp"

namespace xfer::nn {

using numkit::Matrix;

enum class LossKind { Softmax, CosineSoftmax };

std::string loss_name(LossKind k);
LossKind loss_from_name(const std::string& name);

/// Encoder f: input_dim -> encoder_widths[0] -> ... (FC + ReLU per stage).
/// Projector g: fc1 -> BN -> ReLU -> fc2. Classifier W acts on g(f) when the
/// projector is on, on f otherwise.
struct ArchSpec {
  std::size_t input_dim = 0;
  std::vector<std::size_t> encoder_widths;
  bool use_projector = false;
  std::size_t projector_hidden = 0;  ///< 0: 4 x encoder output
  std::size_t projector_out = 0;     ///< 0: encoder output / 4 (at least 1)
  std::size_t num_classes = 0;
  LossKind loss = LossKind::Softmax;
  double beta = 30.0;
  bool classifier_bias = false;

  void validate() const;
  std::size_t stages() const noexcept { return encoder_widths.size(); }
  std::size_t feature_dim() const { return encoder_widths.back(); }
  std::size_t hidden_dim() const;
  std::size_t projected_dim() const;
  std::size_t head_input_dim() const { return use_projector ? projected_dim() : feature_dim(); }
};

struct TrainConfig {
  std::size_t epochs = 120;
  std::size_t batch_size = 128;
  double base_lr = 0.4;
  double warmup_epochs = 3;
  double warmup_start_lr = 0.1;
  double momentum = 0.9;
  double weight_decay = 1e-4;
  std::uint64_t seed = 0;
  std::size_t checkpoint_every = 10;
  double bn_epsilon = 1e-5;
  double bn_momentum = 0.1;

  void validate() const;
};

struct Linear {
  Matrix w;  ///< out x in
  Matrix b;  ///< 1 x out; 0 x 0 when absent
};

struct BatchNorm {
  Matrix gamma, beta;               ///< 1 x channels
  Matrix running_mean, running_var; ///< 1 x channels
};

enum class TensorKind { Weight, Bias, BnAffine, Buffer };

struct TensorRef {
  std::string name;
  Matrix* value;
  TensorKind kind;
};

struct ModelParams {
  std::vector<Linear> encoder;
  bool has_projector = false;
  Linear fc1;
  BatchNorm bn;
  Linear fc2;
  Linear head;

  /// Trainable tensors in manifest order.
  std::vector<TensorRef> trainable();
  /// BN running statistics.
  std::vector<TensorRef> buffers();
  /// Same shapes, all zeros (gradient / velocity storage).
  ModelParams zeros_like() const;
};

/// He-normal weights for ReLU layers, 1/fan_in variance for fc2 and the
/// classifier, zero biases, BN scale 1 / shift 0 / running (0, 1).
ModelParams init_params(const ArchSpec& arch, numkit::RngStream& rng);

nlohmann::json to_json(const ArchSpec& a);
ArchSpec arch_from_json(const nlohmann::json& j);
nlohmann::json to_json(const TrainConfig& c);
TrainConfig train_config_from_json(const nlohmann::json& j);

}  // namespace xfer::nn
