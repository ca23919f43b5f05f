#include "xfer/cli/fixtures.hpp"

namespace xfer::cli {

namespace {

constexpr std::string_view kFixture = R"json({
  "table1": {
    "title": "Concept generalization task, top-1 on eval-D, ResNet50",
    "rows": [
      {"source": "paper", "method": "SL", "epochs": 100, "metric": "top1", "value": 55.9},
      {"source": "paper", "method": "SL-MLP", "epochs": 100, "metric": "top1", "value": 63.1},
      {"source": "paper", "method": "SL", "epochs": 300, "metric": "top1", "value": 54.4},
      {"source": "paper", "method": "SL-MLP", "epochs": 300, "metric": "top1", "value": 64.1},
      {"source": "paper", "method": "Byol", "epochs": 300, "metric": "top1", "value": 62.3}
    ]
  },
  "redundancy": {
    "title": "Redundancy R of pretrained features",
    "rows": [
      {"source": "paper", "method": "SL", "epochs": 100, "metric": "redundancy", "value": 0.078},
      {"source": "paper", "method": "SL-MLP", "epochs": 100, "metric": "redundancy", "value": 0.035},
      {"source": "paper", "method": "SL", "epochs": 300, "metric": "redundancy", "value": 0.087},
      {"source": "paper", "method": "SL-MLP", "epochs": 300, "metric": "redundancy", "value": 0.034},
      {"source": "paper", "method": "Byol w/o MLP", "epochs": 300, "metric": "redundancy", "value": 0.247},
      {"source": "paper", "method": "Byol", "epochs": 300, "metric": "redundancy", "value": 0.037}
    ]
  },
  "table3": {
    "title": "Projector component ablation, top-1 on eval-D, 100 epochs",
    "rows": [
      {"source": "paper", "method": "(a) none", "epochs": 100, "metric": "top1", "value": 55.9},
      {"source": "paper", "method": "(b) input FC", "epochs": 100, "metric": "top1", "value": 56.6},
      {"source": "paper", "method": "(c) input FC + BN + output FC", "epochs": 100, "metric": "top1", "value": 61.0},
      {"source": "paper", "method": "(d) input FC + ReLU + output FC", "epochs": 100, "metric": "top1", "value": 60.1},
      {"source": "paper", "method": "(e) BN + ReLU", "epochs": 100, "metric": "top1", "value": 60.5},
      {"source": "paper", "method": "SL-MLP", "epochs": 100, "metric": "top1", "value": 62.5}
    ]
  },
  "table5": {
    "title": "Projector component ablation, pre-D discriminative ratio, mixtureness and redundancy",
    "rows": [
      {"source": "paper", "method": "(a) none", "epochs": 100, "metric": "phi_pre", "value": 2.034},
      {"source": "paper", "method": "(a) none", "epochs": 100, "metric": "mixtureness", "value": 0.515},
      {"source": "paper", "method": "(a) none", "epochs": 100, "metric": "redundancy", "value": 0.0776},
      {"source": "paper", "method": "(b) input FC", "epochs": 100, "metric": "phi_pre", "value": 1.505},
      {"source": "paper", "method": "(b) input FC", "epochs": 100, "metric": "mixtureness", "value": 0.679},
      {"source": "paper", "method": "(b) input FC", "epochs": 100, "metric": "redundancy", "value": 0.0671},
      {"source": "paper", "method": "(c) input FC + BN + output FC", "epochs": 100, "metric": "phi_pre", "value": 1.269},
      {"source": "paper", "method": "(c) input FC + BN + output FC", "epochs": 100, "metric": "mixtureness", "value": 0.870},
      {"source": "paper", "method": "(c) input FC + BN + output FC", "epochs": 100, "metric": "redundancy", "value": 0.0369},
      {"source": "paper", "method": "(d) input FC + ReLU + output FC", "epochs": 100, "metric": "phi_pre", "value": 1.362},
      {"source": "paper", "method": "(d) input FC + ReLU + output FC", "epochs": 100, "metric": "mixtureness", "value": 0.804},
      {"source": "paper", "method": "(d) input FC + ReLU + output FC", "epochs": 100, "metric": "redundancy", "value": 0.0654},
      {"source": "paper", "method": "(e) BN + ReLU", "epochs": 100, "metric": "phi_pre", "value": 1.045},
      {"source": "paper", "method": "(e) BN + ReLU", "epochs": 100, "metric": "mixtureness", "value": 0.846},
      {"source": "paper", "method": "(e) BN + ReLU", "epochs": 100, "metric": "redundancy", "value": 0.0369},
      {"source": "paper", "method": "SL-MLP", "epochs": 100, "metric": "phi_pre", "value": 1.124},
      {"source": "paper", "method": "SL-MLP", "epochs": 100, "metric": "mixtureness", "value": 0.871},
      {"source": "paper", "method": "SL-MLP", "epochs": 100, "metric": "redundancy", "value": 0.0351}
    ]
  },
  "cosine": {
    "title": "Cosine-softmax pretraining, top-1 on eval-D",
    "rows": [
      {"source": "paper", "method": "cos", "epochs": 20, "metric": "top1", "value": 47.1},
      {"source": "paper", "method": "cos-mlp", "epochs": 20, "metric": "top1", "value": 45.0},
      {"source": "paper", "method": "cos", "epochs": 40, "metric": "top1", "value": 47.8},
      {"source": "paper", "method": "cos-mlp", "epochs": 40, "metric": "top1", "value": 49.6},
      {"source": "paper", "method": "cos", "epochs": 60, "metric": "top1", "value": 50.9},
      {"source": "paper", "method": "cos-mlp", "epochs": 60, "metric": "top1", "value": 52.6},
      {"source": "paper", "method": "cos", "epochs": 80, "metric": "top1", "value": 53.5},
      {"source": "paper", "method": "cos-mlp", "epochs": 80, "metric": "top1", "value": 56.5},
      {"source": "paper", "method": "cos", "epochs": 100, "metric": "top1", "value": 53.7},
      {"source": "paper", "method": "cos-mlp", "epochs": 100, "metric": "top1", "value": 59.0}
    ]
  }
}
)json";

}  // namespace

std::string_view paper_fixture_json() { return kFixture; }

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace xfer::cli
