#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "xfer/datamodel/feature_set.hpp"
#include "xfer/nn/checkpoint.hpp"
#include "xfer/nn/model.hpp"

namespace xfer::nn {

struct TrainOptions {
  /// Continue from this checkpoint instead of a fresh initialization.
  std::optional<std::filesystem::path> resume_from;
};

struct TrainResult {
  std::vector<std::filesystem::path> checkpoints;
  double final_loss = 0.0;
  double final_top1 = 0.0;
};

/// Loss and top-1 of an Eval-mode pass over a whole labelled set.
struct Evaluation {
  double loss = 0.0;
  double top1 = 0.0;
};
Evaluation evaluate(const ArchSpec& arch, ModelParams& params, const numkit::Matrix& x, Labels labels,
                    const BnSettings& bn);

/// Minibatch SGD on `data` (labels 0..C-1, C = arch.num_classes).
///
/// Each epoch reshuffles the rows; a trailing batch of one row is dropped.
/// The learning rate follows lr_at at fractional epoch e + b / batches.
/// Checkpoints are written for epoch 0 (initial weights), every
/// checkpoint_every epochs and the final epoch; the state is rounded to
/// float32 at each checkpoint so a resumed run continues bit-identically.
/// A non-finite loss writes nan_abort.json to the run directory and throws
/// NanLoss.
TrainResult train(const ArchSpec& arch, const TrainConfig& cfg, const datamodel::FeatureSet& data,
                  const std::filesystem::path& run_dir, const TrainOptions& opts = {});

}  // namespace xfer::nn
