#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "xfer/nn/arch.hpp"
#include "xfer/numkit/rng.hpp"

namespace xfer::nn {

// Checkpoint file (little-endian):
//   "XCKP0001" | u32 header length | JSON header | float32 blob
// The header holds arch, config, epoch, loss, top1, the shuffle-stream state
// and the ordered tensor manifest [{name, shape: [rows, cols]}]. The blob is
// every manifest tensor, row-major, in manifest order: trainable tensors,
// BN buffers, then the momentum buffers ("momentum." prefix).
inline constexpr std::string_view kCheckpointMagic = "XCKP0001";

struct Checkpoint {
  ArchSpec arch;
  TrainConfig config;
  std::uint32_t epoch = 0;
  double loss = 0.0;
  double top1 = 0.0;
  numkit::RngStream::State rng;
  ModelParams params;
  ModelParams velocity;
};

std::string encode_checkpoint(const Checkpoint& ckpt);
Checkpoint decode_checkpoint(std::string_view bytes);
void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

/// <run_dir>/ckpt_e<epoch, 4 digits>.xckp
std::filesystem::path checkpoint_path(const std::filesystem::path& run_dir, std::uint32_t epoch);
/// Checkpoint files of a run directory in ascending epoch order.
std::vector<std::filesystem::path> list_checkpoints(const std::filesystem::path& run_dir);

/// Rounds every tensor (parameters, buffers, momentum) to float32 precision,
/// so the in-memory state equals what a checkpoint stores.
void snap_to_float32(Checkpoint& ckpt);

}  // namespace xfer::nn
