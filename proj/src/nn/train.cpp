#include "xfer/nn/train.hpp"

#include <cmath>
#include <numeric>

#include "xfer/error.hpp"
#include "xfer/numkit/byteio.hpp"
#include "xfer/nn/optim.hpp"

namespace xfer::nn {

namespace {

constexpr std::uint64_t kInitStream = 1;
constexpr std::uint64_t kShuffleStream = 2;

void write_nan_abort(const std::filesystem::path& run_dir, std::size_t epoch, std::size_t batch, double lr) {
  const nlohmann::json j = {{"epoch", epoch}, {"batch", batch}, {"lr", lr}, {"loss", nullptr}};
  numkit::write_file(run_dir / "nan_abort.json", j.dump(2) + "\n");
}

}  // namespace

Evaluation evaluate(const ArchSpec& arch, ModelParams& params, const numkit::Matrix& x, Labels labels,
                    const BnSettings& bn) {
  const Pass pass = forward(arch, params, x, Mode::Eval, bn);
  Evaluation out;
  out.loss = softmax_ce(pass.logits, labels).loss;
  const auto pred = argmax_rows(pass.logits);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) hits += pred[i] == labels[i];
  out.top1 = static_cast<double>(hits) / static_cast<double>(pred.size());
  return out;
}

TrainResult train(const ArchSpec& arch, const TrainConfig& cfg, const datamodel::FeatureSet& data,
                  const std::filesystem::path& run_dir, const TrainOptions& opts) {
  arch.validate();
  cfg.validate();
  if (data.dim() != arch.input_dim)
    throw Error(ErrorCode::DimensionMismatch, "data width " + std::to_string(data.dim()) +
                                                  " != arch input_dim " + std::to_string(arch.input_dim));
  if (data.num_classes() != arch.num_classes)
    throw Error(ErrorCode::ClassMismatch, "data has " + std::to_string(data.num_classes()) +
                                              " classes, arch expects " + std::to_string(arch.num_classes));
  std::filesystem::create_directories(run_dir);

  const BnSettings bn{cfg.bn_epsilon, cfg.bn_momentum};
  const auto& x_all = data.features();
  const auto labels_all = data.labels();
  const std::size_t n = data.num_samples();
  const std::size_t batches = (n + cfg.batch_size - 1) / cfg.batch_size;

  Checkpoint state;
  if (opts.resume_from) {
    state = load_checkpoint(*opts.resume_from);
    if (to_json(state.arch) != to_json(arch) || to_json(state.config) != to_json(cfg))
      throw Error(ErrorCode::InvalidConfig, "resume checkpoint was written with a different arch/config");
  } else {
    state.arch = arch;
    state.config = cfg;
    numkit::RngStream init = numkit::RngStream(cfg.seed).fork(kInitStream);
    state.params = init_params(arch, init);
    state.velocity = state.params.zeros_like();
    state.rng = numkit::RngStream(cfg.seed).fork(kShuffleStream).state();
  }
  numkit::RngStream shuffle(state.rng);

  TrainResult result;
  auto checkpoint = [&](std::uint32_t epoch) {
    state.epoch = epoch;
    state.rng = shuffle.state();
    snap_to_float32(state);
    const auto ev = evaluate(arch, state.params, x_all, labels_all, bn);
    state.loss = ev.loss;
    state.top1 = ev.top1;
    const auto path = checkpoint_path(run_dir, epoch);
    save_checkpoint(state, path);
    result.checkpoints.push_back(path);
    result.final_loss = ev.loss;
    result.final_top1 = ev.top1;
  };

  if (!opts.resume_from) checkpoint(0);

  std::vector<std::size_t> order(n);
  std::vector<std::uint32_t> batch_labels;
  for (std::size_t e = state.epoch; e < cfg.epochs; ++e) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    shuffle.shuffle(order);
    for (std::size_t b = 0; b < batches; ++b) {
      const std::size_t lo = b * cfg.batch_size;
      const std::size_t hi = std::min(n, lo + cfg.batch_size);
      if (hi - lo < 2) continue;
      const std::span<const std::size_t> rows(order.data() + lo, hi - lo);
      const auto x = x_all.gather_rows(rows);
      batch_labels.resize(rows.size());
      for (std::size_t i = 0; i < rows.size(); ++i) batch_labels[i] = labels_all[rows[i]];

      const double lr = lr_at(cfg, static_cast<double>(e) + static_cast<double>(b) / static_cast<double>(batches));
      const Pass pass = forward(arch, state.params, x, Mode::Train, bn);
      const auto lg = softmax_ce(pass.logits, batch_labels);
      if (!std::isfinite(lg.loss)) {
        write_nan_abort(run_dir, e, b, lr);
        throw Error(ErrorCode::NanLoss, "non-finite loss at epoch " + std::to_string(e) + ", batch " +
                                            std::to_string(b) + " (see nan_abort.json)");
      }
      auto grads = backward(arch, state.params, pass, lg.dlogits);
      sgd_step(state.params, grads, state.velocity, lr, cfg);
    }
    const auto done = static_cast<std::uint32_t>(e + 1);
    if (done % cfg.checkpoint_every == 0 || done == cfg.epochs) checkpoint(done);
  }

  nlohmann::json run = {{"arch", to_json(arch)}, {"config", to_json(cfg)}};
  nlohmann::json files = nlohmann::json::array();
  for (const auto& p : list_checkpoints(run_dir)) files.push_back(p.filename().string());
  run["checkpoints"] = files;
  numkit::write_file(run_dir / "run.json", run.dump(2) + "\n");
  return result;
}

}  // namespace xfer::nn
