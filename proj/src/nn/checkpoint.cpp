#include "xfer/nn/checkpoint.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "xfer/error.hpp"
#include "xfer/numkit/byteio.hpp"

namespace xfer::nn {

namespace {

struct Entry {
  std::string name;
  Matrix* value;
};

std::vector<Entry> manifest(Checkpoint& c) {
  std::vector<Entry> out;
  for (auto& t : c.params.trainable()) out.push_back({t.name, t.value});
  for (auto& t : c.params.buffers()) out.push_back({t.name, t.value});
  for (auto& t : c.velocity.trainable()) out.push_back({"momentum." + t.name, t.value});
  return out;
}

float to_f32(double v) {
  const auto f = static_cast<float>(v);
  if (!std::isfinite(f)) throw Error(ErrorCode::NonFinite, "checkpoint value not representable as float32");
  return f;
}

}  // namespace

std::string encode_checkpoint(const Checkpoint& ckpt) {
  Checkpoint c = ckpt;
  const auto entries = manifest(c);
  nlohmann::json tensors = nlohmann::json::array();
  for (const auto& e : entries) tensors.push_back({{"name", e.name}, {"shape", {e.value->rows(), e.value->cols()}}});
  const nlohmann::json header = {{"arch", to_json(ckpt.arch)},
                                 {"config", to_json(ckpt.config)},
                                 {"epoch", ckpt.epoch},
                                 {"loss", ckpt.loss},
                                 {"top1", ckpt.top1},
                                 {"rng", {{"seed", ckpt.rng.seed}, {"counter", ckpt.rng.counter}}},
                                 {"tensors", tensors}};
  const std::string text = header.dump();
  numkit::ByteWriter w;
  w.bytes(kCheckpointMagic);
  w.u32(static_cast<std::uint32_t>(text.size()));
  w.bytes(text);
  for (const auto& e : entries)
    for (double v : e.value->values()) w.f32(to_f32(v));
  return w.take();
}

Checkpoint decode_checkpoint(std::string_view bytes) {
  if (bytes.substr(0, kCheckpointMagic.size()) != kCheckpointMagic)
    throw Error(ErrorCode::BadMagic, "expected magic \"XCKP0001\"");
  numkit::ByteReader r(bytes);
  r.bytes(kCheckpointMagic.size(), "magic");
  const auto len = r.u32("header length");
  const auto text = r.bytes(len, "header");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvariantViolation, std::string("checkpoint header: ") + e.what());
  }

  Checkpoint c;
  try {
    c.arch = arch_from_json(header.at("arch"));
    c.config = train_config_from_json(header.at("config"));
    c.epoch = header.at("epoch").get<std::uint32_t>();
    c.loss = header.at("loss").is_null() ? NAN : header.at("loss").get<double>();
    c.top1 = header.at("top1").get<double>();
    c.rng.seed = header.at("rng").at("seed").get<std::uint64_t>();
    c.rng.counter = header.at("rng").at("counter").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvariantViolation, std::string("checkpoint header: ") + e.what());
  }
  numkit::RngStream shapes(0);
  c.params = init_params(c.arch, shapes);
  c.velocity = c.params.zeros_like();
  const auto entries = manifest(c);
  const auto& declared = header.at("tensors");
  if (!declared.is_array() || declared.size() != entries.size())
    throw Error(ErrorCode::InvariantViolation, "tensor manifest does not match the architecture");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& d = declared[i];
    if (d.value("name", "") != entries[i].name ||
        d.value("shape", std::vector<std::size_t>{}) !=
            std::vector<std::size_t>{entries[i].value->rows(), entries[i].value->cols()}) {
      throw Error(ErrorCode::InvariantViolation, "tensor " + std::to_string(i) + " ('" +
                                                     d.value("name", "") + "') does not match '" +
                                                     entries[i].name + "'");
    }
  }
  for (const auto& e : entries)
    for (auto& v : e.value->values()) v = static_cast<double>(r.f32(e.name.c_str()));
  if (r.remaining() != 0)
    throw Error(ErrorCode::InvariantViolation, std::to_string(r.remaining()) + " trailing bytes after blob");
  return c;
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  numkit::write_file(path, encode_checkpoint(ckpt));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  return decode_checkpoint(numkit::read_file(path));
}

std::filesystem::path checkpoint_path(const std::filesystem::path& run_dir, std::uint32_t epoch) {
  char name[32];
  std::snprintf(name, sizeof name, "ckpt_e%04u.xckp", epoch);
  return run_dir / name;
}

std::vector<std::filesystem::path> list_checkpoints(const std::filesystem::path& run_dir) {
  if (!std::filesystem::is_directory(run_dir))
    throw Error(ErrorCode::MissingCheckpoint, "run directory '" + run_dir.string() + "' not found");
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(run_dir)) {
    const auto name = e.path().filename().string();
    if (e.is_regular_file() && name.starts_with("ckpt_e") && e.path().extension() == ".xckp")
      out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

void snap_to_float32(Checkpoint& ckpt) {
  for (const auto& e : manifest(ckpt))
    for (auto& v : e.value->values()) v = static_cast<double>(static_cast<float>(v));
}

}  // namespace xfer::nn
