#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <numbers>

#include "xfer/error.hpp"
#include "xfer/nn/arch.hpp"
#include "xfer/nn/checkpoint.hpp"
#include "xfer/nn/gradcheck.hpp"
#include "xfer/nn/model.hpp"
#include "xfer/nn/optim.hpp"
#include "xfer/nn/train.hpp"
#include "xfer/numkit/byteio.hpp"
#include "xfer/numkit/rng.hpp"

using namespace xfer;
using namespace xfer::nn;
using datamodel::Domain;
using datamodel::FeatureSet;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvariantViolation;
}

std::filesystem::path fresh_dir(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("xfer_test_nn_" + name);
  std::filesystem::remove_all(p);
  return p;
}

ArchSpec small_arch(bool projector, LossKind loss, std::size_t input = 5, std::size_t classes = 3) {
  ArchSpec a;
  a.input_dim = input;
  a.encoder_widths = {12, 8};
  a.use_projector = projector;
  a.num_classes = classes;
  a.loss = loss;
  return a;
}

Matrix random_matrix(numkit::RngStream& rng, std::size_t r, std::size_t c, double scale = 1.0) {
  Matrix m(r, c);
  for (auto& v : m.values()) v = scale * rng.normal();
  return m;
}

// Two Gaussian blobs at -3 and +3 along every axis.
FeatureSet blobs(std::size_t per_class, std::size_t dim, std::uint64_t seed) {
  numkit::RngStream rng(seed);
  Matrix f(2 * per_class, dim);
  std::vector<std::uint32_t> labels(2 * per_class);
  for (std::size_t i = 0; i < f.rows(); ++i) {
    labels[i] = i < per_class ? 0 : 1;
    for (std::size_t k = 0; k < dim; ++k) f(i, k) = (labels[i] ? 3.0 : -3.0) + rng.normal();
  }
  return FeatureSet(std::move(f), std::move(labels), std::vector<Domain>(2 * per_class, Domain::Pre),
                    {Domain::Pre, Domain::Pre});
}

// Perceptron with a bias; converges in finitely many passes iff the set is linearly separable.
bool perceptron_separates(const FeatureSet& s) {
  std::vector<double> w(s.dim() + 1, 0.0);
  for (int pass = 0; pass < 1000; ++pass) {
    bool clean = true;
    for (std::size_t i = 0; i < s.num_samples(); ++i) {
      const double y = s.labels()[i] ? 1.0 : -1.0;
      double a = w.back();
      for (std::size_t k = 0; k < s.dim(); ++k) a += w[k] * s.features()(i, k);
      if (y * a <= 0) {
        clean = false;
        for (std::size_t k = 0; k < s.dim(); ++k) w[k] += y * s.features()(i, k);
        w.back() += y;
      }
    }
    if (clean) return true;
  }
  return false;
}

TrainConfig quick_config(std::size_t epochs) {
  TrainConfig c;
  c.epochs = epochs;
  c.batch_size = 16;
  c.base_lr = 0.1;
  c.warmup_epochs = 1;
  c.warmup_start_lr = 0.02;
  c.checkpoint_every = 5;
  c.seed = 7;
  return c;
}

}  // namespace

TEST_CASE("arch validation and derived widths") {
  auto a = small_arch(true, LossKind::Softmax);
  a.validate();
  CHECK(a.hidden_dim() == 32);
  CHECK(a.projected_dim() == 2);
  CHECK(a.head_input_dim() == 2);
  a.use_projector = false;
  CHECK(a.head_input_dim() == 8);
  a.encoder_widths.clear();
  CHECK(code_of([&] { a.validate(); }) == ErrorCode::InvalidConfig);
  a = small_arch(false, LossKind::Softmax);
  a.num_classes = 1;
  CHECK(code_of([&] { a.validate(); }) == ErrorCode::InvalidConfig);
  CHECK(loss_from_name("cosine") == LossKind::CosineSoftmax);
  CHECK(code_of([] { loss_from_name("hinge"); }) == ErrorCode::InvalidConfig);
  const auto b = small_arch(true, LossKind::CosineSoftmax);
  CHECK(to_json(arch_from_json(to_json(b))) == to_json(b));
  TrainConfig c;
  CHECK(to_json(train_config_from_json(to_json(c))) == to_json(c));
}

TEST_CASE("encoder forward examples") {
  ModelParams p;
  p.encoder.push_back({Matrix(3, 2), Matrix(1, 3)});
  p.encoder.push_back({Matrix(4, 3), Matrix(1, 4)});
  const auto acts = forward_encoder(p, Matrix{{1, -2}, {4, 5}});
  REQUIRE(acts.size() == 2);
  for (const auto& a : acts)
    for (double v : a.values()) CHECK(v == 0.0);
  p.encoder.pop_back();

  p.encoder[0] = {Matrix{{1, 0}, {0, 1}}, Matrix(1, 2)};
  const Matrix x{{0.5, 2}, {3, 0}};
  CHECK(forward_encoder(p, x).back() == x);
}

TEST_CASE("projector forward examples") {
  numkit::RngStream rng(1);
  const auto arch = small_arch(true, LossKind::Softmax);
  auto p = init_params(arch, rng);
  const BnSettings bn;
  const Matrix f = random_matrix(rng, 6, 8);

  // running stats 0 / 1 with unit affine: Eval BN is the identity up to epsilon
  const auto pass = forward(arch, p, random_matrix(rng, 6, 5), Mode::Eval, bn);
  for (std::size_t i = 0; i < pass.fc1_out.size(); ++i)
    CHECK(pass.bn_out.data()[i] == doctest::Approx(pass.fc1_out.data()[i] / std::sqrt(1 + bn.epsilon)).epsilon(1e-14));

  // constant channel in Train mode stays finite
  auto q = p;
  for (std::size_t c = 0; c < q.fc1.w.cols(); ++c) q.fc1.w(0, c) = 0.0;
  const auto constant = forward(arch, q, random_matrix(rng, 6, 5), Mode::Train, bn);
  for (double v : constant.proj_out.values()) CHECK(std::isfinite(v));
  for (std::size_t i = 0; i < 6; ++i) CHECK(constant.bn_out(i, 0) == doctest::Approx(q.bn.beta(0, 0)));

  auto z = p;
  for (auto& v : z.fc2.w.values()) v = 0.0;
  for (auto& v : z.fc2.b.values()) v = 0.0;
  const auto zeroed = forward_projector(z, f, Mode::Train, bn);
  for (double v : zeroed.values()) CHECK(v == 0.0);

  CHECK(code_of([&] { forward(arch, p, random_matrix(rng, 1, 5), Mode::Train, bn); }) == ErrorCode::InvalidConfig);
  CHECK_NOTHROW(forward(arch, p, random_matrix(rng, 1, 5), Mode::Eval, bn));
}

TEST_CASE("cross-entropy examples") {
  const std::vector<std::uint32_t> zero{0};
  CHECK(softmax_ce_loss(Matrix{{1.5, 1.5, 1.5, 1.5}}, zero) == doctest::Approx(std::log(4.0)).epsilon(1e-15));
  CHECK(std::abs(softmax_ce_loss(Matrix{{2, 0}}, zero) - 0.126928) < 1e-6);
  CHECK(softmax_ce_loss(Matrix{{2, 0}}, zero) == doctest::Approx(std::log1p(std::exp(-2.0))).epsilon(1e-14));
  CHECK(softmax_ce_loss(Matrix{{800, 0}}, zero) < 1e-300);
  const auto lg = softmax_ce(Matrix{{60, 0, 0}}, zero);
  for (double v : lg.dlogits.values()) CHECK(std::abs(v) < 1e-25);
  CHECK(code_of([] { softmax_ce_loss(Matrix{{INFINITY, 0}}, std::vector<std::uint32_t>{0}); }) == ErrorCode::NonFinite);
}

TEST_CASE("cosine-softmax examples") {
  const std::vector<std::uint32_t> zero{0};
  const Matrix protos{{1, 0}, {0, 1}};
  CHECK(cosine_softmax_loss(Matrix{{1, 1}}, protos, zero, 7.0) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(std::abs(cosine_softmax_loss(Matrix{{3, 0}}, protos, zero, 1.0) - 0.313262) < 1e-6);
  const auto logits = cosine_logits(Matrix{{3, 4}}, Matrix{{2, 0}, {0, -5}}, 10.0);
  CHECK(logits(0, 0) == doctest::Approx(6.0));
  CHECK(logits(0, 1) == doctest::Approx(-8.0));
  CHECK(code_of([&] { cosine_logits(Matrix{{0, 0}}, protos, 1.0); }) == ErrorCode::ZeroNorm);
}

TEST_CASE("backward matches finite differences") {
  const BnSettings bn;
  int combos = 0;
  for (bool proj : {false, true})
    for (auto loss : {LossKind::Softmax, LossKind::CosineSoftmax})
      for (std::uint64_t seed = 0; seed < 3; ++seed) {
        numkit::RngStream rng(seed * 31 + 5);
        auto arch = small_arch(proj, loss, 4 + seed, 3 + seed);
        arch.encoder_widths = {10 + seed, 8 + 4 * seed};
        arch.classifier_bias = seed == 1;
        const auto params = init_params(arch, rng);
        const Matrix x = random_matrix(rng, 7, arch.input_dim);
        std::vector<std::uint32_t> labels(7);
        for (auto& l : labels) l = static_cast<std::uint32_t>(rng.uniform_index(arch.num_classes));
        const auto r = gradient_check(arch, params, x, labels, bn);
        INFO("proj=" << proj << " loss=" << loss_name(loss) << " seed=" << seed << " worst=" << r.worst);
        CHECK(r.max_rel_error < 1e-4);
        CHECK(r.checked > 100);
        ++combos;
      }
  CHECK(combos == 12);
}

TEST_CASE("duplicated samples contribute identical gradients") {
  numkit::RngStream rng(9);
  const auto arch = small_arch(true, LossKind::Softmax);
  auto p = init_params(arch, rng);
  Matrix x = random_matrix(rng, 4, 5);
  for (std::size_t c = 0; c < 5; ++c) x(3, c) = x(1, c);
  const std::vector<std::uint32_t> labels{0, 2, 1, 2};
  const auto pass = forward(arch, p, x, Mode::Train, BnSettings{});
  const auto lg = softmax_ce(pass.logits, labels);
  for (std::size_t k = 0; k < 3; ++k) CHECK(lg.dlogits(1, k) == lg.dlogits(3, k));
}

TEST_CASE("a small step against the gradient lowers the loss") {
  for (bool proj : {false, true}) {
    numkit::RngStream rng(21);
    const auto arch = small_arch(proj, LossKind::Softmax);
    auto p = init_params(arch, rng);
    const Matrix x = random_matrix(rng, 16, 5);
    std::vector<std::uint32_t> labels(16);
    for (auto& l : labels) l = static_cast<std::uint32_t>(rng.uniform_index(3));
    const BnSettings bn;
    const auto pass = forward(arch, p, x, Mode::Train, bn, false);
    const auto lg = softmax_ce(pass.logits, labels);
    auto grads = backward(arch, p, pass, lg.dlogits);
    auto velocity = p.zeros_like();
    TrainConfig cfg;
    cfg.momentum = 0;
    cfg.weight_decay = 0;
    sgd_step(p, grads, velocity, 1e-3, cfg);
    const double after = softmax_ce(forward(arch, p, x, Mode::Train, bn, false).logits, labels).loss;
    CHECK(after < lg.loss);
  }
}

TEST_CASE("batch-norm running statistics converge to population moments") {
  numkit::RngStream rng(4);
  auto arch = small_arch(true, LossKind::Softmax);
  auto p = init_params(arch, rng);
  const std::size_t d = arch.feature_dim();
  std::vector<double> mean(d);
  for (auto& m : mean) m = rng.normal(0, 2);
  const BnSettings bn;
  for (int step = 0; step < 500; ++step) {
    Matrix f(64, d);
    for (std::size_t i = 0; i < 64; ++i)
      for (std::size_t k = 0; k < d; ++k) f(i, k) = mean[k] + rng.normal();
    forward_projector(p, f, Mode::Train, bn);
  }
  // fc1 output of f ~ N(mean, I): mean W mean + b, variance sum_k W_ck^2
  for (std::size_t c = 0; c < arch.hidden_dim(); ++c) {
    double mu = p.fc1.b.empty() ? 0.0 : p.fc1.b(0, c), var = 0;
    for (std::size_t k = 0; k < d; ++k) {
      mu += p.fc1.w(c, k) * mean[k];
      var += p.fc1.w(c, k) * p.fc1.w(c, k);
    }
    CHECK(std::abs(p.bn.running_mean(0, c) - mu) < 0.15 * std::sqrt(var));
    CHECK(std::abs(p.bn.running_var(0, c) / var - 1.0) < 0.15);
  }
}

TEST_CASE("learning-rate schedule") {
  TrainConfig c;
  CHECK(std::abs(lr_at(c, 0) - 0.1) < 1e-12);
  CHECK(std::abs(lr_at(c, 3) - 0.4) < 1e-12);
  CHECK(std::abs(lr_at(c, 3 + (120 - 3) / 2.0) - 0.2) < 1e-12);
  CHECK(std::abs(lr_at(c, 120)) < 1e-12);
  CHECK(std::abs(lr_at(c, 1.5) - 0.25) < 1e-12);
  for (double t = 3; t < 120; t += 0.5) CHECK(lr_at(c, t + 0.5) <= lr_at(c, t));
  CHECK(code_of([&] { lr_at(c, -0.1); }) == ErrorCode::OutOfRange);
  CHECK(code_of([&] { lr_at(c, 120.5); }) == ErrorCode::OutOfRange);
}

TEST_CASE("SGD update rule") {
  Matrix p{{1.0, -2.0}}, v(1, 2);
  sgd_update(p, Matrix{{0.5, 1.0}}, v, 0.1, 0.0, 0.0);
  CHECK(p == Matrix{{1.0 - 0.05, -2.0 - 0.1}});

  Matrix q{{3.0}}, vq(1, 1);
  sgd_update(q, Matrix{{0.0}}, vq, 0.1, 0.9, 0.0);
  CHECK(q(0, 0) == 3.0);

  // unrolled Nesterov on constant g: displacements 1.9 and 2.71 times lr * g
  Matrix r{{0.0}}, vr(1, 1);
  const double lr = 0.05, g = 2.0;
  sgd_update(r, Matrix{{g}}, vr, lr, 0.9, 0.0);
  CHECK(r(0, 0) == doctest::Approx(-1.9 * lr * g).epsilon(1e-14));
  sgd_update(r, Matrix{{g}}, vr, lr, 0.9, 0.0);
  CHECK(r(0, 0) == doctest::Approx(-4.61 * lr * g).epsilon(1e-14));

  // weight decay reaches weights only
  numkit::RngStream rng(2);
  const auto arch = small_arch(false, LossKind::Softmax);
  auto params = init_params(arch, rng);
  for (auto& l : params.encoder)
    for (auto& b : l.b.values()) b = 1.0;
  const auto before = params;
  auto grads = params.zeros_like();
  auto vel = params.zeros_like();
  TrainConfig cfg;
  cfg.weight_decay = 0.5;
  sgd_step(params, grads, vel, 0.1, cfg);
  CHECK(params.encoder[0].b == before.encoder[0].b);
  CHECK(params.encoder[0].w(0, 0) == doctest::Approx(before.encoder[0].w(0, 0) * (1 - 0.1 * 0.5 * 1.9)));
}

TEST_CASE("checkpoint encoding") {
  numkit::RngStream rng(3);
  Checkpoint c;
  c.arch = small_arch(true, LossKind::CosineSoftmax);
  c.params = init_params(c.arch, rng);
  c.velocity = c.params.zeros_like();
  c.epoch = 10;
  c.rng = rng.state();
  snap_to_float32(c);
  const auto bytes = encode_checkpoint(c);
  const auto back = decode_checkpoint(bytes);
  CHECK(encode_checkpoint(back) == bytes);
  CHECK(back.params.fc1.w == c.params.fc1.w);
  CHECK(back.rng == c.rng);
  CHECK(back.epoch == 10);

  auto bad = bytes;
  bad[0] = 'Y';
  CHECK(code_of([&] { decode_checkpoint(bad); }) == ErrorCode::BadMagic);
  CHECK(code_of([&] { decode_checkpoint(bytes.substr(0, bytes.size() - 4)); }) == ErrorCode::Truncated);
  CHECK(code_of([&] { decode_checkpoint(bytes.substr(0, 10)); }) == ErrorCode::Truncated);
  CHECK(code_of([&] { decode_checkpoint(bytes + "zz"); }) == ErrorCode::InvariantViolation);
  CHECK(checkpoint_path("r", 20).filename() == "ckpt_e0020.xckp");
  CHECK(code_of([] { list_checkpoints(fresh_dir("missing")); }) == ErrorCode::MissingCheckpoint);
}

TEST_CASE("training separable blobs reaches full accuracy") {
  const auto data = blobs(40, 4, 1);
  REQUIRE(perceptron_separates(data));
  ArchSpec arch;
  arch.input_dim = 4;
  arch.encoder_widths = {16};
  arch.num_classes = 2;
  const auto dir = fresh_dir("blobs");
  const auto r = train(arch, quick_config(30), data, dir);
  CHECK(r.final_top1 == 1.0);
  CHECK(r.checkpoints.size() == 7);
  CHECK(std::filesystem::exists(dir / "run.json"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("training is deterministic and resumable") {
  const auto data = blobs(30, 4, 2);
  auto arch = small_arch(true, LossKind::Softmax, 4, 2);
  const auto cfg = quick_config(12);
  const auto a = fresh_dir("det_a"), b = fresh_dir("det_b"), c = fresh_dir("det_c");
  train(arch, cfg, data, a);
  train(arch, cfg, data, b);
  for (std::uint32_t e : {0u, 5u, 10u, 12u})
    CHECK(numkit::read_file(checkpoint_path(a, e)) == numkit::read_file(checkpoint_path(b, e)));

  TrainOptions opts;
  opts.resume_from = checkpoint_path(a, 5);
  train(arch, cfg, data, c, opts);
  CHECK(numkit::read_file(checkpoint_path(a, 12)) == numkit::read_file(checkpoint_path(c, 12)));

  auto other = cfg;
  other.base_lr = 0.2;
  CHECK(code_of([&] { train(arch, other, data, c, opts); }) == ErrorCode::InvalidConfig);
  arch.num_classes = 3;
  CHECK(code_of([&] { train(arch, cfg, data, c); }) == ErrorCode::ClassMismatch);
  arch.num_classes = 2;
  arch.input_dim = 3;
  CHECK(code_of([&] { train(arch, cfg, data, c); }) == ErrorCode::DimensionMismatch);
  for (const auto& d : {a, b, c}) std::filesystem::remove_all(d);
}

TEST_CASE("SL-MLP keeps the encoder output as the transfer feature") {
  numkit::RngStream rng(8);
  auto arch = small_arch(true, LossKind::Softmax);
  auto p = init_params(arch, rng);
  const Matrix x = random_matrix(rng, 3, 5);
  const auto pass = forward(arch, p, x, Mode::Eval, BnSettings{});
  CHECK(pass.acts.back().cols() == arch.feature_dim());
  CHECK(pass.acts.back() == forward_encoder(p, x).back());
  CHECK(pass.head_in.cols() == arch.projected_dim());
  CHECK(pass.logits.cols() == arch.num_classes);
}
