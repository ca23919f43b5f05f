#include "xfer/nn/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "xfer/error.hpp"
#include "xfer/numkit/kernels.hpp"

namespace xfer::nn {

namespace {

// Norm floor for the cosine head inside training.
constexpr double kNormFloor = 1e-12;

Matrix affine(const Matrix& x, const Linear& l) {
  if (x.cols() != l.w.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "layer expects width " + std::to_string(l.w.cols()) +
                                                  ", got " + std::to_string(x.cols()));
  }
  Matrix z = numkit::matmul_nt(x, l.w);
  if (!l.b.empty())
    for (std::size_t i = 0; i < z.rows(); ++i)
      for (std::size_t j = 0; j < z.cols(); ++j) z(i, j) += l.b(0, j);
  return z;
}

Matrix relu(const Matrix& z) {
  Matrix h = z;
  for (auto& v : h.values()) v = v > 0.0 ? v : 0.0;
  return h;
}

Matrix relu_backward(const Matrix& grad, const Matrix& z) {
  Matrix g = grad;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (!(z.data()[i] > 0.0)) g.data()[i] = 0.0;
  return g;
}

Matrix column_sums(const Matrix& m) {
  Matrix s(1, m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) s(0, j) += m(i, j);
  return s;
}

// Gradients of z = x W^T + b; returns dx when wanted.
Matrix linear_backward(const Matrix& dz, const Matrix& x, const Linear& l, Linear& grad, bool want_dx) {
  grad.w = numkit::matmul_tn(dz, x);
  if (!l.b.empty()) grad.b = column_sums(dz);
  return want_dx ? numkit::matmul(dz, l.w) : Matrix();
}

Matrix unit_rows(const Matrix& m, std::vector<double>& norms, bool strict, const char* what) {
  Matrix u(m.rows(), m.cols());
  norms.assign(m.rows(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double s = 0.0;
    for (double v : m.row(i)) s += v * v;
    double n = std::sqrt(s);
    if (strict && !(n > 0.0)) throw Error(ErrorCode::ZeroNorm, std::string(what) + " row " + std::to_string(i) + " has zero norm");
    norms[i] = n;
    n = std::max(n, kNormFloor);
    for (std::size_t j = 0; j < m.cols(); ++j) u(i, j) = m(i, j) / n;
  }
  return u;
}

// d(v / |v|) for each row: (du - u (u . du)) / |v|.
Matrix unit_rows_backward(const Matrix& du, const Matrix& u, const std::vector<double>& norms) {
  Matrix dv(du.rows(), du.cols());
  for (std::size_t i = 0; i < du.rows(); ++i) {
    if (norms[i] < kNormFloor) {
      for (std::size_t j = 0; j < du.cols(); ++j) dv(i, j) = du(i, j) / kNormFloor;
      continue;
    }
    double dot = 0.0;
    for (std::size_t j = 0; j < du.cols(); ++j) dot += u(i, j) * du(i, j);
    for (std::size_t j = 0; j < du.cols(); ++j) dv(i, j) = (du(i, j) - u(i, j) * dot) / norms[i];
  }
  return dv;
}

void check_labels(Labels labels, std::size_t rows, std::size_t classes) {
  if (labels.size() != rows) throw Error(ErrorCode::DimensionMismatch, "one label per row required");
  for (auto l : labels)
    if (l >= classes) throw Error(ErrorCode::OutOfRange, "label " + std::to_string(l) + " >= class count");
}

void project(const ModelParams& params, const Matrix& features, Mode mode, const BnSettings& bn,
             Pass& pass, ModelParams* running) {
  const std::size_t n = features.rows();
  if (mode == Mode::Train && n < 2)
    throw Error(ErrorCode::InvalidConfig, "batch of 1 in Train mode (batch norm needs >= 2 rows)");
  pass.fc1_out = affine(features, params.fc1);
  const std::size_t h = pass.fc1_out.cols();
  Matrix mean(1, h), var(1, h);
  if (mode == Mode::Train) {
    mean = column_sums(pass.fc1_out);
    for (auto& v : mean.values()) v /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < h; ++j) {
        const double d = pass.fc1_out(i, j) - mean(0, j);
        var(0, j) += d * d;
      }
    for (auto& v : var.values()) v /= static_cast<double>(n);
  } else {
    mean = params.bn.running_mean;
    var = params.bn.running_var;
  }
  pass.bn_inv_std = Matrix(1, h);
  for (std::size_t j = 0; j < h; ++j) pass.bn_inv_std(0, j) = 1.0 / std::sqrt(var(0, j) + bn.epsilon);
  pass.xhat = Matrix(n, h);
  pass.bn_out = Matrix(n, h);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < h; ++j) {
      pass.xhat(i, j) = (pass.fc1_out(i, j) - mean(0, j)) * pass.bn_inv_std(0, j);
      pass.bn_out(i, j) = params.bn.gamma(0, j) * pass.xhat(i, j) + params.bn.beta(0, j);
    }
  pass.relu_out = relu(pass.bn_out);
  pass.proj_out = affine(pass.relu_out, params.fc2);

  if (mode == Mode::Train && running) {
    const double m = bn.momentum;
    const double unbias = static_cast<double>(n) / static_cast<double>(n - 1);
    for (std::size_t j = 0; j < h; ++j) {
      running->bn.running_mean(0, j) = (1.0 - m) * running->bn.running_mean(0, j) + m * mean(0, j);
      running->bn.running_var(0, j) = (1.0 - m) * running->bn.running_var(0, j) + m * var(0, j) * unbias;
    }
  }
}

}  // namespace

std::vector<Matrix> forward_encoder(const ModelParams& params, const Matrix& x) {
  std::vector<Matrix> out;
  out.reserve(params.encoder.size());
  for (const auto& layer : params.encoder) out.push_back(relu(affine(out.empty() ? x : out.back(), layer)));
  return out;
}

Matrix forward_projector(ModelParams& params, const Matrix& features, Mode mode, const BnSettings& bn) {
  if (!params.has_projector) throw Error(ErrorCode::InvalidConfig, "model has no projector");
  Pass pass;
  project(params, features, mode, bn, pass, &params);
  return pass.proj_out;
}

Pass forward(const ArchSpec& arch, ModelParams& params, const Matrix& x, Mode mode,
             const BnSettings& bn, bool update_running) {
  Pass pass;
  pass.mode = mode;
  pass.acts.push_back(x);
  for (const auto& layer : params.encoder) {
    pass.pre.push_back(affine(pass.acts.back(), layer));
    pass.acts.push_back(relu(pass.pre.back()));
  }
  if (params.has_projector) {
    project(params, pass.acts.back(), mode, bn, pass, update_running ? &params : nullptr);
    pass.head_in = pass.proj_out;
  } else {
    pass.head_in = pass.acts.back();
  }
  if (arch.loss == LossKind::CosineSoftmax) {
    pass.head_unit = unit_rows(pass.head_in, pass.head_norms, false, "feature");
    pass.proto_unit = unit_rows(params.head.w, pass.proto_norms, false, "prototype");
    pass.logits = numkit::matmul_nt(pass.head_unit, pass.proto_unit);
    for (auto& v : pass.logits.values()) v *= arch.beta;
    if (!params.head.b.empty())
      for (std::size_t i = 0; i < pass.logits.rows(); ++i)
        for (std::size_t j = 0; j < pass.logits.cols(); ++j) pass.logits(i, j) += params.head.b(0, j);
  } else {
    pass.logits = affine(pass.head_in, params.head);
  }
  return pass;
}

Matrix cosine_logits(const Matrix& features, const Matrix& prototypes, double beta) {
  if (features.cols() != prototypes.cols())
    throw Error(ErrorCode::DimensionMismatch, "feature and prototype widths differ");
  std::vector<double> fn, pn;
  Matrix logits = numkit::matmul_nt(unit_rows(features, fn, true, "feature"),
                                    unit_rows(prototypes, pn, true, "prototype"));
  for (auto& v : logits.values()) v *= beta;
  return logits;
}

LossGrad softmax_ce(const Matrix& logits, Labels labels) {
  check_labels(labels, logits.rows(), logits.cols());
  LossGrad out{0.0, Matrix(logits.rows(), logits.cols())};
  const auto n = static_cast<double>(logits.rows());
  for (std::size_t i = 0; i < logits.rows(); ++i) {
    const auto row = logits.row(i);
    const double mx = *std::max_element(row.begin(), row.end());
    double z = 0.0;
    for (double v : row) z += std::exp(v - mx);
    const double lse = mx + std::log(z);
    out.loss += lse - row[labels[i]];
    for (std::size_t k = 0; k < row.size(); ++k) out.dlogits(i, k) = std::exp(row[k] - lse) / n;
    out.dlogits(i, labels[i]) -= 1.0 / n;
  }
  out.loss /= n;
  return out;
}

double softmax_ce_loss(const Matrix& logits, Labels labels) {
  if (!logits.all_finite()) throw Error(ErrorCode::NonFinite, "logits must be finite");
  return softmax_ce(logits, labels).loss;
}

double cosine_softmax_loss(const Matrix& features, const Matrix& prototypes, Labels labels, double beta) {
  if (!(beta > 0.0)) throw Error(ErrorCode::InvalidConfig, "beta must be positive");
  return softmax_ce_loss(cosine_logits(features, prototypes, beta), labels);
}

ModelParams backward(const ArchSpec& arch, const ModelParams& params, const Pass& pass,
                     const Matrix& dlogits) {
  ModelParams g = params.zeros_like();
  Matrix dhead_in;
  if (arch.loss == LossKind::CosineSoftmax) {
    Matrix scaled = dlogits;
    for (auto& v : scaled.values()) v *= arch.beta;
    const Matrix du = numkit::matmul(scaled, pass.proto_unit);
    const Matrix dp = numkit::matmul_tn(scaled, pass.head_unit);
    dhead_in = unit_rows_backward(du, pass.head_unit, pass.head_norms);
    g.head.w = unit_rows_backward(dp, pass.proto_unit, pass.proto_norms);
    if (!params.head.b.empty()) g.head.b = column_sums(dlogits);
  } else {
    dhead_in = linear_backward(dlogits, pass.head_in, params.head, g.head, true);
  }

  Matrix dfeat;
  if (params.has_projector) {
    const Matrix dr = linear_backward(dhead_in, pass.relu_out, params.fc2, g.fc2, true);
    const Matrix dy = relu_backward(dr, pass.bn_out);
    const std::size_t n = dy.rows(), h = dy.cols();
    Matrix dxhat(n, h);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < h; ++j) {
        g.bn.gamma(0, j) += dy(i, j) * pass.xhat(i, j);
        g.bn.beta(0, j) += dy(i, j);
        dxhat(i, j) = dy(i, j) * params.bn.gamma(0, j);
      }
    Matrix da(n, h);
    if (pass.mode == Mode::Train) {
      Matrix sum_d(1, h), sum_dx(1, h);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < h; ++j) {
          sum_d(0, j) += dxhat(i, j);
          sum_dx(0, j) += dxhat(i, j) * pass.xhat(i, j);
        }
      const auto nn = static_cast<double>(n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < h; ++j)
          da(i, j) = pass.bn_inv_std(0, j) / nn *
                     (nn * dxhat(i, j) - sum_d(0, j) - pass.xhat(i, j) * sum_dx(0, j));
    } else {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < h; ++j) da(i, j) = dxhat(i, j) * pass.bn_inv_std(0, j);
    }
    dfeat = linear_backward(da, pass.acts.back(), params.fc1, g.fc1, true);
  } else {
    dfeat = std::move(dhead_in);
  }

  for (std::size_t s = params.encoder.size(); s-- > 0;) {
    const Matrix dz = relu_backward(dfeat, pass.pre[s]);
    dfeat = linear_backward(dz, pass.acts[s], params.encoder[s], g.encoder[s], s > 0);
  }
  return g;
}

std::vector<std::uint32_t> argmax_rows(const Matrix& m) {
  std::vector<std::uint32_t> out(m.rows(), 0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto row = m.row(i);
    std::size_t best = 0;
    for (std::size_t k = 1; k < row.size(); ++k)
      if (row[k] > row[best]) best = k;
    out[i] = static_cast<std::uint32_t>(best);
  }
  return out;
}

}  // namespace xfer::nn
