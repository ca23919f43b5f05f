#include "xfer/datamodel/synthetic.hpp"

#include <cmath>
#include <string>

#include "xfer/error.hpp"
#include "xfer/numkit/rng.hpp"

namespace xfer::datamodel {

void SyntheticConfig::validate() const {
  auto bad = [](const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); };
  if (c_pre < 2) bad("c_pre must be >= 2");
  if (c_eval < 1) bad("c_eval must be >= 1");
  if (dim < 1) bad("dim must be >= 1");
  if (samples_per_class < 2) bad("samples_per_class must be >= 2");
  if (!(gap >= 0.0) || !std::isfinite(gap)) bad("gap must be a finite value >= 0");
  if (!(within_sigma > 0.0) || !std::isfinite(within_sigma)) bad("within_sigma must be > 0");
  if (!(center_sigma > 0.0) || !std::isfinite(center_sigma)) bad("center_sigma must be > 0");
}

std::vector<double> shift_direction(std::size_t dim) {
  return std::vector<double>(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
}

FeatureSet generate_synthetic(const SyntheticConfig& cfg) {
  cfg.validate();
  numkit::RngStream rng(cfg.seed);
  const std::size_t classes = cfg.c_pre + cfg.c_eval;
  const auto dir = shift_direction(cfg.dim);

  Matrix centers(classes, cfg.dim);
  for (std::size_t j = 0; j < classes; ++j) {
    const double shift = j < cfg.c_pre ? 0.0 : cfg.gap;
    for (std::size_t c = 0; c < cfg.dim; ++c)
      centers(j, c) = cfg.center_sigma * rng.normal() + shift * dir[c];
  }

  const std::size_t n = classes * cfg.samples_per_class;
  Matrix features(n, cfg.dim);
  std::vector<std::uint32_t> labels(n);
  std::vector<Domain> domains(n);
  std::vector<Domain> class_domains(classes);
  std::size_t row = 0;
  for (std::size_t j = 0; j < classes; ++j) {
    const Domain d = j < cfg.c_pre ? Domain::Pre : Domain::Eval;
    class_domains[j] = d;
    for (std::size_t s = 0; s < cfg.samples_per_class; ++s, ++row) {
      for (std::size_t c = 0; c < cfg.dim; ++c)
        features(row, c) = centers(j, c) + cfg.within_sigma * rng.normal();
      labels[row] = static_cast<std::uint32_t>(j);
      domains[row] = d;
    }
  }
  return FeatureSet(std::move(features), std::move(labels), std::move(domains),
                    std::move(class_domains));
}

}  // namespace xfer::datamodel
