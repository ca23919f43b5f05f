#include "doctest.h"

#include <cmath>
#include <limits>

#include "xfer/datamodel/synthetic.hpp"
#include "xfer/error.hpp"
#include "xfer/metrics/metrics.hpp"
#include "xfer/metrics/report.hpp"
#include "xfer/metrics/theorem.hpp"
#include "xfer/numkit/rng.hpp"

using namespace xfer;
using namespace xfer::metrics;
using datamodel::Domain;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidConfig;
}

FeatureSet make_set(Matrix f, std::vector<std::uint32_t> labels, std::vector<Domain> class_domains) {
  std::vector<Domain> domains;
  for (auto l : labels) domains.push_back(class_domains[l]);
  return FeatureSet(std::move(f), std::move(labels), std::move(domains), std::move(class_domains));
}

// {(0,0),(2,0)} and {(0,2),(2,2)}
const Matrix kSquare{{0, 0}, {2, 0}, {0, 2}, {2, 2}};
const std::vector<std::uint32_t> kSquareLabels{0, 0, 1, 1};

struct RandomSet {
  Matrix f;
  std::vector<std::uint32_t> labels;
  std::size_t classes;
};

RandomSet random_set(numkit::RngStream& rng) {
  const std::size_t c = 2 + rng.uniform_index(6);
  const std::size_t n = c + rng.uniform_index(200 - c + 1);
  const std::size_t d = 1 + rng.uniform_index(16);
  RandomSet s{Matrix(n, d), std::vector<std::uint32_t>(n), c};
  const double scale = std::exp(4 * rng.uniform() - 2);
  for (std::size_t i = 0; i < n; ++i) {
    s.labels[i] = static_cast<std::uint32_t>(i < c ? i : rng.uniform_index(c));
    for (std::size_t k = 0; k < d; ++k) s.f(i, k) = scale * rng.normal() + static_cast<double>(s.labels[i]);
  }
  return s;
}

// Loop oracles written straight from the definitions.
struct Oracle {
  std::vector<std::vector<double>> mu;
  std::vector<double> var;
};

Oracle oracle(const RandomSet& s) {
  Oracle o{std::vector<std::vector<double>>(s.classes, std::vector<double>(s.f.cols(), 0.0)),
           std::vector<double>(s.classes, 0.0)};
  std::vector<double> n(s.classes, 0.0);
  for (std::size_t i = 0; i < s.f.rows(); ++i) {
    n[s.labels[i]] += 1;
    for (std::size_t k = 0; k < s.f.cols(); ++k) o.mu[s.labels[i]][k] += s.f(i, k);
  }
  for (std::size_t j = 0; j < s.classes; ++j)
    for (auto& v : o.mu[j]) v /= n[j];
  for (std::size_t i = 0; i < s.f.rows(); ++i)
    for (std::size_t k = 0; k < s.f.cols(); ++k) {
      const double diff = s.f(i, k) - o.mu[s.labels[i]][k];
      o.var[s.labels[i]] += diff * diff / n[s.labels[i]];
    }
  return o;
}

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return s;
}

}  // namespace

TEST_CASE("intra-class distance examples") {
  CHECK(intra_class_distance(kSquare, kSquareLabels, 2) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(intra_class_distance(Matrix{{1, 1}, {1, 1}, {3, 0}}, std::vector<std::uint32_t>{0, 0, 1}, 2) == 0.0);
  CHECK(intra_class_distance(Matrix{{0, 0}, {0, 2}}, std::vector<std::uint32_t>{0, 0}, 1) == 1.0);
}

TEST_CASE("inter-class distance examples") {
  CHECK(inter_class_distance(kSquare, kSquareLabels, 2) == 4.0);
  CHECK(inter_class_distance(Matrix{{1, 0}, {2, 0}, {0, 0}, {3, 0}}, std::vector<std::uint32_t>{0, 0, 1, 1}, 2) == 0.0);
  CHECK(inter_class_distance(Matrix{{0}, {1}, {2}}, std::vector<std::uint32_t>{0, 1, 2}, 3) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(code_of([] { inter_class_distance(Matrix{{0}}, std::vector<std::uint32_t>{0}, 1); }) == ErrorCode::InsufficientSamples);
}

TEST_CASE("discriminative ratio examples") {
  CHECK(std::abs(discriminative_ratio(kSquare, kSquareLabels, 2) - 4.0) < 1e-9);
  CHECK(discriminative_ratio(Matrix{{1, 0}, {2, 0}, {0, 0}, {3, 0}}, std::vector<std::uint32_t>{0, 0, 1, 1}, 2) == 0.0);
  CHECK(code_of([] { discriminative_ratio(Matrix{{0, 0}, {0, 0}, {1, 1}}, std::vector<std::uint32_t>{0, 0, 1}, 2); }) ==
        ErrorCode::DegenerateIntra);
}

TEST_CASE("pairwise forms examples") {
  CHECK(intra_pairwise(kSquare, kSquareLabels, 2) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(inter_pairwise(kSquare, kSquareLabels, 2) - 3.0) < 1e-9);
  CHECK(code_of([] { intra_pairwise(Matrix{{0}, {1}}, std::vector<std::uint32_t>{0, 2}, 3); }) == ErrorCode::EmptyClass);
}

TEST_CASE("distances match loop oracles and pairwise identities on random sets") {
  numkit::RngStream rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = random_set(rng);
    const auto o = oracle(s);
    const double c = static_cast<double>(s.classes);
    double intra = 0, inter = 0, inter_pw = 0;
    for (std::size_t j = 0; j < s.classes; ++j) {
      intra += o.var[j] / c;
      for (std::size_t k = 0; k < s.classes; ++k) {
        if (j == k) continue;
        const double dmu = sq_dist(o.mu[j], o.mu[k]);
        inter += dmu / (c * (c - 1));
        inter_pw += 0.5 * (dmu + o.var[j] + o.var[k]) / (c * (c - 1));
      }
    }
    const double tol = 1e-10 * std::max(1.0, inter_pw);
    CHECK(std::abs(intra_class_distance(s.f, s.labels, s.classes) - intra) < tol);
    CHECK(std::abs(inter_class_distance(s.f, s.labels, s.classes) - inter) < tol);
    CHECK(std::abs(intra_pairwise(s.f, s.labels, s.classes) - intra_class_distance(s.f, s.labels, s.classes)) < tol);
    CHECK(std::abs(inter_pairwise(s.f, s.labels, s.classes) - inter_pw) < tol);
  }
}

TEST_CASE("discriminative ratio invariances") {
  numkit::RngStream rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = random_set(rng);
    const double phi = discriminative_ratio(s.f, s.labels, s.classes);
    Matrix moved = s.f;
    const double a = 0.5 + 3 * rng.uniform();
    std::vector<double> shift(s.f.cols());
    for (auto& v : shift) v = rng.normal(0, 10);
    for (std::size_t i = 0; i < moved.rows(); ++i)
      for (std::size_t k = 0; k < moved.cols(); ++k) moved(i, k) = a * moved(i, k) + shift[k];
    CHECK(discriminative_ratio(moved, s.labels, s.classes) == doctest::Approx(phi).epsilon(1e-9));
    // relabelling classes leaves every metric unchanged
    std::vector<std::uint32_t> relabeled(s.labels);
    for (auto& l : relabeled) l = static_cast<std::uint32_t>(s.classes - 1 - l);
    CHECK(discriminative_ratio(s.f, relabeled, s.classes) == doctest::Approx(phi).epsilon(1e-12));
  }
}

TEST_CASE("mixtureness examples") {
  const auto two = make_set(Matrix{{0, 0}, {5, 1}}, {0, 1}, {Domain::Pre, Domain::Eval});
  CHECK(feature_mixtureness(two, 1) == 0.5);

  // 3 pre at x=0 and 3 eval at x=10, y in {0,1,2}
  const auto blocks = make_set(Matrix{{0, 0}, {0, 1}, {0, 2}, {10, 0}, {10, 1}, {10, 2}}, {0, 1, 2, 3, 4, 5},
                               {Domain::Pre, Domain::Pre, Domain::Pre, Domain::Eval, Domain::Eval, Domain::Eval});
  CHECK(std::abs(feature_mixtureness(blocks, 2) - 0.5) < 1e-9);

  // alternating on a line: pre at y=0,2,4 and eval at y=1,3,5
  const auto line = make_set(Matrix{{0, 0}, {0, 2}, {0, 4}, {0, 1}, {0, 3}, {0, 5}}, {0, 1, 2, 3, 4, 5},
                             {Domain::Pre, Domain::Pre, Domain::Pre, Domain::Eval, Domain::Eval, Domain::Eval});
  CHECK(std::abs(feature_mixtureness(line, 2) - 2.0 / 3.0) < 1e-9);

  CHECK(code_of([&] { feature_mixtureness(line, 0); }) == ErrorCode::OutOfRange);
  CHECK(code_of([&] { feature_mixtureness(line, 6); }) == ErrorCode::OutOfRange);
  CHECK(code_of([&] { feature_mixtureness(line.select_domain(Domain::Pre), 1); }) == ErrorCode::SingleDomain);
  CHECK(default_mixtureness_k(45) == 5);
  CHECK(default_mixtureness_k(4) == 1);
}

TEST_CASE("mixtureness falls as the domain gap grows") {
  datamodel::SyntheticConfig cfg;
  cfg.c_pre = 10;
  cfg.c_eval = 5;
  cfg.dim = 8;
  cfg.samples_per_class = 3;
  double low_gap = 0, high_gap = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    cfg.seed = seed;
    cfg.gap = 0;
    low_gap += feature_mixtureness(generate_synthetic(cfg), 2);
    cfg.gap = 30;
    high_gap += feature_mixtureness(generate_synthetic(cfg), 2);
  }
  CHECK(low_gap > high_gap);
}

TEST_CASE("redundancy examples") {
  CHECK(feature_redundancy(Matrix{{1, 1, 1}, {2, 2, 2}}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(feature_redundancy(Matrix{{1, 0}, {0, 1}}) == 0.5);
  CHECK(std::abs(feature_redundancy(Matrix{{1, 1}, {1, -1}}) - 0.5) < 1e-15);
  CHECK(code_of([] { feature_redundancy(Matrix{{1, 0}, {2, 0}}); }) == ErrorCode::ZeroChannel);
  CHECK(code_of([] { feature_redundancy(Matrix{{1, 3}, {1, 4}}, true); }) == ErrorCode::ZeroChannel);
  // centered: columns (1,2,3) and (3,2,1) are perfectly anti-correlated
  CHECK(feature_redundancy(Matrix{{1, 3}, {2, 2}, {3, 1}}, true) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("transfer probability examples") {
  const Matrix uniform(3, 4, 0.25);
  CHECK(std::abs(transfer_probability_from_probs(uniform, std::vector<std::uint32_t>{0, 0, 1}, 2).p - 0.25) < 1e-12);
  const Matrix onehot{{0, 1, 0}, {0, 1, 0}, {1, 0, 0}};
  CHECK(transfer_probability_from_probs(onehot, std::vector<std::uint32_t>{0, 0, 1}, 2).p == 1.0);
  const auto r = transfer_probability_from_probs(Matrix{{0.8, 0.2}}, std::vector<std::uint32_t>{0}, 1);
  CHECK(std::abs(r.p - 0.68) < 1e-9);
  CHECK(r.per_class.size() == 1);
  CHECK(transfer_probability(Matrix{{5, 5, 5, 5}}, std::vector<std::uint32_t>{0}, 1).p == doctest::Approx(0.25));
  CHECK(code_of([] { transfer_probability_from_probs(Matrix{{1.0}}, std::vector<std::uint32_t>{0, 0}, 1); }) ==
        ErrorCode::DimensionMismatch);
}

TEST_CASE("metric bounds on random inputs") {
  numkit::RngStream rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t c = 3 + rng.uniform_index(10);
    const std::size_t d = 1 + rng.uniform_index(12);
    const std::size_t n = c * (1 + rng.uniform_index(4));
    Matrix f(n, d);
    std::vector<std::uint32_t> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      labels[i] = static_cast<std::uint32_t>(i % c);
      for (std::size_t k = 0; k < d; ++k) f(i, k) = rng.normal() + (rng.uniform() < 0.3 ? 5.0 : 0.0);
    }
    std::vector<Domain> cd(c, Domain::Pre);
    for (std::size_t j = 0; j < c; ++j)
      if (j == 0 || (j != 1 && rng.uniform() < 0.5)) cd[j] = Domain::Eval;
    const auto set = make_set(f, labels, cd);
    const double pi = feature_mixtureness(set, 1 + rng.uniform_index(c - 1));
    CHECK((pi >= 0.0 && pi <= 1.0));
    const double r = feature_redundancy(f);
    CHECK((r >= 1.0 / static_cast<double>(d) - 1e-12 && r <= 1.0 + 1e-12));

    const std::size_t c_pre = 2 + rng.uniform_index(20);
    Matrix logits(n, c_pre);
    const double temp = std::exp(6 * rng.uniform() - 3);
    for (auto& v : logits.values()) v = temp * rng.normal();
    const double p = transfer_probability(logits, labels, c).p;
    CHECK((p >= 1.0 / static_cast<double>(c_pre) - 1e-12 && p <= 1.0 + 1e-12));
  }
}

TEST_CASE("psi ratio examples") {
  const auto pre = make_set(kSquare, kSquareLabels, {Domain::Pre, Domain::Pre});
  CHECK(psi_ratio(pre, pre) == 1.0);
  Matrix doubled = kSquare;
  for (auto& v : doubled.values()) v *= 2;
  const auto eval = make_set(doubled, kSquareLabels, {Domain::Eval, Domain::Eval});
  CHECK(psi_ratio(pre, eval) == 4.0);
  CHECK(psi_ratio(pre, eval) == inter_class_distance(eval) / inter_class_distance(pre));
  const auto flat = make_set(Matrix{{1, 0}, {1, 0}}, {0, 1}, {Domain::Pre, Domain::Pre});
  CHECK(code_of([&] { psi_ratio(flat, eval); }) == ErrorCode::DegenerateInter);
}

TEST_CASE("threshold examples") {
  CHECK(std::abs(threshold_from(2.0, 1.0, 0.5) - 1.0) < 1e-9);
  CHECK(std::abs(threshold_from(3.0, 1.0, 0.25) - 1.0 / 6.0) < 1e-9);
  CHECK(std::abs(threshold_from(6.0, 2.0, 0.25) - 1.0 / 6.0) < 1e-9);
  CHECK(std::isinf(threshold_from(1.0, 1.0, 0.5)));
  CHECK(std::isinf(threshold_from(0.5, 1.0, 0.5)));
  CHECK(std::isinf(threshold_from(2.0, 1.0, 1.0)));
  CHECK(code_of([] { threshold_from(2.0, 1.0, 0.0); }) == ErrorCode::ProbabilityOutOfRange);
  CHECK(code_of([] { threshold_from(2.0, 0.0, 0.5); }) == ErrorCode::DegenerateInter);
  CHECK(code_of([] { threshold_from(NAN, 1.0, 0.5); }) == ErrorCode::NonFinite);
}

TEST_CASE("psi0 is the least-squares intercept") {
  TheoremTrace trace;
  for (std::uint32_t e = 0; e < 5; ++e) {
    TheoremRecord r;
    r.epoch = e * 10;
    r.phi_pre_inv = 1.0 / (1.0 + e);
    r.psi = 0.7 + 2.0 * r.phi_pre_inv;
    r.p = 0.5;
    trace.records.push_back(r);
  }
  CHECK(estimate_psi0(trace) == doctest::Approx(0.7).epsilon(1e-12));
  const auto t = estimate_threshold(trace);
  CHECK(trace.psi0 == doctest::Approx(0.7).epsilon(1e-12));
  REQUIRE(t.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(t[i] == doctest::Approx(threshold_from(trace.records[i].psi, trace.psi0, 0.5)));
    CHECK_FALSE(trace.records[i].t_unbounded);
  }

  // flat psi: psi0 equals psi everywhere, every t is unbounded
  for (auto& r : trace.records) r.psi = 1.3;
  for (double v : estimate_threshold(trace)) CHECK(std::isinf(v));
  for (const auto& r : trace.records) CHECK(r.t_unbounded);

  trace.records.resize(2);
  CHECK(code_of([&] { estimate_threshold(trace); }) == ErrorCode::TooFewCheckpoints);
}

TEST_CASE("report over a synthetic set") {
  datamodel::SyntheticConfig cfg;
  cfg.c_pre = 10;
  cfg.c_eval = 5;
  cfg.dim = 6;
  cfg.samples_per_class = 4;
  const auto set = generate_synthetic(cfg);
  const auto r = compute_report(set);
  const auto pre = set.select_domain(Domain::Pre);
  CHECK(r.phi == discriminative_ratio(pre));
  CHECK(r.d_inter == inter_class_distance(pre));
  CHECK(r.k_used == 2);
  CHECK(r.mixtureness == feature_mixtureness(set, 2));
  CHECK(r.redundancy == feature_redundancy(set.features()));
  CHECK(r.flags.empty());
  const auto dead = compute_report(set.with_features([&] {
    Matrix f = set.features();
    for (std::size_t i = 0; i < f.rows(); ++i) f(i, 0) = 0.0;
    return f;
  }()));
  CHECK(std::isnan(dead.redundancy));
  CHECK(dead.flags == std::vector<std::string>{"redundancy:ZeroChannel"});
  CHECK(dead.first_error == ErrorCode::ZeroChannel);
  CHECK(std::isfinite(dead.phi));
  const auto j = to_json(r);
  CHECK(j.at("phi").get<double>() == r.phi);

  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(format_real(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_real(NAN) == "nan");
  CHECK(json_real(NAN).is_null());
}
