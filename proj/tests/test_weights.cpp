#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "l1coreset/data.hpp"
#include "l1coreset/error.hpp"
#include "l1coreset/linalg.hpp"
#include "l1coreset/weights.hpp"
#include "test_util.hpp"

using namespace l1coreset;
using l1coreset::testing::gaussian;

namespace {

// Fixed-point defect by brute force: tau_i^2 against x_i^T (X^T W X)^{-1} x_i
// with a dense LDLT solve (full column rank inputs only).
double definition_defect(const DenseMatrix& X, const Vector& tau) {
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(X.cols(), X.cols());
  for (Index i = 0; i < X.rows(); ++i) M += X.row(i).transpose() * X.row(i) / tau(i);
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(M);
  double worst = 0.0;
  for (Index i = 0; i < X.rows(); ++i) {
    const Eigen::VectorXd x = X.row(i).transpose();
    const double q = x.dot(ldlt.solve(x));
    worst = std::max(worst, std::abs(tau(i) * tau(i) - q) / (tau(i) * tau(i)));
  }
  return worst;
}

}  // namespace

TEST_CASE("lewis weights of the identity are one after a single iteration") {
  for (Index d : {1, 2, 5}) {
    const LewisResult r = lewis_weights(DenseMatrix::Identity(d, d));
    CHECK(r.iterations == 1);
    CHECK(r.residual < 1e-15);
    CHECK((r.weights.values.array() - 1.0).abs().maxCoeff() < 1e-15);
    CHECK(r.weights.kind == WeightKind::LewisWeights);
  }
}

TEST_CASE("lewis weights of stacked identities are one half") {
  for (Index d : {1, 3, 6}) {
    DenseMatrix X(2 * d, d);
    X << DenseMatrix::Identity(d, d), DenseMatrix::Identity(d, d);
    const LewisResult r = lewis_weights(X);
    CHECK((r.weights.values.array() - 0.5).abs().maxCoeff() < 1e-9);
    CHECK(r.residual < 1e-9);
  }
}

TEST_CASE("lewis weights on a random 200x5 matrix converge within 20 iterations") {
  const DenseMatrix X = gaussian(200, 5, 42);
  const LewisResult r = lewis_weights(X);
  CHECK(r.iterations <= 20);
  CHECK(r.residual < 1e-5);
  CHECK(r.weights.values.sum() == doctest::Approx(5.0).epsilon(1e-3 / 5.0));

  LewisConfig long_run;
  long_run.max_iters = 200;
  long_run.tol = 1e-15;
  const LewisResult ref = lewis_weights(X, long_run);
  CHECK(ref.weights.values.sum() == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(definition_defect(X, ref.weights.values) < 1e-12);
  CHECK(((r.weights.values - ref.weights.values).array() / ref.weights.values.array()).abs().maxCoeff() < 1e-5);
  // The residual reported by the library agrees with the brute-force defect.
  CHECK(std::abs(r.residual - definition_defect(X, r.weights.values)) < 1e-9);
}

TEST_CASE("lewis weights ignore label signs") {
  const DenseMatrix X = gaussian(150, 4, 7);
  std::vector<int> y(150);
  CounterRng rng(99);
  for (auto& v : y) v = rng.uniform() < 0.5 ? -1 : 1;
  const LabeledMatrix Z = data::fold_labels(X, y);
  const Vector a = lewis_weights(X).weights.values;
  const Vector b = lewis_weights(Z.Z).weights.values;
  CHECK((a - b).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("lewis weights are invariant under invertible column mixing") {
  LewisConfig cfg;
  cfg.max_iters = 60;
  cfg.tol = 1e-12;
  for (std::uint64_t s = 0; s < 5; ++s) {
    const DenseMatrix X = gaussian(120, 4, 300 + s);
    const DenseMatrix T = gaussian(4, 4, 400 + s) + 2.0 * DenseMatrix::Identity(4, 4);
    const Vector a = lewis_weights(X, cfg).weights.values;
    const Vector b = lewis_weights(X * T, cfg).weights.values;
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("zero rows get weight zero and do not disturb the others") {
  const DenseMatrix X = gaussian(60, 3, 11);
  DenseMatrix padded(63, 3);
  padded << X.topRows(20), DenseMatrix::Zero(2, 3), X.bottomRows(40), DenseMatrix::Zero(1, 3);
  LewisConfig cfg;
  cfg.max_iters = 80;
  cfg.tol = 1e-13;
  const Vector a = lewis_weights(X, cfg).weights.values;
  const LewisResult r = lewis_weights(padded, cfg);
  const Vector& b = r.weights.values;
  CHECK(b(20) == 0.0);
  CHECK(b(21) == 0.0);
  CHECK(b(62) == 0.0);
  CHECK((a.head(20) - b.head(20)).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((a.tail(40) - b.segment(22, 40)).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(r.residual < 1e-9);
}

TEST_CASE("lewis weights sum to d and converge on random full-rank Gaussians") {
  int converged = 0;
  CounterRng rng(2024);
  for (int t = 0; t < 100; ++t) {
    const Index d = 1 + static_cast<Index>(rng() % 30);
    const Index n = 2 * d + static_cast<Index>(rng() % 800);
    const DenseMatrix X = gaussian(n, d, 7000 + static_cast<std::uint64_t>(t));
    const LewisResult r = lewis_weights(X);
    CHECK(r.weights.values.sum() == doctest::Approx(static_cast<double>(d)).epsilon(1e-4));
    CHECK(r.weights.values.minCoeff() >= 0.0);
    if (r.residual < 1e-5) ++converged;
  }
  CHECK(converged >= 95);
}

TEST_CASE("lewis config is validated") {
  LewisConfig bad;
  bad.max_iters = 0;
  CHECK_THROWS_AS(lewis_weights(DenseMatrix::Identity(2, 2), bad), Error);
  bad.max_iters = 5;
  bad.tol = 0.0;
  CHECK_THROWS_AS(lewis_weights(DenseMatrix::Identity(2, 2), bad), Error);
}

TEST_CASE("sqrt leverage distribution") {
  const WeightVector w = sqrt_leverage_distribution(DenseMatrix::Identity(4, 4));
  CHECK((w.values.array() - 1.0).abs().maxCoeff() < 1e-12);
  CHECK(w.kind == WeightKind::SqrtLeverage);

  // Leverage scores (0.25, 1): row 0 is one of four identical copies of e1.
  DenseMatrix X = DenseMatrix::Zero(5, 2);
  X.col(0).head(4).setOnes();
  X(4, 1) = 1.0;
  const WeightVector s = sqrt_leverage_distribution(X);
  CHECK(s.values(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(s.values(4) == doctest::Approx(1.0).epsilon(1e-12));

  const DenseMatrix R = gaussian(50, 4, 77);
  const WeightVector r = sqrt_leverage_distribution(R);
  CHECK(r.values.squaredNorm() == doctest::Approx(4.0).epsilon(1e-8));
  CHECK((r.values.array().square() - linalg::leverage_scores(R).array()).abs().maxCoeff() < 1e-12);
}

TEST_CASE("sampling probabilities: worked examples") {
  const WeightVector p = sampling_probabilities(uniform_distribution(5), 10, false);
  for (Index i = 0; i < 5; ++i) CHECK(p.values(i) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(p.kind == WeightKind::SamplingProb);
  CHECK(p.source == WeightKind::Uniform);

  WeightVector w;
  w.values = (Vector(3) << 0, 0, 1).finished();
  w.kind = WeightKind::LewisWeights;
  const WeightVector q = sampling_probabilities(w, 3, true);
  CHECK(q.values(0) == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(q.values(1) == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(q.values(2) == doctest::Approx(1.8).epsilon(1e-14));
}

TEST_CASE("sampling probabilities from lewis weights keep ratios and sum to m") {
  const DenseMatrix X = gaussian(100, 4, 31);
  const WeightVector lw = lewis_weights(X).weights;
  for (bool mix : {false, true}) {
    const WeightVector p = sampling_probabilities(lw, 50, mix, 4.0);
    CHECK(std::abs(p.values.sum() - 50.0) <= 1e-9 * 50.0);
    CHECK(p.mu_oversample == 4.0);
    const Vector base = mix ? Vector(lw.values.cwiseMax(0.01)) : lw.values;
    for (Index i = 0; i < 100; i += 7)
      for (Index j = 1; j < 100; j += 13)
        CHECK(std::abs(p.values(i) / p.values(j) - base(i) / base(j)) <= 1e-12 * base(i) / base(j));
  }
}

TEST_CASE("sampling probabilities preserve ordering and ties") {
  CounterRng rng(5);
  for (int t = 0; t < 50; ++t) {
    WeightVector w;
    const Index n = 2 + static_cast<Index>(rng() % 40);
    w.values.resize(n);
    for (Index i = 0; i < n; ++i) w.values(i) = static_cast<double>(rng() % 5) * rng.uniform();
    w.values(0) = 1.0;
    w.values(n - 1) = 1.0;  // a guaranteed tie
    const Index m = 1 + static_cast<Index>(rng() % 1000);
    const bool mix = t % 2 == 0;
    const WeightVector p = sampling_probabilities(w, m, mix);
    CHECK(std::abs(p.values.sum() - static_cast<double>(m)) <= 1e-9 * static_cast<double>(m));
    const Vector base = mix ? Vector(w.values.cwiseMax(1.0 / static_cast<double>(n))) : w.values;
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) {
        if (base(i) < base(j)) CHECK(p.values(i) <= p.values(j));
        if (base(i) == base(j)) CHECK(std::abs(p.values(i) - p.values(j)) <= 1e-12 * static_cast<double>(m));
      }
  }
}

TEST_CASE("sampling probabilities reject zero mass and bad parameters") {
  WeightVector w;
  w.values = Vector::Zero(4);
  try {
    sampling_probabilities(w, 3, false);
    FAIL("expected ZeroMass");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroMass);
  }
  CHECK_NOTHROW(sampling_probabilities(w, 3, true));
  CHECK_THROWS_AS(sampling_probabilities(uniform_distribution(3), 0, false), Error);
  CHECK_THROWS_AS(sampling_probabilities(uniform_distribution(3), 2, false, 0.5), Error);
}

TEST_CASE("distribution ratio histogram") {
  const WeightVector u = uniform_distribution(6);
  const Histogram same = distribution_ratio_histogram(u, u, 10);
  CHECK(same.counts.front() == 6);
  CHECK(same.total() == 6);
  CHECK(same.edges.size() == 11);

  WeightVector p, q;
  p.values = (Vector(2) << 1, 4).finished() / 5.0 * 7.0;
  q.values = (Vector(2) << 1, 1).finished() / 2.0 * 7.0;
  const Histogram h = distribution_ratio_histogram(p, q, 4);
  CHECK(h.ratios[0] == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(h.ratios[1] == doctest::Approx(1.6).epsilon(1e-14));
  CHECK(h.edges.back() == doctest::Approx(2.5));
  CHECK(h.total() == 2);
  CHECK(h.counts.back() == 1);

  CHECK_THROWS_AS(distribution_ratio_histogram(uniform_distribution(3), uniform_distribution(4), 5), Error);
}

TEST_CASE("lewis weights are far from uniform on heavy-tailed data") {
  const LabeledMatrix Z = data::gen_synthetic(5000, 10, 3.0, 1);
  const WeightVector lw = lewis_weights(Z.Z).weights;
  const Histogram h = distribution_ratio_histogram(uniform_distribution(Z.rows()), lw, 30);
  // Direct computation of the largest ratio.
  const Vector pl = lw.values / lw.values.sum();
  double expected = 1.0;
  for (Index i = 0; i < pl.size(); ++i) {
    const double u = 1.0 / 5000.0;
    const double a = std::max(pl(i), 1e-300);
    expected = std::max(expected, std::max(a / u, u / a));
  }
  CHECK(h.edges.back() == doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected > 10.0);
  CHECK(h.total() == 5000);
}
