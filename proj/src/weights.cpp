#include "l1coreset/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "l1coreset/error.hpp"
#include "l1coreset/linalg.hpp"

namespace l1coreset {

void LewisConfig::validate() const {
  if (max_iters < 1) throw Error(ErrorCode::InvalidConfig, "lewis max_iters must be >= 1");
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidConfig, "lewis tol must be > 0");
}

namespace {

// x_i^T (X^T diag(1/tau) X)^+ x_i through the leverage scores of the
// reweighted rows x_i / sqrt(tau_i). Rows with tau_i == 0 are skipped and get 0.
Vector reweighted_quadratic_forms(const DenseMatrix& X, const Vector& tau) {
  const Index n = X.rows();
  std::vector<Index> active;
  active.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i)
    if (tau(i) > 0.0) active.push_back(i);

  Vector q = Vector::Zero(n);
  if (active.empty()) return q;
  DenseMatrix Y(static_cast<Index>(active.size()), X.cols());
  for (std::size_t r = 0; r < active.size(); ++r)
    Y.row(static_cast<Index>(r)) = X.row(active[r]) / std::sqrt(tau(active[r]));
  const Vector lev = linalg::leverage_scores(Y);
  for (std::size_t r = 0; r < active.size(); ++r) q(active[r]) = tau(active[r]) * lev(static_cast<Index>(r));
  return q;
}

}  // namespace

double lewis_residual(const DenseMatrix& X, const Vector& tau) {
  if (tau.size() != X.rows()) throw Error(ErrorCode::LengthMismatch, "tau length != rows");
  // Gram route, independent of the QR route used by the iteration.
  DenseMatrix M = DenseMatrix::Zero(X.cols(), X.cols());
  for (Index i = 0; i < X.rows(); ++i)
    if (tau(i) > 0.0) M.noalias() += X.row(i).transpose() * X.row(i) / tau(i);
  const DenseMatrix Mp = linalg::pseudo_inverse_psd(M);

  double worst = 0.0;
  for (Index i = 0; i < X.rows(); ++i) {
    if (X.row(i).squaredNorm() == 0.0 && tau(i) == 0.0) continue;
    const double q = X.row(i) * Mp * X.row(i).transpose();
    const double t2 = tau(i) * tau(i);
    worst = std::max(worst, std::abs(t2 - q) / std::max(t2, 1e-30));
  }
  return worst;
}

LewisResult lewis_weights(const DenseMatrix& X, const LewisConfig& cfg) {
  cfg.validate();
  linalg::require_finite(X, "lewis_weights input");
  const Index n = X.rows();
  const double init = static_cast<double>(X.cols()) / static_cast<double>(n);

  Vector tau(n);
  for (Index i = 0; i < n; ++i) tau(i) = X.row(i).squaredNorm() > 0.0 ? init : 0.0;

  LewisResult result;
  for (int it = 1; it <= cfg.max_iters; ++it) {
    const Vector q = reweighted_quadratic_forms(X, tau);
    double change = 0.0;
    for (Index i = 0; i < n; ++i) {
      if (tau(i) == 0.0) continue;
      const double next = std::sqrt(q(i));
      change = std::max(change, std::abs(next / tau(i) - 1.0));
      tau(i) = next;
    }
    result.iterations = it;
    if (change < cfg.tol) break;
  }

  result.weights.values = tau;
  result.weights.kind = WeightKind::LewisWeights;
  result.weights.source = WeightKind::LewisWeights;
  result.weights.declared_sum = static_cast<double>(X.cols());
  result.residual = lewis_residual(X, tau);
  return result;
}

WeightVector sqrt_leverage_distribution(const DenseMatrix& X) {
  WeightVector w;
  w.values = linalg::leverage_scores(X).unaryExpr([](double l) { return std::sqrt(std::max(l, 0.0)); });
  w.kind = WeightKind::SqrtLeverage;
  w.source = WeightKind::SqrtLeverage;
  w.declared_sum = w.values.sum();
  return w;
}

WeightVector uniform_distribution(Index n) {
  WeightVector w;
  w.values = Vector::Ones(n);
  w.kind = WeightKind::Uniform;
  w.source = WeightKind::Uniform;
  w.declared_sum = static_cast<double>(n);
  return w;
}

WeightVector sampling_probabilities(const WeightVector& w, Index m, bool uniform_mix,
                                    double mu_oversample) {
  if (m < 1) throw Error(ErrorCode::InvalidConfig, "sample count m must be >= 1");
  if (!(mu_oversample >= 1.0)) throw Error(ErrorCode::InvalidConfig, "mu_oversample must be >= 1");
  linalg::require_finite(w.values, "weight vector");
  if ((w.values.array() < 0.0).any()) throw Error(ErrorCode::InvalidConfig, "weights must be nonnegative");
  const Index n = w.size();
  if (n == 0) throw Error(ErrorCode::ZeroMass, "empty weight vector");

  Vector base = w.values;
  if (uniform_mix) base = base.cwiseMax(1.0 / static_cast<double>(n));
  const double total = base.sum();
  if (!(total > 0.0)) throw Error(ErrorCode::ZeroMass, "sampling scores sum to zero");

  WeightVector p;
  const double md = static_cast<double>(m);
  p.values = base * (md / total);
  Index top = 0;
  p.values.maxCoeff(&top);
  p.values(top) += md - p.values.sum();
  p.kind = WeightKind::SamplingProb;
  p.source = w.kind == WeightKind::SamplingProb ? w.source : w.kind;
  p.declared_sum = md;
  p.uniform_mix = uniform_mix;
  p.mu_oversample = mu_oversample;
  return p;
}

std::size_t Histogram::total() const {
  std::size_t s = 0;
  for (auto c : counts) s += c;
  return s;
}

Histogram distribution_ratio_histogram(const WeightVector& p, const WeightVector& q,
                                       std::size_t bins) {
  if (p.size() != q.size()) throw Error(ErrorCode::LengthMismatch, "histogram inputs differ in length");
  if (bins == 0) throw Error(ErrorCode::InvalidConfig, "histogram needs at least one bin");
  const double ps = p.values.sum();
  const double qs = q.values.sum();
  if (!(ps > 0.0) || !(qs > 0.0)) throw Error(ErrorCode::ZeroMass, "histogram input has zero mass");

  Histogram h;
  h.ratios.resize(static_cast<std::size_t>(p.size()));
  double top = 1.0;
  for (Index i = 0; i < p.size(); ++i) {
    const double a = std::max(p.values(i) / ps, 1e-300);
    const double b = std::max(q.values(i) / qs, 1e-300);
    const double r = std::max(a / b, b / a);
    h.ratios[static_cast<std::size_t>(i)] = r;
    top = std::max(top, r);
  }
  if (top <= 1.0) top = std::nextafter(1.0, 2.0);

  const double log_top = std::log(top);
  h.edges.resize(bins + 1);
  for (std::size_t k = 0; k <= bins; ++k)
    h.edges[k] = std::exp(log_top * static_cast<double>(k) / static_cast<double>(bins));
  h.edges.front() = 1.0;
  h.edges.back() = top;

  h.counts.assign(bins, 0);
  for (double r : h.ratios) {
    const double pos = std::log(r) / log_top * static_cast<double>(bins);
    auto k = static_cast<std::size_t>(std::clamp(pos, 0.0, static_cast<double>(bins - 1)));
    ++h.counts[k];
  }
  return h;
}

}  // namespace l1coreset
