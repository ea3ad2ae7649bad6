#pragma once

#include <vector>

#include "l1coreset/types.hpp"

namespace l1coreset {

struct LewisConfig {
  int max_iters = 20;
  double tol = 1e-6;

  void validate() const;
};

struct LewisResult {
  WeightVector weights;
  int iterations = 0;
  // max_i |tau_i^2 - x_i^T (X^T W X)^+ x_i| / max(tau_i^2, 1e-30) at the returned weights.
  double residual = 0.0;
};

/// l1 Lewis weights by the fixed-point iteration
///   tau_i <- sqrt(x_i^T (X^T diag(1/tau) X)^+ x_i),
/// started from tau_i = d/n. Zero rows get tau_i = 0 and stay out of the Gram
/// matrix. Non-convergence is reported through `residual`, never thrown.
LewisResult lewis_weights(const DenseMatrix& X, const LewisConfig& cfg = {});

/// Fixed-point defect of arbitrary candidate weights.
double lewis_residual(const DenseMatrix& X, const Vector& tau);

/// sqrt of the statistical leverage scores (unnormalized).
WeightVector sqrt_leverage_distribution(const DenseMatrix& X);

/// All-ones scores for n rows.
WeightVector uniform_distribution(Index n);

/// p_i = m * base_i / sum_j base_j with base_i = max(w_i, 1/n) when
/// `uniform_mix` is set, else w_i. The result sums to m.
WeightVector sampling_probabilities(const WeightVector& w, Index m, bool uniform_mix,
                                    double mu_oversample = 1.0);

struct Histogram {
  std::vector<double> edges;  // bins + 1 log-spaced edges, edges.front() == 1
  std::vector<std::size_t> counts;
  std::vector<double> ratios;  // the per-row max(p_i/q_i, q_i/p_i)

  std::size_t total() const;
};

/// Histogram of max(p_i/q_i, q_i/p_i) after normalizing p and q to
/// probability vectors.
Histogram distribution_ratio_histogram(const WeightVector& p, const WeightVector& q,
                                       std::size_t bins);

}  // namespace l1coreset
