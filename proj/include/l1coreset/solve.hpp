#pragma once

#include <optional>

#include "l1coreset/losses.hpp"
#include "l1coreset/types.hpp"

namespace l1coreset {

struct SolveConfig {
  int max_iters = 500;
  // Smooth stop: ||grad||_inf <= grad_tol * (1 + |objective|).
  double grad_tol = 1e-8;
  double initial_step = 1.0;
  double shrink = 0.5;
  double sufficient_decrease = 1e-4;
  int history = 10;

  void validate() const;
};

struct SolveResult {
  Vector beta;
  double objective = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Minimizes sum_i f((Z beta)_i) + reg, or the coreset-weighted version when
/// `coreset` is given, with L-BFGS and backtracking. For the nonsmooth losses,
/// failed line searches fall back to subgradient steps of size ~ 1/sqrt(k)
/// and the best iterate seen is returned.
SolveResult minimize(const LabeledMatrix& data, const NiceHinge& f, const Regularizer& reg,
                     const Coreset* coreset = nullptr, const SolveConfig& cfg = {},
                     std::optional<Vector> beta0 = std::nullopt);

/// |L(beta_tilde) - L(beta*)| / L(beta*) with L the full-data objective.
double relative_loss(double beta_star_objective, const Vector& beta_tilde,
                     const LabeledMatrix& data, const NiceHinge& f, const Regularizer& reg);

}  // namespace l1coreset
