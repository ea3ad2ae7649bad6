#include "l1coreset/solve.hpp"

#include <cmath>
#include <deque>
#include <limits>

#include "l1coreset/error.hpp"
#include "l1coreset/linalg.hpp"

namespace l1coreset {

void SolveConfig::validate() const {
  if (max_iters < 1 || !(grad_tol > 0.0) || !(initial_step > 0.0) || !(shrink > 0.0 && shrink < 1.0) ||
      !(sufficient_decrease > 0.0 && sufficient_decrease < 1.0) || history < 1)
    throw Error(ErrorCode::InvalidConfig, "solver parameters must be positive (shrink, c1 in (0,1))");
}

namespace {

// Huber-type smoothing of the kinked losses: the kink at `knee` is replaced by
// a quadratic on [knee, knee + delta]. Sup-distance to the exact loss is delta/2.
struct ScalarLoss {
  const NiceHinge& f;
  double delta = 0.0;

  double knee() const { return f.kind() == LossKind::Hinge ? -1.0 : 0.0; }

  double value(double z) const {
    if (delta == 0.0 || f.smooth()) return f(z);
    const double u = z - knee();
    if (u <= 0.0) return 0.0;
    if (u < delta) return u * u / (2.0 * delta);
    return u - 0.5 * delta;
  }

  double derivative(double z) const {
    if (delta == 0.0 || f.smooth()) return f.derivative(z);
    const double u = z - knee();
    if (u <= 0.0) return 0.0;
    return u < delta ? u / delta : 1.0;
  }
};

// sum_j w_j f(<a_j, beta>) + reg(beta) over either the full data or a coreset.
class Objective {
 public:
  Objective(const LabeledMatrix& data, const NiceHinge& f, const Regularizer& reg, const Coreset* coreset)
      : f_(f), reg_(reg) {
    if (coreset == nullptr) {
      rows_ = &data.Z;
      weights_ = Vector::Ones(data.rows());
      return;
    }
    const auto m = static_cast<Index>(coreset->size());
    if (coreset->weights.size() != coreset->indices.size())
      throw Error(ErrorCode::LengthMismatch, "coreset indices and weights differ in length");
    owned_.resize(m, data.cols());
    weights_.resize(m);
    for (Index j = 0; j < m; ++j) {
      const Index i = coreset->indices[static_cast<std::size_t>(j)];
      if (i < 0 || i >= data.rows()) throw Error(ErrorCode::IndexOutOfRange, "coreset index out of range");
      owned_.row(j) = data.Z.row(i);
      weights_(j) = coreset->weights[static_cast<std::size_t>(j)];
    }
    rows_ = &owned_;
  }

  Index dim() const { return rows_->cols(); }

  void set_smoothing(double delta) { loss_.delta = delta; }

  double value_and_gradient(const Vector& beta, Vector& grad) const {
    const Vector z = (*rows_) * beta;
    Vector fp(z.size());
    double sum = 0.0;
    for (Index i = 0; i < z.size(); ++i) {
      sum += weights_(i) * loss_.value(z(i));
      fp(i) = weights_(i) * loss_.derivative(z(i));
    }
    grad.noalias() = rows_->transpose() * fp;
    grad += reg_.gradient(beta);
    sum += reg_.value(beta);
    if (!std::isfinite(sum) || !grad.allFinite())
      throw Error(ErrorCode::NonFinite, "objective diverged during minimization");
    return sum;
  }

 private:
  const NiceHinge& f_;
  ScalarLoss loss_{f_, 0.0};
  const Regularizer& reg_;
  const DenseMatrix* rows_ = nullptr;
  DenseMatrix owned_;
  Vector weights_;
};

constexpr double kNonsmoothStall = 1e-10;

struct Pair {
  Vector s, y;
  double rho;
};

Vector two_loop(const std::deque<Pair>& mem, const Vector& g) {
  Vector q = g;
  std::vector<double> alpha(mem.size());
  for (std::size_t k = mem.size(); k-- > 0;) {
    alpha[k] = mem[k].rho * mem[k].s.dot(q);
    q -= alpha[k] * mem[k].y;
  }
  if (!mem.empty()) q *= mem.back().s.dot(mem.back().y) / mem.back().y.squaredNorm();
  for (std::size_t k = 0; k < mem.size(); ++k) {
    const double b = mem[k].rho * mem[k].y.dot(q);
    q += (alpha[k] - b) * mem[k].s;
  }
  return -q;
}

}  // namespace

namespace {

// L-BFGS with Armijo backtracking on obj, from beta. With `smooth` unset the
// stopping rule is the stall test and failed line searches fall back to
// subgradient steps; the best iterate is returned.
// Smooth runs also stop once the best objective improves by less than
// `stall_tol` (relative) over kStallWindow iterations.
SolveResult run_lbfgs(const Objective& obj, Vector beta, const SolveConfig& cfg, bool smooth,
                      double stall_tol) {
  const Index d = obj.dim();
  constexpr int kMaxBacktracks = 60;
  constexpr int kStallWindow = 20;

  Vector g(d);
  double fx = obj.value_and_gradient(beta, g);

  SolveResult best{beta, fx, g.lpNorm<Eigen::Infinity>(), 0, false};
  std::deque<Pair> mem;
  std::vector<double> best_history{fx};
  int subgradient_steps = 0;

  for (int k = 1; k <= cfg.max_iters; ++k) {
    const double gnorm = g.lpNorm<Eigen::Infinity>();
    if (gnorm == 0.0 || (smooth && gnorm <= cfg.grad_tol * (1.0 + std::abs(fx)))) {
      best.converged = true;
      break;
    }

    Vector dir = two_loop(mem, g);
    double slope = g.dot(dir);
    if (!(slope < 0.0)) {
      mem.clear();
      dir = -g;
      slope = -g.squaredNorm();
    }
    // Without curvature information, scale the first step to unit length.
    double t = mem.empty() ? std::min(cfg.initial_step, 1.0 / dir.norm()) : cfg.initial_step;

    Vector next(d), gnext(d);
    double fnext = fx;
    bool accepted = false;
    for (int b = 0; b < kMaxBacktracks; ++b) {
      next = beta + t * dir;
      fnext = obj.value_and_gradient(next, gnext);
      if (fnext <= fx + cfg.sufficient_decrease * t * slope) {
        accepted = true;
        break;
      }
      t *= cfg.shrink;
    }

    if (!accepted) {
      best.iterations = k;
      if (!mem.empty()) {
        mem.clear();
        continue;
      }
      if (smooth) {
        // Not even steepest descent decreases f: the gradient is at the
        // rounding floor of the objective.
        best.converged = true;
        break;
      }
      // Nonsmooth fallback: normalized subgradient step with 1/sqrt(j) decay.
      ++subgradient_steps;
      const double len = 0.1 * (1.0 + beta.norm()) / std::sqrt(static_cast<double>(subgradient_steps));
      next = beta - (len / g.norm()) * g;
      fnext = obj.value_and_gradient(next, gnext);
    } else {
      const Vector s = next - beta;
      const Vector y = gnext - g;
      const double sy = s.dot(y);
      if (sy > 1e-10 * s.norm() * y.norm()) {
        mem.push_back({s, y, 1.0 / sy});
        if (static_cast<int>(mem.size()) > cfg.history) mem.pop_front();
      }
    }

    beta = next;
    g = gnext;
    fx = fnext;
    best.iterations = k;
    if (fx < best.objective || smooth) {
      best.beta = beta;
      best.objective = fx;
      best.grad_norm = g.lpNorm<Eigen::Infinity>();
    }
    best_history.push_back(best.objective);

    if (static_cast<int>(best_history.size()) > kStallWindow) {
      const double then = best_history[best_history.size() - 1 - kStallWindow];
      if (then - best.objective < stall_tol * (1.0 + std::abs(best.objective))) {
        best.converged = true;
        break;
      }
    }
  }
  return best;
}

}  // namespace

SolveResult minimize(const LabeledMatrix& data, const NiceHinge& f, const Regularizer& reg,
                     const Coreset* coreset, const SolveConfig& cfg, std::optional<Vector> beta0) {
  cfg.validate();
  Objective obj(data, f, reg, coreset);
  const Index d = obj.dim();
  Vector beta = beta0 ? *beta0 : Vector::Zero(d);
  if (beta.size() != d) throw Error(ErrorCode::DimMismatch, "beta0 dimension mismatch");
  linalg::require_finite(beta, "beta0");

  const bool smooth_reg = reg.kind == RegKind::None || reg.kind == RegKind::L2Squared;
  // For smooth objectives the stall test only fires at the rounding floor.
  if (f.smooth()) return run_lbfgs(obj, beta, cfg, smooth_reg, smooth_reg ? 1e-15 : kNonsmoothStall);

  // Kinked loss: warm start through a continuation on smoothed surrogates,
  // then finish on the exact objective.
  int iterations = 0;
  for (double delta : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
    obj.set_smoothing(delta);
    const SolveResult stage = run_lbfgs(obj, beta, cfg, smooth_reg, std::max(1e-7 * delta, 1e-15));
    beta = stage.beta;
    iterations += stage.iterations;
  }
  obj.set_smoothing(0.0);
  SolveResult result = run_lbfgs(obj, beta, cfg, false, kNonsmoothStall);
  result.iterations += iterations;
  return result;
}

double relative_loss(double beta_star_objective, const Vector& beta_tilde, const LabeledMatrix& data,
                     const NiceHinge& f, const Regularizer& reg) {
  if (beta_star_objective == 0.0)
    throw Error(ErrorCode::DivisionByZero, "L(beta*) = 0: degenerate (separable) instance");
  const double l_tilde = total_loss(data, beta_tilde, f, reg);
  return std::abs(l_tilde - beta_star_objective) / beta_star_objective;
}

}  // namespace l1coreset
