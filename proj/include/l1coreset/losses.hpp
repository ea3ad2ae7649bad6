#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "l1coreset/types.hpp"

namespace l1coreset {

enum class LossKind { ReLU, Hinge, Logistic };

/// A loss f that is L-Lipschitz, within a1 of relu in sup-norm, and at least
/// a2 on [0, inf). Relative-error guarantees need a2 > 0, which ReLU lacks.
class NiceHinge {
 public:
  static NiceHinge relu();
  static NiceHinge hinge();
  static NiceHinge logistic();
  static NiceHinge from_name(std::string_view name);

  LossKind kind() const { return kind_; }
  std::string_view name() const;
  double lipschitz() const { return lipschitz_; }
  double a1() const { return a1_; }
  double a2() const { return a2_; }
  bool supports_relative_error() const { return a2_ > 0.0; }
  bool smooth() const { return kind_ == LossKind::Logistic; }

  double operator()(double z) const;
  /// Derivative, with the one-sided value 0 at the hinge/relu kinks.
  double derivative(double z) const;

 private:
  NiceHinge(LossKind kind, double L, double a1, double a2)
      : kind_(kind), lipschitz_(L), a1_(a1), a2_(a2) {}

  LossKind kind_;
  double lipschitz_;
  double a1_;
  double a2_;
};

enum class RegKind { None, L2Squared, L2, L1 };

struct Regularizer {
  RegKind kind = RegKind::None;
  double scale = 0.0;

  static Regularizer none() { return {}; }
  static Regularizer l2_squared(double s) { return {RegKind::L2Squared, s}; }
  static Regularizer l2(double s) { return {RegKind::L2, s}; }
  static Regularizer l1(double s) { return {RegKind::L1, s}; }
  /// "none", "l2sq:0.5", "l2:1", "l1:2".
  static Regularizer parse(std::string_view spec);
  std::string to_string() const;

  bool active() const { return kind != RegKind::None && scale > 0.0; }
  double value(const Vector& beta) const;
  /// Gradient; subgradient 0 at the nondifferentiable points of L2 and L1.
  Vector gradient(const Vector& beta) const;
};

double total_loss(const LabeledMatrix& data, const Vector& beta, const NiceHinge& f,
                  const Regularizer& reg = {});

/// sum_j w_j f((Z beta)_{i_j}) + reg; the regularizer is not reweighted.
double weighted_loss(const Coreset& coreset, const LabeledMatrix& data, const Vector& beta,
                     const NiceHinge& f, const Regularizer& reg = {});

Vector loss_gradient(const LabeledMatrix& data, const Vector& beta, const NiceHinge& f,
                     const Regularizer& reg = {});

Vector weighted_loss_gradient(const Coreset& coreset, const LabeledMatrix& data,
                              const Vector& beta, const NiceHinge& f,
                              const Regularizer& reg = {});

/// ||(Z beta)^+||_1 / ||(Z beta)^-||_1. Infinity when the negative mass is
/// below 1e-12 of the positive mass, NaN when Z beta == 0.
double mu_ratio(const DenseMatrix& Z, const Vector& beta);

struct MuEstimate {
  double value = 0.0;  // a lower bound on mu; may be +infinity
  Vector witness;      // unit-norm direction attaining `value`
};

/// Best-effort lower bound on sup_beta ||(Z beta)^+||_1 / ||(Z beta)^-||_1
/// from random directions, +/- basis vectors, and ratio ascent from the ten
/// best random starts.
MuEstimate estimate_mu(const LabeledMatrix& data, std::size_t budget, std::uint64_t seed);

}  // namespace l1coreset
