#include "l1coreset/losses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "l1coreset/error.hpp"
#include "l1coreset/linalg.hpp"
#include "l1coreset/rng.hpp"

namespace l1coreset {

NiceHinge NiceHinge::relu() { return {LossKind::ReLU, 1.0, 0.0, 0.0}; }
NiceHinge NiceHinge::hinge() { return {LossKind::Hinge, 1.0, 1.0, 1.0}; }
NiceHinge NiceHinge::logistic() { return {LossKind::Logistic, 1.0, std::numbers::ln2, std::numbers::ln2}; }

NiceHinge NiceHinge::from_name(std::string_view name) {
  if (name == "logistic") return logistic();
  if (name == "hinge") return hinge();
  if (name == "relu") return relu();
  throw Error(ErrorCode::InvalidConfig, "unknown loss '" + std::string(name) + "'");
}

std::string_view NiceHinge::name() const {
  switch (kind_) {
    case LossKind::ReLU: return "relu";
    case LossKind::Hinge: return "hinge";
    case LossKind::Logistic: return "logistic";
  }
  return "unknown";
}

double NiceHinge::operator()(double z) const {
  switch (kind_) {
    case LossKind::ReLU: return z > 0.0 ? z : 0.0;
    case LossKind::Hinge: return z > -1.0 ? 1.0 + z : 0.0;
    case LossKind::Logistic: return z > 30.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
  }
  return 0.0;
}

double NiceHinge::derivative(double z) const {
  switch (kind_) {
    case LossKind::ReLU: return z > 0.0 ? 1.0 : 0.0;
    case LossKind::Hinge: return z > -1.0 ? 1.0 : 0.0;
    case LossKind::Logistic: {
      if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
      const double e = std::exp(z);
      return e / (1.0 + e);
    }
  }
  return 0.0;
}

Regularizer Regularizer::parse(std::string_view spec) {
  if (spec.empty() || spec == "none") return none();
  const auto colon = spec.find(':');
  const std::string_view name = spec.substr(0, colon);
  double scale = 1.0;
  if (colon != std::string_view::npos) {
    const std::string num(spec.substr(colon + 1));
    std::size_t used = 0;
    try {
      scale = std::stod(num, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != num.size() || num.empty() || !(scale >= 0.0) || !std::isfinite(scale))
      throw Error(ErrorCode::InvalidConfig, "bad regularizer scale in '" + std::string(spec) + "'");
  }
  if (name == "l2sq") return l2_squared(scale);
  if (name == "l2") return l2(scale);
  if (name == "l1") return l1(scale);
  throw Error(ErrorCode::InvalidConfig, "unknown regularizer '" + std::string(spec) + "'");
}

std::string Regularizer::to_string() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind) {
    case RegKind::None: return "none";
    case RegKind::L2Squared: os << "l2sq:" << scale; break;
    case RegKind::L2: os << "l2:" << scale; break;
    case RegKind::L1: os << "l1:" << scale; break;
  }
  return os.str();
}

double Regularizer::value(const Vector& beta) const {
  switch (kind) {
    case RegKind::None: return 0.0;
    case RegKind::L2Squared: return scale * beta.squaredNorm();
    case RegKind::L2: return scale * beta.norm();
    case RegKind::L1: return scale * beta.lpNorm<1>();
  }
  return 0.0;
}

Vector Regularizer::gradient(const Vector& beta) const {
  switch (kind) {
    case RegKind::None: return Vector::Zero(beta.size());
    case RegKind::L2Squared: return 2.0 * scale * beta;
    case RegKind::L2: {
      const double nrm = beta.norm();
      return nrm > 0.0 ? Vector(scale * beta / nrm) : Vector::Zero(beta.size());
    }
    case RegKind::L1:
      return beta.unaryExpr([s = scale](double b) { return b > 0.0 ? s : (b < 0.0 ? -s : 0.0); });
  }
  return Vector::Zero(beta.size());
}

namespace {

void check_beta(const LabeledMatrix& data, const Vector& beta) {
  if (beta.size() != data.cols())
    throw Error(ErrorCode::DimMismatch, "beta has dimension " + std::to_string(beta.size()) +
                                            ", data has " + std::to_string(data.cols()) + " columns");
  linalg::require_finite(beta, "beta");
}

void check_coreset(const Coreset& coreset, const LabeledMatrix& data) {
  if (coreset.indices.size() != coreset.weights.size())
    throw Error(ErrorCode::LengthMismatch, "coreset indices and weights differ in length");
  for (Index i : coreset.indices)
    if (i < 0 || i >= data.rows())
      throw Error(ErrorCode::IndexOutOfRange, "coreset index " + std::to_string(i) + " out of range");
}

}  // namespace

double total_loss(const LabeledMatrix& data, const Vector& beta, const NiceHinge& f,
                  const Regularizer& reg) {
  check_beta(data, beta);
  const Vector z = data.Z * beta;
  double sum = 0.0;
  for (Index i = 0; i < z.size(); ++i) sum += f(z(i));
  sum += reg.value(beta);
  if (!std::isfinite(sum)) throw Error(ErrorCode::NonFinite, "loss is not finite");
  return sum;
}

double weighted_loss(const Coreset& coreset, const LabeledMatrix& data, const Vector& beta,
                     const NiceHinge& f, const Regularizer& reg) {
  check_beta(data, beta);
  check_coreset(coreset, data);
  double sum = 0.0;
  for (std::size_t j = 0; j < coreset.size(); ++j)
    sum += coreset.weights[j] * f(data.Z.row(coreset.indices[j]).dot(beta));
  sum += reg.value(beta);
  if (!std::isfinite(sum)) throw Error(ErrorCode::NonFinite, "loss is not finite");
  return sum;
}

Vector loss_gradient(const LabeledMatrix& data, const Vector& beta, const NiceHinge& f,
                     const Regularizer& reg) {
  check_beta(data, beta);
  const Vector z = data.Z * beta;
  const Vector fp = z.unaryExpr([&f](double v) { return f.derivative(v); });
  return data.Z.transpose() * fp + reg.gradient(beta);
}

Vector weighted_loss_gradient(const Coreset& coreset, const LabeledMatrix& data,
                              const Vector& beta, const NiceHinge& f, const Regularizer& reg) {
  check_beta(data, beta);
  check_coreset(coreset, data);
  Vector g = reg.gradient(beta);
  for (std::size_t j = 0; j < coreset.size(); ++j) {
    const auto row = data.Z.row(coreset.indices[j]);
    g.noalias() += coreset.weights[j] * f.derivative(row.dot(beta)) * row.transpose();
  }
  return g;
}

namespace {

struct SignedMass {
  double pos = 0.0;
  double neg = 0.0;
};

SignedMass signed_mass(const Vector& z) {
  SignedMass m;
  for (Index i = 0; i < z.size(); ++i) {
    if (z(i) > 0.0) m.pos += z(i);
    else m.neg -= z(i);
  }
  return m;
}

double ratio_of(const SignedMass& m) {
  if (m.pos == 0.0 && m.neg == 0.0) return std::numeric_limits<double>::quiet_NaN();
  if (m.neg < 1e-12 * m.pos) return std::numeric_limits<double>::infinity();
  return m.pos / m.neg;
}

// Gradient of pos/neg with respect to beta, projected onto the tangent space
// of the unit sphere at beta.
Vector ratio_ascent_direction(const DenseMatrix& Z, const Vector& beta, const Vector& z,
                              const SignedMass& m) {
  Vector pos_mask(z.size()), neg_mask(z.size());
  for (Index i = 0; i < z.size(); ++i) {
    pos_mask(i) = z(i) > 0.0 ? 1.0 : 0.0;
    neg_mask(i) = z(i) < 0.0 ? 1.0 : 0.0;
  }
  const Vector grad_pos = Z.transpose() * pos_mask;
  const Vector grad_neg = -(Z.transpose() * neg_mask);
  Vector g = (grad_pos * m.neg - m.pos * grad_neg) / (m.neg * m.neg);
  g -= g.dot(beta) * beta;
  return g;
}

}  // namespace

double mu_ratio(const DenseMatrix& Z, const Vector& beta) {
  return ratio_of(signed_mass(Z * beta));
}

MuEstimate estimate_mu(const LabeledMatrix& data, std::size_t budget, std::uint64_t seed) {
  if (budget < 1) throw Error(ErrorCode::InvalidConfig, "mu budget must be >= 1");
  const DenseMatrix& Z = data.Z;
  const Index d = Z.cols();
  CounterRng rng(seed);

  MuEstimate best;
  best.value = -std::numeric_limits<double>::infinity();
  best.witness = Vector::Zero(d);

  auto consider = [&best](double r, const Vector& beta) {
    if (std::isnan(r)) return false;
    if (r > best.value) {
      best.value = r;
      best.witness = beta;
    }
    return std::isinf(r);
  };

  constexpr std::size_t kStarts = 10;
  std::vector<std::pair<double, Vector>> starts;  // best random directions, descending

  for (std::size_t t = 0; t < budget; ++t) {
    Vector beta(d);
    for (Index k = 0; k < d; ++k) beta(k) = rng.normal();
    const double nrm = beta.norm();
    if (nrm == 0.0) continue;
    beta /= nrm;
    const double r = mu_ratio(Z, beta);
    if (consider(r, beta)) return best;
    if (std::isnan(r)) continue;
    if (starts.size() < kStarts || r > starts.back().first) {
      auto pos = std::upper_bound(starts.begin(), starts.end(), r,
                                  [](double v, const auto& e) { return v > e.first; });
      starts.insert(pos, {r, beta});
      if (starts.size() > kStarts) starts.pop_back();
    }
  }

  for (Index k = 0; k < d; ++k) {
    for (double s : {1.0, -1.0}) {
      Vector e = Vector::Zero(d);
      e(k) = s;
      if (consider(mu_ratio(Z, e), e)) return best;
    }
  }

  constexpr int kAscentSteps = 200;
  for (auto& [r0, beta0] : starts) {
    Vector beta = beta0;
    Vector z = Z * beta;
    SignedMass m = signed_mass(z);
    double r = r0;
    double step = 0.5;
    for (int it = 0; it < kAscentSteps && step > 1e-14; ++it) {
      Vector g = ratio_ascent_direction(Z, beta, z, m);
      const double gn = g.norm();
      if (!(gn > 0.0) || !std::isfinite(gn)) break;
      Vector trial = beta + (step / gn) * g;
      trial.normalize();
      const Vector zt = Z * trial;
      const SignedMass mt = signed_mass(zt);
      const double rt = ratio_of(mt);
      if (!std::isnan(rt) && rt > r) {
        beta = trial;
        z = zt;
        m = mt;
        r = rt;
        if (std::isinf(r)) break;
      } else {
        step *= 0.5;
      }
    }
    if (consider(r, beta)) return best;
  }

  if (best.value == -std::numeric_limits<double>::infinity()) {
    // Z beta vanished for every probe (Z == 0): no sign information at all.
    best.value = std::numeric_limits<double>::quiet_NaN();
  }
  return best;
}

}  // namespace l1coreset
