#include "l1coreset/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "l1coreset/error.hpp"

namespace l1coreset::linalg {

void require_finite(const DenseMatrix& X, const char* what) {
  if (!X.allFinite()) throw Error(ErrorCode::NonFinite, std::string(what) + " has NaN/Inf entries");
}

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) throw Error(ErrorCode::NonFinite, std::string(what) + " has NaN/Inf entries");
}

QR qr_factor(const DenseMatrix& X) {
  require_finite(X, "qr_factor input");
  const Index n = X.rows();
  const Index d = X.cols();
  const Index k = std::min(n, d);

  Eigen::MatrixXd A = X;  // column-major working copy
  std::vector<Eigen::VectorXd> reflectors(static_cast<std::size_t>(k));

  for (Index j = 0; j < k; ++j) {
    auto x = A.col(j).tail(n - j);
    const double norm = x.norm();
    Eigen::VectorXd v = x;
    if (norm == 0.0) {
      reflectors[j] = Eigen::VectorXd::Zero(n - j);
      continue;
    }
    const double alpha = x(0) >= 0.0 ? -norm : norm;
    v(0) -= alpha;
    const double vnorm = v.norm();
    if (vnorm == 0.0) {
      reflectors[j] = Eigen::VectorXd::Zero(n - j);
      continue;
    }
    v /= vnorm;
    auto block = A.bottomRightCorner(n - j, d - j);
    block.noalias() -= 2.0 * v * (v.transpose() * block);
    A.col(j).tail(n - j - 1).setZero();
    reflectors[j] = std::move(v);
  }

  Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(n, k);
  for (Index j = k - 1; j >= 0; --j) {
    const auto& v = reflectors[j];
    if (v.size() == 0 || v.isZero(0.0)) continue;
    auto block = Q.bottomRows(n - j);
    block.noalias() -= 2.0 * v * (v.transpose() * block);
  }

  QR out{Q, A.topRows(k).triangularView<Eigen::Upper>()};
  // Nonnegative diagonal of R.
  for (Index j = 0; j < k; ++j) {
    if (out.R(j, j) < 0.0) {
      out.R.row(j) *= -1.0;
      out.Q.col(j) *= -1.0;
    }
  }
  return out;
}

double rank_cutoff(Index rows, Index cols, double sigma_max) {
  return static_cast<double>(std::max(rows, cols)) * sigma_max * 1e-12;
}

Vector pseudo_solve(const DenseMatrix& M, const Vector& v) {
  require_finite(M, "pseudo_solve matrix");
  require_finite(v, "pseudo_solve vector");
  if (M.rows() != M.cols() || M.rows() != v.size())
    throw Error(ErrorCode::DimMismatch, "pseudo_solve needs square M matching v");
  const Index dim = M.rows();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Eigen::MatrixXd(M), Eigen::ComputeEigenvectors);
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  const Eigen::MatrixXd& U = eig.eigenvectors();
  const double sigma_max = lambda.cwiseAbs().maxCoeff();
  const double cut = rank_cutoff(dim, dim, sigma_max);

  Eigen::VectorXd coeffs = U.transpose() * v;
  for (Index i = 0; i < dim; ++i) {
    coeffs(i) = std::abs(lambda(i)) > cut ? coeffs(i) / lambda(i) : 0.0;
  }
  return U * coeffs;
}

DenseMatrix pseudo_inverse_psd(const DenseMatrix& M) {
  require_finite(M, "pseudo_inverse_psd matrix");
  if (M.rows() != M.cols()) throw Error(ErrorCode::DimMismatch, "pseudo_inverse_psd needs square M");
  const Index dim = M.rows();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Eigen::MatrixXd(M), Eigen::ComputeEigenvectors);
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  const double cut = rank_cutoff(dim, dim, lambda.cwiseAbs().maxCoeff());
  Eigen::VectorXd inv = lambda.unaryExpr([cut](double l) { return std::abs(l) > cut ? 1.0 / l : 0.0; });
  return eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();
}

namespace {

struct RankInfo {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd;
  Index rank = 0;
};

RankInfo rank_of_r(const DenseMatrix& R, Index n, Index d) {
  RankInfo info{Eigen::JacobiSVD<Eigen::MatrixXd>(Eigen::MatrixXd(R), Eigen::ComputeThinU), 0};
  const auto& sigma = info.svd.singularValues();
  if (sigma.size() == 0 || sigma(0) == 0.0) return info;
  const double cut = rank_cutoff(n, d, sigma(0));
  info.rank = (sigma.array() > cut).count();
  return info;
}

}  // namespace

Vector leverage_scores(const DenseMatrix& X) {
  const QR qr = qr_factor(X);
  const Index k = qr.R.rows();
  const RankInfo info = rank_of_r(qr.R, X.rows(), X.cols());
  if (info.rank == k) return qr.Q.rowwise().squaredNorm();
  if (info.rank == 0) return Vector::Zero(X.rows());
  const Eigen::MatrixXd U = info.svd.matrixU().leftCols(info.rank);
  return (qr.Q * U).rowwise().squaredNorm();
}

Index numerical_rank(const DenseMatrix& X) {
  const QR qr = qr_factor(X);
  return rank_of_r(qr.R, X.rows(), X.cols()).rank;
}

}  // namespace l1coreset::linalg
