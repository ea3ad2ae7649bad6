#pragma once

#include "l1coreset/types.hpp"

namespace l1coreset::linalg {

struct QR {
  DenseMatrix Q;  // n x k, orthonormal columns, k = min(n, d)
  DenseMatrix R;  // k x d, upper trapezoidal
};

/// Thin Householder QR. Throws NonFinite on NaN/Inf input.
QR qr_factor(const DenseMatrix& X);

/// Numerical-rank cutoff max(rows, cols) * sigma_max * 1e-12.
double rank_cutoff(Index rows, Index cols, double sigma_max);

/// M^+ v for a symmetric positive semidefinite M. Eigen-directions with
/// |lambda| below rank_cutoff are dropped.
Vector pseudo_solve(const DenseMatrix& M, const Vector& v);

/// M^+ for a symmetric positive semidefinite M, same cutoff as pseudo_solve.
DenseMatrix pseudo_inverse_psd(const DenseMatrix& M);

/// x_i^T (X^T X)^+ x_i for every row. Uses the row norms of Q from a thin QR;
/// when R is numerically rank deficient, the rows of Q are first rotated onto
/// the left singular vectors of R that survive the cutoff.
Vector leverage_scores(const DenseMatrix& X);

/// Numerical rank, via singular values of X with rank_cutoff.
Index numerical_rank(const DenseMatrix& X);

void require_finite(const DenseMatrix& X, const char* what);
void require_finite(const Vector& v, const char* what);

}  // namespace l1coreset::linalg
