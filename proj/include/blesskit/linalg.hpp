#pragma once

#include <Eigen/Dense>
#include <vector>

namespace blesskit {

/// Eigenpairs of a symmetric matrix, eigenvalues ascending.
struct SymmetricEigen {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;  // empty when only values were requested
};

/// Divide-and-conquer symmetric eigensolver (LAPACK dsyevd). Only the
/// lower triangle of `a` is read. Throws NumericError on non-finite input
/// or solver failure.
SymmetricEigen symmetric_eigen(Eigen::MatrixXd a, bool with_vectors = true);

/// Lower Cholesky factor of an SPD matrix, possibly of a jittered copy.
struct JitteredCholesky {
  Eigen::MatrixXd lower;
  double jitter = 0.0;              // diagonal shift that was finally used
  std::vector<double> attempted;    // every shift tried, in order (0 first)
};

/// Factorizes `a` (symmetric positive definite). On failure retries with
/// a + jitter * I for jitter = 1e-12 tr(a), 1e-11 tr(a), ..., 1e-6 tr(a).
/// Throws NumericError listing the attempted shifts when all fail.
JitteredCholesky cholesky_with_jitter(const Eigen::MatrixXd& a);

/// Largest |a - a^T| entry relative to the largest |a| entry (0 for a zero
/// matrix).
double asymmetry(const Eigen::MatrixXd& a);

}  // namespace blesskit
