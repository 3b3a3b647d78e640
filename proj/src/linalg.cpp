#include "blesskit/linalg.hpp"

#include <lapacke.h>

#include <cmath>
#include <sstream>
#include <string>

#include "blesskit/error.hpp"

namespace blesskit {

SymmetricEigen symmetric_eigen(Eigen::MatrixXd a, bool with_vectors) {
  if (a.rows() != a.cols()) throw InvalidArgument("symmetric_eigen: matrix is not square");
  if (!a.allFinite()) throw NumericError("symmetric_eigen: matrix has non-finite entries");
  const auto n = static_cast<lapack_int>(a.rows());
  SymmetricEigen out;
  out.values.resize(a.rows());
  if (n == 0) return out;
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, with_vectors ? 'V' : 'N', 'L', n,
                                         a.data(), n, out.values.data());
  if (info != 0) {
    throw NumericError("symmetric_eigen: dsyevd failed with info = " + std::to_string(info));
  }
  if (with_vectors) out.vectors = std::move(a);
  return out;
}

JitteredCholesky cholesky_with_jitter(const Eigen::MatrixXd& a) {
  JitteredCholesky out;
  const double trace = a.trace();
  Eigen::LLT<Eigen::MatrixXd> llt;
  out.attempted.push_back(0.0);
  llt.compute(a);
  if (llt.info() == Eigen::Success && llt.matrixL().toDenseMatrix().allFinite()) {
    out.lower = llt.matrixL();
    return out;
  }
  Eigen::MatrixXd shifted = a;
  double applied = 0.0;
  for (double rel = 1e-12; rel <= 1e-6 * (1.0 + 1e-9); rel *= 10.0) {
    const double jitter = rel * std::abs(trace);
    shifted.diagonal().array() += jitter - applied;
    applied = jitter;
    out.attempted.push_back(jitter);
    llt.compute(shifted);
    if (llt.info() == Eigen::Success) {
      out.lower = llt.matrixL();
      out.jitter = jitter;
      return out;
    }
  }
  std::ostringstream msg;
  msg << "Cholesky factorization failed after jitter escalation; attempted shifts:";
  for (double j : out.attempted) msg << ' ' << j;
  throw NumericError(msg.str());
}

double asymmetry(const Eigen::MatrixXd& a) {
  const double scale = a.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (a - a.transpose()).cwiseAbs().maxCoeff() / scale;
}

}  // namespace blesskit
