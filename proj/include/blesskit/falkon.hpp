#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "blesskit/leverage.hpp"

namespace blesskit {

/// Eigenvalues at or below this fraction of the largest one are treated as
/// zero when building the rank-deficient preconditioner.
inline constexpr double kRankTolerance = 1e-10;
/// Relative cutoff of the pseudoinverse in nystrom_krr_direct.
inline constexpr double kPinvTolerance = 1e-12;

/// Factors of the generalized preconditioner
///   B = n^{-1/2} A^{-1/2} Q T^{-1} R^{-1},
/// with A^{-1/2} K_MM A^{-1/2} = Q T^T T Q^T and R^T R = T T^T / M + lambda I.
/// Then n B B^T = ((1/M) K_MM A^{-1} K_MM + lambda K_MM)^{-1} on range(K_MM).
///
/// `weights` (the diagonal of A) are in the preconditioner's own
/// parameterization; see preconditioner_weights() for the conversion from a
/// Dictionary.
struct PreconditionerFactors {
  Eigen::MatrixXd Q;  // M x q, orthonormal columns
  Eigen::MatrixXd T;  // q x q, upper triangular
  Eigen::MatrixXd R;  // q x q, upper triangular
  Eigen::VectorXd weights;
  double lambda = 0.0;
  Index n = 0;
  bool cholesky_path = true;  // false: eigendecomposition fallback

  Index centers() const { return Q.rows(); }
  Index rank() const { return T.rows(); }

  Eigen::VectorXd apply(const Eigen::VectorXd& v) const;            // B v
  Eigen::VectorXd apply_transpose(const Eigen::VectorXd& w) const;  // B^T w
  Eigen::MatrixXd dense() const;                                    // explicit B
  /// lambda R^{-T} R^{-1} v, which equals lambda n B^T K_MM B v without
  /// forming the ill-conditioned product.
  Eigen::VectorXd regularizer(const Eigen::VectorXd& v) const;
};

/// Full-rank path: Q = I, T = chol(A^{-1/2} K A^{-1/2}), R = chol(T T^T / M
/// + lambda I). When that factorization fails or is numerically singular
/// (squared pivot ratio below kRankTolerance), falls back to the top
/// eigenpairs of A^{-1/2} K A^{-1/2}: T = diag(sqrt(e)), R = diag(sqrt(e / M
/// + lambda)).
/// Throws InvalidArgument for non-symmetric K_MM or bad weights, and
/// NumericError when both paths fail.
PreconditionerFactors build_preconditioner(const Eigen::MatrixXd& kmm,
                                           const Eigen::VectorXd& weights, double lambda, Index n);

/// Dictionary weights A (out-of-sample score parameterization) expressed
/// in the preconditioner's parameterization: (n / M) A. Uniform weights
/// M/n map to 1, the classic FALKON preconditioner.
Eigen::VectorXd preconditioner_weights(const Dictionary& dict, Index n);

/// Conjugate gradient iterate, for a symmetric positive semidefinite operator.
struct CgState {
  Eigen::VectorXd iterate;    // beta_t
  Eigen::VectorXd residual;   // b - W beta_t
  Eigen::VectorXd direction;
  int iteration = 0;
  std::vector<double> residual_norms;  // |r_0|, |r_1|, ...
  bool converged = false;              // residual reached exactly 0 or tolerance
};

using LinearOperator = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Runs up to `iterations` CG steps from beta_0 = 0. With relative_tolerance
/// > 0 stops once |r_t| <= tol |b|. `on_iteration` (if set) sees the state
/// after every step, including steps after exact convergence so that
/// per-iteration curves always have `iterations` entries.
CgState conjugate_gradient(const LinearOperator& apply, const Eigen::VectorXd& rhs,
                           int iterations, double relative_tolerance = 0.0,
                           const std::function<void(const CgState&)>& on_iteration = {});

/// Applies H v = K_nM^T K_nM v + lambda n K_MM v without forming K_nM^T K_nM.
///
/// K_nM is produced in row blocks in a fixed order; blocks are cached when
/// n * M fits in `cache_entries`.
class NystromSystem {
 public:
  NystromSystem(const Dataset& data, const KernelSpec& spec, IndexList centers, double lambda,
                Index cache_entries = Index{1} << 24);

  Index n() const { return data_->size(); }
  Index m() const { return static_cast<Index>(centers_.size()); }
  const Eigen::MatrixXd& kmm() const { return kmm_; }

  /// (K_nM^T K_nM + lambda n K_MM) v
  Eigen::VectorXd apply(const Eigen::VectorXd& v) const;
  /// K_nM^T K_nM v
  Eigen::VectorXd data_term(const Eigen::VectorXd& v) const;
  /// K_nM^T y
  Eigen::VectorXd cross_transpose(const Eigen::VectorXd& y) const;
  /// K_nM v
  Eigen::VectorXd cross(const Eigen::VectorXd& v) const;

 private:
  // Cached block, or the freshly computed one stored in `scratch`.
  const Eigen::MatrixXd& block(Index b, Eigen::MatrixXd& scratch) const;
  Eigen::MatrixXd compute_block(Index b) const;

  const Dataset* data_;
  KernelSpec spec_;
  IndexList centers_;
  double lambda_;
  Eigen::MatrixXd kmm_;
  Index block_rows_;
  Index blocks_;
  std::vector<Eigen::MatrixXd> cache_;
};

/// W v = B^T K_nM^T K_nM B v + lambda R^{-T} R^{-1} v, the operator CG
/// iterates on.
Eigen::VectorXd preconditioned_apply(const NystromSystem& system,
                                     const PreconditionerFactors& precond, const Eigen::VectorXd& v);

struct FalkonOptions {
  int iterations = 20;
  double relative_tolerance = 0.0;  // 0: run exactly `iterations` steps
  bool keep_snapshots = false;      // store alpha after every iteration
  Index cache_entries = Index{1} << 24;
};

/// f(x) = sum_j alpha_j K(x, center_j)
struct FalkonModel {
  IndexList centers;
  RowMatrix center_points;
  Eigen::VectorXd alpha;
  KernelSpec kernel = KernelSpec::gaussian(1.0);
  double lambda = 0.0;
  int iterations = 0;
  Index rank = 0;
  std::vector<Eigen::VectorXd> snapshots;  // alpha_1 ... alpha_t
  std::vector<double> residual_norms;
};

/// Nystrom KRR with the generalized preconditioner solved by CG.
FalkonModel falkon_train(const Dataset& data, const KernelSpec& spec, const Eigen::VectorXd& labels,
                         const Dictionary& dict, double lambda, const FalkonOptions& options);

/// Same, with labels taken from the dataset (InvalidArgument when absent).
FalkonModel falkon_train(const Dataset& data, const KernelSpec& spec, const Dictionary& dict,
                         double lambda, const FalkonOptions& options);

/// alpha = (K_nM^T K_nM + lambda n K_MM)^+ K_nM^T y via an eigendecomposition
/// pseudoinverse. Throws ResourceLimit when M > oracle_cap.
Eigen::VectorXd nystrom_krr_direct(const Dataset& data, const KernelSpec& spec,
                                   const Eigen::VectorXd& labels, const Dictionary& dict,
                                   double lambda, Index oracle_cap = kDefaultOracleCap);

/// c = (K + lambda n I)^{-1} y. Throws ResourceLimit when n > oracle_cap.
Eigen::VectorXd krr_direct(const Dataset& data, const KernelSpec& spec,
                           const Eigen::VectorXd& labels, double lambda,
                           Index oracle_cap = kDefaultOracleCap);

/// sum_j alpha_j K(x, center_j) for every row x of `points`.
Eigen::VectorXd predict(const KernelSpec& spec, const RowMatrix& centers,
                        const Eigen::VectorXd& alpha, const RowMatrix& points);
Eigen::VectorXd predict(const FalkonModel& model, const RowMatrix& points);

/// Explicit W = B^T (K_nM^T K_nM + lambda n K_MM) B for small instances.
/// Throws ResourceLimit when n or M exceeds oracle_cap.
Eigen::MatrixXd materialize_W(const Dataset& data, const KernelSpec& spec, const Dictionary& dict,
                              double lambda, Index oracle_cap = kDefaultOracleCap);

/// lambda_max / lambda_min of a symmetric matrix (infinity if lambda_min <= 0).
double condition_number(const Eigen::MatrixXd& symmetric);

}  // namespace blesskit
