#include "blesskit/falkon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "blesskit/error.hpp"
#include "blesskit/linalg.hpp"

namespace blesskit {
namespace {

constexpr Index kBlockRows = 2048;

void require_positive_lambda(double lambda, const char* what) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw InvalidArgument(std::string(what) + ": lambda must be finite and > 0");
  }
}

bool cholesky_factors(const Eigen::MatrixXd& scaled, double lambda, PreconditionerFactors& out) {
  const Index m = scaled.rows();
  Eigen::LLT<Eigen::MatrixXd> llt(scaled);
  if (llt.info() != Eigen::Success) return false;
  Eigen::MatrixXd upper = llt.matrixU();
  const Eigen::ArrayXd pivots = upper.diagonal().array().square();
  if (!upper.allFinite() || !(pivots.minCoeff() > kRankTolerance * pivots.maxCoeff())) return false;

  Eigen::MatrixXd inner = upper * upper.transpose() / static_cast<double>(m);
  inner.diagonal().array() += lambda;
  Eigen::LLT<Eigen::MatrixXd> llt_r(inner);
  if (llt_r.info() != Eigen::Success) return false;

  out.Q = Eigen::MatrixXd::Identity(m, m);
  out.T = std::move(upper);
  out.R = llt_r.matrixU();
  out.cholesky_path = true;
  return true;
}

void eigen_factors(const Eigen::MatrixXd& scaled, double lambda, PreconditionerFactors& out) {
  const Index m = scaled.rows();
  const SymmetricEigen eig = symmetric_eigen(scaled);
  const double top = eig.values(m - 1);
  if (!(top > 0.0)) throw NumericError("preconditioner: K_MM has no positive eigenvalue");
  Index rank = 0;
  while (rank < m && eig.values(m - 1 - rank) > kRankTolerance * top) ++rank;
  out.Q.resize(m, rank);
  Eigen::VectorXd e(rank);
  for (Index j = 0; j < rank; ++j) {
    out.Q.col(j) = eig.vectors.col(m - 1 - j);
    e(j) = eig.values(m - 1 - j);
  }
  out.T = e.cwiseSqrt().asDiagonal();
  out.R = (e.array() / static_cast<double>(m) + lambda).sqrt().matrix().asDiagonal();
  out.cholesky_path = false;
}

}  // namespace

PreconditionerFactors build_preconditioner(const Eigen::MatrixXd& kmm,
                                           const Eigen::VectorXd& weights, double lambda, Index n) {
  require_positive_lambda(lambda, "build_preconditioner");
  const Index m = kmm.rows();
  if (m < 1 || kmm.cols() != m) throw InvalidArgument("build_preconditioner: K_MM must be square");
  if (weights.size() != m) throw InvalidArgument("build_preconditioner: weight count mismatch");
  if ((weights.array() <= 0.0).any() || !weights.allFinite()) {
    throw InvalidArgument("build_preconditioner: weights must be finite and > 0");
  }
  if (n < 1) throw InvalidArgument("build_preconditioner: n must be >= 1");
  if (!kmm.allFinite() || asymmetry(kmm) > 1e-12) {
    throw InvalidArgument("build_preconditioner: K_MM is not symmetric");
  }

  const Eigen::VectorXd inv_sqrt_w = weights.cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd scaled = inv_sqrt_w.asDiagonal() * kmm * inv_sqrt_w.asDiagonal();

  PreconditionerFactors out;
  out.weights = weights;
  out.lambda = lambda;
  out.n = n;
  if (!cholesky_factors(scaled, lambda, out)) eigen_factors(scaled, lambda, out);
  if (!out.T.allFinite() || !out.R.allFinite()) {
    throw NumericError("build_preconditioner: factors are not finite");
  }
  return out;
}

Eigen::VectorXd PreconditionerFactors::apply(const Eigen::VectorXd& v) const {
  Eigen::VectorXd x = R.triangularView<Eigen::Upper>().solve(v);
  T.triangularView<Eigen::Upper>().solveInPlace(x);
  Eigen::VectorXd z = cholesky_path ? x : Eigen::VectorXd(Q * x);
  return z.cwiseQuotient(weights.cwiseSqrt()) / std::sqrt(static_cast<double>(n));
}

Eigen::VectorXd PreconditionerFactors::apply_transpose(const Eigen::VectorXd& w) const {
  const Eigen::VectorXd z = w.cwiseQuotient(weights.cwiseSqrt()) / std::sqrt(static_cast<double>(n));
  Eigen::VectorXd x = cholesky_path ? z : Eigen::VectorXd(Q.transpose() * z);
  T.transpose().triangularView<Eigen::Lower>().solveInPlace(x);
  R.transpose().triangularView<Eigen::Lower>().solveInPlace(x);
  return x;
}

Eigen::MatrixXd PreconditionerFactors::dense() const {
  Eigen::MatrixXd b(centers(), rank());
  for (Index j = 0; j < rank(); ++j) b.col(j) = apply(Eigen::VectorXd::Unit(rank(), j));
  return b;
}

Eigen::VectorXd PreconditionerFactors::regularizer(const Eigen::VectorXd& v) const {
  Eigen::VectorXd x = R.triangularView<Eigen::Upper>().solve(v);
  R.transpose().triangularView<Eigen::Lower>().solveInPlace(x);
  return lambda * x;
}

Eigen::VectorXd preconditioner_weights(const Dictionary& dict, Index n) {
  if (dict.empty()) throw InvalidArgument("preconditioner_weights: empty dictionary");
  return dict.weights * (static_cast<double>(n) / static_cast<double>(dict.size()));
}

CgState conjugate_gradient(const LinearOperator& apply, const Eigen::VectorXd& rhs, int iterations,
                           double relative_tolerance,
                           const std::function<void(const CgState&)>& on_iteration) {
  CgState s;
  s.iterate = Eigen::VectorXd::Zero(rhs.size());
  s.residual = rhs;
  s.direction = rhs;
  double rs = rhs.squaredNorm();
  const double rhs_norm = std::sqrt(rs);
  s.residual_norms.push_back(rhs_norm);
  s.converged = rs == 0.0;
  for (int t = 1; t <= iterations; ++t) {
    if (!s.converged) {
      const Eigen::VectorXd wp = apply(s.direction);
      const double curvature = s.direction.dot(wp);
      if (!std::isfinite(curvature)) throw NumericError("conjugate gradient: non-finite curvature");
      if (curvature <= 0.0) {
        // Only reachable on a singular direction: the iterate is already a
        // solution of the consistent system.
        s.converged = true;
      } else {
        const double step = rs / curvature;
        s.iterate += step * s.direction;
        s.residual -= step * wp;
        const double rs_next = s.residual.squaredNorm();
        if (!std::isfinite(rs_next)) throw NumericError("conjugate gradient: non-finite residual");
        s.direction = s.residual + (rs_next / rs) * s.direction;
        rs = rs_next;
        s.converged = rs == 0.0 || (relative_tolerance > 0.0 &&
                                    std::sqrt(rs) <= relative_tolerance * rhs_norm);
      }
    }
    s.iteration = t;
    s.residual_norms.push_back(std::sqrt(rs));
    if (on_iteration) on_iteration(s);
    if (s.converged && relative_tolerance > 0.0) break;
  }
  return s;
}

NystromSystem::NystromSystem(const Dataset& data, const KernelSpec& spec, IndexList centers,
                             double lambda, Index cache_entries)
    : data_(&data), spec_(spec), centers_(std::move(centers)), lambda_(lambda) {
  check_indices(centers_, data.size(), "NystromSystem centers");
  kmm_ = kernel_block(spec_, data, centers_, centers_);
  block_rows_ = kBlockRows;
  blocks_ = (data.size() + block_rows_ - 1) / block_rows_;
  if (data.size() * m() <= cache_entries) {
    cache_.reserve(static_cast<std::size_t>(blocks_));
    for (Index b = 0; b < blocks_; ++b) cache_.push_back(compute_block(b));
  }
}

const Eigen::MatrixXd& NystromSystem::block(Index b, Eigen::MatrixXd& scratch) const {
  if (!cache_.empty()) return cache_[static_cast<std::size_t>(b)];
  scratch = compute_block(b);
  return scratch;
}

Eigen::MatrixXd NystromSystem::compute_block(Index b) const {
  const Index start = b * block_rows_;
  const Index len = std::min(block_rows_, n() - start);
  IndexList rows(static_cast<std::size_t>(len));
  for (Index i = 0; i < len; ++i) rows[static_cast<std::size_t>(i)] = start + i;
  return kernel_block(spec_, *data_, rows, centers_);
}

Eigen::VectorXd NystromSystem::cross(const Eigen::VectorXd& v) const {
  Eigen::VectorXd out(n());
  Eigen::MatrixXd scratch;
  for (Index b = 0; b < blocks_; ++b) {
    const Eigen::MatrixXd& kb = block(b, scratch);
    out.segment(b * block_rows_, kb.rows()).noalias() = kb * v;
  }
  return out;
}

Eigen::VectorXd NystromSystem::cross_transpose(const Eigen::VectorXd& y) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(m());
  Eigen::MatrixXd scratch;
  for (Index b = 0; b < blocks_; ++b) {
    const Eigen::MatrixXd& kb = block(b, scratch);
    out.noalias() += kb.transpose() * y.segment(b * block_rows_, kb.rows());
  }
  return out;
}

Eigen::VectorXd NystromSystem::data_term(const Eigen::VectorXd& v) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(m());
  Eigen::MatrixXd scratch;
  for (Index b = 0; b < blocks_; ++b) {
    const Eigen::MatrixXd& kb = block(b, scratch);
    const Eigen::VectorXd kv = kb * v;
    out.noalias() += kb.transpose() * kv;
  }
  return out;
}

Eigen::VectorXd NystromSystem::apply(const Eigen::VectorXd& v) const {
  Eigen::VectorXd out = data_term(v);
  out.noalias() += (lambda_ * static_cast<double>(n())) * (kmm_ * v);
  return out;
}

Eigen::VectorXd preconditioned_apply(const NystromSystem& system,
                                     const PreconditionerFactors& precond, const Eigen::VectorXd& v) {
  Eigen::VectorXd out = precond.apply_transpose(system.data_term(precond.apply(v)));
  out += precond.regularizer(v);
  return out;
}

FalkonModel falkon_train(const Dataset& data, const KernelSpec& spec, const Eigen::VectorXd& labels,
                         const Dictionary& dict, double lambda, const FalkonOptions& options) {
  require_positive_lambda(lambda, "falkon_train");
  if (options.iterations < 1) throw InvalidArgument("falkon_train: cg iterations must be >= 1");
  if (dict.empty()) throw InvalidArgument("falkon_train: dictionary is empty");
  if (labels.size() != data.size()) throw InvalidArgument("falkon_train: label count mismatch");
  dict.validate(data.size());

  const NystromSystem system(data, spec, dict.indices, lambda, options.cache_entries);
  const PreconditionerFactors precond =
      build_preconditioner(system.kmm(), preconditioner_weights(dict, data.size()), lambda,
                           data.size());
  const Eigen::VectorXd rhs = precond.apply_transpose(system.cross_transpose(labels));

  FalkonModel model;
  model.centers = dict.indices;
  model.center_points = data.subset(dict.indices).points();
  model.kernel = spec;
  model.lambda = lambda;
  model.rank = precond.rank();

  const LinearOperator apply_w = [&](const Eigen::VectorXd& v) {
    return preconditioned_apply(system, precond, v);
  };
  std::function<void(const CgState&)> record;
  if (options.keep_snapshots) {
    record = [&](const CgState& s) { model.snapshots.push_back(precond.apply(s.iterate)); };
  }
  const CgState state =
      conjugate_gradient(apply_w, rhs, options.iterations, options.relative_tolerance, record);
  model.alpha = precond.apply(state.iterate);
  if (!model.alpha.allFinite()) throw NumericError("falkon_train: coefficients are not finite");
  model.iterations = state.iteration;
  model.residual_norms = state.residual_norms;
  return model;
}

FalkonModel falkon_train(const Dataset& data, const KernelSpec& spec, const Dictionary& dict,
                         double lambda, const FalkonOptions& options) {
  return falkon_train(data, spec, data.labels(), dict, lambda, options);
}

Eigen::VectorXd nystrom_krr_direct(const Dataset& data, const KernelSpec& spec,
                                   const Eigen::VectorXd& labels, const Dictionary& dict,
                                   double lambda, Index oracle_cap) {
  require_positive_lambda(lambda, "nystrom_krr_direct");
  if (dict.empty()) throw InvalidArgument("nystrom_krr_direct: dictionary is empty");
  if (labels.size() != data.size()) throw InvalidArgument("nystrom_krr_direct: label count mismatch");
  if (dict.size() > oracle_cap) {
    throw ResourceLimit("nystrom_krr_direct: M = " + std::to_string(dict.size()) +
                        " exceeds the oracle cap");
  }
  const Eigen::MatrixXd knm = kernel_block(spec, data, iota_indices(data.size()), dict.indices);
  const Eigen::MatrixXd kmm = kernel_block(spec, data, dict.indices, dict.indices);
  Eigen::MatrixXd h = knm.transpose() * knm;
  h += (lambda * static_cast<double>(data.size())) * kmm;
  const SymmetricEigen eig = symmetric_eigen(h);
  const double cutoff = kPinvTolerance * eig.values.cwiseAbs().maxCoeff();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(eig.values.size());
  for (Index j = 0; j < inv.size(); ++j) {
    if (eig.values(j) > cutoff) inv(j) = 1.0 / eig.values(j);
  }
  const Eigen::VectorXd rhs = knm.transpose() * labels;
  return eig.vectors * inv.asDiagonal() * (eig.vectors.transpose() * rhs);
}

Eigen::VectorXd krr_direct(const Dataset& data, const KernelSpec& spec,
                           const Eigen::VectorXd& labels, double lambda, Index oracle_cap) {
  require_positive_lambda(lambda, "krr_direct");
  if (labels.size() != data.size()) throw InvalidArgument("krr_direct: label count mismatch");
  if (data.size() > oracle_cap) {
    throw ResourceLimit("krr_direct: n = " + std::to_string(data.size()) + " exceeds the oracle cap");
  }
  const IndexList all = iota_indices(data.size());
  Eigen::MatrixXd system = kernel_block(spec, data, all, all);
  system.diagonal().array() += lambda * static_cast<double>(data.size());
  Eigen::LLT<Eigen::MatrixXd> llt(system);
  if (llt.info() != Eigen::Success) throw NumericError("krr_direct: K + lambda n I is not SPD");
  return llt.solve(labels);
}

Eigen::VectorXd predict(const KernelSpec& spec, const RowMatrix& centers,
                        const Eigen::VectorXd& alpha, const RowMatrix& points) {
  if (centers.rows() != alpha.size()) {
    throw InvalidArgument("predict: coefficient count does not match center count");
  }
  if (points.rows() > 0 && centers.cols() != points.cols()) {
    throw InvalidArgument("predict: points have dimension " + std::to_string(points.cols()) +
                          ", model expects " + std::to_string(centers.cols()));
  }
  Eigen::VectorXd out(points.rows());
  for (Index start = 0; start < points.rows(); start += kBlockRows) {
    const Index len = std::min(kBlockRows, points.rows() - start);
    const RowMatrix chunk = points.middleRows(start, len);
    out.segment(start, len).noalias() = kernel_cross(spec, chunk, centers) * alpha;
  }
  return out;
}

Eigen::VectorXd predict(const FalkonModel& model, const RowMatrix& points) {
  return predict(model.kernel, model.center_points, model.alpha, points);
}

Eigen::MatrixXd materialize_W(const Dataset& data, const KernelSpec& spec, const Dictionary& dict,
                              double lambda, Index oracle_cap) {
  require_positive_lambda(lambda, "materialize_W");
  if (dict.empty()) throw InvalidArgument("materialize_W: dictionary is empty");
  if (data.size() > oracle_cap || dict.size() > oracle_cap) {
    throw ResourceLimit("materialize_W: n or M exceeds the oracle cap");
  }
  const Eigen::MatrixXd knm = kernel_block(spec, data, iota_indices(data.size()), dict.indices);
  const Eigen::MatrixXd kmm = kernel_block(spec, data, dict.indices, dict.indices);
  const PreconditionerFactors precond =
      build_preconditioner(kmm, preconditioner_weights(dict, data.size()), lambda, data.size());
  const Eigen::MatrixXd kb = knm * precond.dense();
  Eigen::MatrixXd w = kb.transpose() * kb;
  // lambda R^{-T} R^{-1}
  Eigen::MatrixXd rinv = precond.R.triangularView<Eigen::Upper>().solve(
      Eigen::MatrixXd::Identity(precond.rank(), precond.rank()));
  w.noalias() += lambda * rinv.transpose() * rinv;
  return w;
}

double condition_number(const Eigen::MatrixXd& symmetric) {
  const SymmetricEigen eig = symmetric_eigen(symmetric, false);
  const double lo = eig.values(0);
  const double hi = eig.values(eig.values.size() - 1);
  if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

}  // namespace blesskit
