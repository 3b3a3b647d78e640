#include "blesskit/leverage.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "blesskit/error.hpp"
#include "blesskit/linalg.hpp"
#include "blesskit/parallel.hpp"
#include "blesskit/rng.hpp"

namespace blesskit {
namespace {

// Targets are scored in chunks so the kernel block stays O(M * chunk).
constexpr Index kTargetChunk = 2048;

void require_positive_lambda(double lambda, const char* what) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw InvalidArgument(std::string(what) + ": lambda must be finite and > 0");
  }
}

}  // namespace

ScoreSummary score_summaries(const ScoreVector& scores, Index n) {
  ScoreSummary s;
  if (scores.values.size() == 0) return s;
  s.d_eff = scores.values.sum();
  s.d_inf = static_cast<double>(n) * scores.values.maxCoeff();
  return s;
}

GramSpectrum gram_spectrum(const Dataset& data, const KernelSpec& spec, Index oracle_cap) {
  const Index n = data.size();
  if (n > oracle_cap) {
    throw ResourceLimit("exact oracle needs the full " + std::to_string(n) + " x " +
                        std::to_string(n) + " kernel matrix; oracle cap is " +
                        std::to_string(oracle_cap));
  }
  const IndexList all = iota_indices(n);
  Eigen::MatrixXd gram = kernel_block(spec, data, all, all);
  if (!gram.allFinite()) throw NumericError("kernel matrix has non-finite entries");
  SymmetricEigen eig = symmetric_eigen(std::move(gram));
  GramSpectrum out;
  out.n = n;
  out.eigenvalues = eig.values.cwiseMax(0.0);
  out.eigenvectors = std::move(eig.vectors);
  return out;
}

ScoreVector scores_from_spectrum(const GramSpectrum& spectrum, double lambda) {
  require_positive_lambda(lambda, "exact_scores");
  const double ln = lambda * static_cast<double>(spectrum.n);
  const Eigen::VectorXd filter =
      spectrum.eigenvalues.array() / (spectrum.eigenvalues.array() + ln);
  ScoreVector out;
  out.lambda = lambda;
  out.values = spectrum.eigenvectors.array().square().matrix() * filter;
  out.values = out.values.cwiseMax(0.0).cwiseMin(1.0);
  return out;
}

double effective_dimension(const GramSpectrum& spectrum, double lambda) {
  require_positive_lambda(lambda, "effective_dimension");
  const double ln = lambda * static_cast<double>(spectrum.n);
  return (spectrum.eigenvalues.array() / (spectrum.eigenvalues.array() + ln)).sum();
}

ScoreVector exact_scores(const Dataset& data, const KernelSpec& spec, double lambda,
                         Index oracle_cap) {
  require_positive_lambda(lambda, "exact_scores");
  return scores_from_spectrum(gram_spectrum(data, spec, oracle_cap), lambda);
}

void Dictionary::validate(Index n) const {
  check_indices(indices, n, "dictionary");
  if (weights.size() != size()) {
    throw InvalidArgument("dictionary has " + std::to_string(indices.size()) + " indices but " +
                          std::to_string(weights.size()) + " weights");
  }
  if ((weights.array() <= 0.0).any() || !weights.allFinite()) {
    throw InvalidArgument("dictionary weights must be finite and > 0");
  }
  if (probs) {
    if (probs->size() != size()) throw InvalidArgument("dictionary probs length mismatch");
    if ((probs->array() <= 0.0).any() || (probs->array() > 1.0).any()) {
      throw InvalidArgument("dictionary probs must lie in (0, 1]");
    }
  }
  require_positive_lambda(lambda, "dictionary");
}

Dictionary Dictionary::full(Index n, double lambda) {
  Dictionary d;
  d.lambda = lambda;
  d.indices = iota_indices(n);
  d.weights = Eigen::VectorXd::Ones(n);
  return d;
}

GeneratorHandle prepare_generator(const Dataset& data, const KernelSpec& spec,
                                  const Dictionary& dict, std::optional<double> lambda) {
  const double lam = lambda.value_or(dict.lambda);
  require_positive_lambda(lam, "prepare_generator");
  dict.validate(data.size());
  GeneratorHandle handle(data, spec, dict, lam);
  if (dict.empty()) return handle;
  Eigen::MatrixXd system = kernel_block(spec, data, dict.indices, dict.indices);
  system.diagonal() += (lam * static_cast<double>(data.size())) * dict.weights;
  JitteredCholesky chol = cholesky_with_jitter(system);
  handle.lower_ = std::move(chol.lower);
  handle.jitter_ = chol.jitter;
  return handle;
}

double GeneratorHandle::probe_residual(std::uint64_t seed) const {
  if (empty()) return 0.0;
  CounterRng rng(seed, 0x70726f6265ULL);
  Eigen::VectorXd v(dict_.size());
  for (Index i = 0; i < v.size(); ++i) v(i) = rng.normal();
  Eigen::MatrixXd system = kernel_block(spec_, *data_, dict_.indices, dict_.indices);
  system.diagonal() += (lambda_ * static_cast<double>(data_->size())) * dict_.weights;
  const Eigen::VectorXd exact = system * v;
  const Eigen::VectorXd factored = lower_ * (lower_.transpose() * v);
  return (factored - exact).norm() / exact.norm();
}

ScoreVector oos_scores(const GeneratorHandle& handle, const IndexList& targets, double lambda_eval) {
  require_positive_lambda(lambda_eval, "oos_scores");
  const Dataset& data = handle.data();
  check_indices(targets, data.size(), "oos_scores targets");
  const double ln = lambda_eval * static_cast<double>(data.size());
  ScoreVector out;
  out.lambda = lambda_eval;
  out.values = kernel_diag(handle.kernel(), data, targets) / ln;
  if (handle.empty()) return out;
  if (lambda_eval != handle.lambda()) {
    throw InvalidArgument("oos_scores: lambda " + std::to_string(lambda_eval) +
                          " differs from the handle's factorization lambda " +
                          std::to_string(handle.lambda()) + "; prepare a new handle");
  }
  const auto total = static_cast<Index>(targets.size());
  const Eigen::MatrixXd& lower = handle.lower_factor();
  for (Index start = 0; start < total; start += kTargetChunk) {
    const Index len = std::min(kTargetChunk, total - start);
    const IndexList chunk(targets.begin() + start, targets.begin() + start + len);
    Eigen::MatrixXd cross = kernel_block(handle.kernel(), data, handle.dictionary().indices, chunk);
    lower.triangularView<Eigen::Lower>().solveInPlace(cross);
    out.values.segment(start, len) -= cross.colwise().squaredNorm().transpose() / ln;
  }
  for (Index i = 0; i < total; ++i) {
    if (!std::isfinite(out.values(i))) throw NumericError("oos_scores: non-finite score");
    if (out.values(i) < 0.0) {
      out.values(i) = 0.0;
      ++out.clamped;
    }
  }
  return out;
}

}  // namespace blesskit
