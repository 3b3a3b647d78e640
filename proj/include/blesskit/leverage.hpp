#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>

#include "blesskit/kernel.hpp"

namespace blesskit {

/// Largest n for which the dense oracles (exact scores, exact KRR,
/// explicit W) may materialize an n x n matrix.
inline constexpr Index kDefaultOracleCap = 8192;

/// Per-index ridge leverage scores at regularization `lambda`.
struct ScoreVector {
  double lambda = 0.0;
  Eigen::VectorXd values;
  /// Number of values that rounded below zero and were clamped to 0.
  std::size_t clamped = 0;
};

struct ScoreSummary {
  double d_eff = 0.0;  // sum of scores
  double d_inf = 0.0;  // n * max score
};

ScoreSummary score_summaries(const ScoreVector& scores, Index n);

/// Eigendecomposition of the full Gram matrix, reusable across lambdas.
struct GramSpectrum {
  Index n = 0;
  Eigen::VectorXd eigenvalues;   // ascending, negatives clipped to 0
  Eigen::MatrixXd eigenvectors;  // columns
};

/// Throws ResourceLimit when data.size() > oracle_cap and NumericError on
/// non-finite kernel entries.
GramSpectrum gram_spectrum(const Dataset& data, const KernelSpec& spec,
                           Index oracle_cap = kDefaultOracleCap);

/// l(i, lambda) = sum_j s_j / (s_j + lambda n) V_ij^2.
ScoreVector scores_from_spectrum(const GramSpectrum& spectrum, double lambda);

/// d_eff(lambda) = sum_j s_j / (s_j + lambda n).
double effective_dimension(const GramSpectrum& spectrum, double lambda);

/// Exact ridge leverage scores diag(K (K + lambda n I)^{-1}) via the
/// symmetric eigendecomposition of K.
ScoreVector exact_scores(const Dataset& data, const KernelSpec& spec, double lambda,
                         Index oracle_cap = kDefaultOracleCap);

/// One level of a leverage score generator: a multiset of indices J with
/// positive weights (the diagonal of A) and regularization lambda.
///
/// Weights use the parameterization of the out-of-sample formula
///   l_J(i, lambda) = (K_ii - K_Ji^T (K_JJ + lambda n A)^{-1} K_Ji) / (lambda n),
/// where J = [n] with A = I reproduces the exact scores.
struct Dictionary {
  double lambda = 0.0;
  IndexList indices;
  Eigen::VectorXd weights;
  std::optional<Eigen::VectorXd> probs;  // selection probability of each entry
  int level = 0;

  Index size() const { return static_cast<Index>(indices.size()); }
  bool empty() const { return indices.empty(); }

  /// Throws InvalidArgument on out-of-range indices, size mismatches,
  /// non-positive weights or probabilities outside (0, 1].
  void validate(Index n) const;

  /// J = [n], A = I.
  static Dictionary full(Index n, double lambda);
};

/// Out-of-sample score generator for one dictionary at one lambda.
///
/// Holds the Cholesky factor of K_JJ + lambda n A so that scores for any
/// number of targets cost one triangular solve each. Keeps a pointer to the
/// dataset, which must outlive the handle. Immutable after construction and
/// safe to query concurrently.
class GeneratorHandle {
 public:
  double lambda() const { return lambda_; }
  const Dictionary& dictionary() const { return dict_; }
  const KernelSpec& kernel() const { return spec_; }
  const Dataset& data() const { return *data_; }
  bool empty() const { return dict_.empty(); }
  /// Diagonal shift that the factorization needed (0 when none).
  double jitter() const { return jitter_; }
  const Eigen::MatrixXd& lower_factor() const { return lower_; }

  /// |(L L^T) v - (K_JJ + lambda n A) v| / |(K_JJ + lambda n A) v| for a
  /// seeded random probe v. 0 for an empty dictionary.
  double probe_residual(std::uint64_t seed = 0) const;

 private:
  friend GeneratorHandle prepare_generator(const Dataset&, const KernelSpec&, const Dictionary&,
                                           std::optional<double>);
  friend ScoreVector oos_scores(const GeneratorHandle&, const IndexList&, double);

  GeneratorHandle(const Dataset& data, const KernelSpec& spec, Dictionary dict, double lambda)
      : data_(&data), spec_(spec), dict_(std::move(dict)), lambda_(lambda) {}

  const Dataset* data_;
  KernelSpec spec_;
  Dictionary dict_;
  double lambda_;
  double jitter_ = 0.0;
  Eigen::MatrixXd lower_;
};

/// Factorizes K_JJ + lambda n A once. `lambda` defaults to dict.lambda; the
/// samplers pass the next level's lambda to score a previous dictionary at
/// a finer scale.
GeneratorHandle prepare_generator(const Dataset& data, const KernelSpec& spec,
                                  const Dictionary& dict,
                                  std::optional<double> lambda = std::nullopt);

/// Out-of-sample scores for `targets`, clamped at 0. For an empty dictionary
/// every score is K_ii / (lambda_eval n). For a non-empty dictionary the
/// factorization fixes lambda, so lambda_eval must equal handle.lambda().
ScoreVector oos_scores(const GeneratorHandle& handle, const IndexList& targets, double lambda_eval);

}  // namespace blesskit
