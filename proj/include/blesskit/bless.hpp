#pragma once

#include <cstdint>
#include <vector>

#include "blesskit/leverage.hpp"

namespace blesskit {

/// Geometric regularization path lambda_1 > ... > lambda_H = lambda_final
/// with lambda_h = lambda_{h-1} / q.
struct Schedule {
  double lambda0 = 1.0;
  double lambda_final = 1.0;
  double q = 2.0;
  int levels = 1;               // H
  std::vector<double> lambdas;  // lambda_1 ... lambda_H
};

/// H = ceil(log(lambda0 / lambda_final) / log q), at least 1. The last level
/// is clamped to lambda_final when the ratio is not a power of q.
Schedule make_schedule(double lambda0, double lambda_final, double q);

struct BlessParams {
  double q = 2.0;           // path step
  double q1 = 4.0;          // uniform-set oversampling (BLESS only)
  double q2 = 20.0;         // dictionary oversampling
  double accuracy_t = 1.0;  // target multiplicative accuracy t
  std::uint64_t seed = 0;
  /// Largest dictionary or candidate set any level may allocate.
  Index max_level_size = 1 << 15;

  void validate() const;
  /// kappa^2 / min(t, 1)
  double lambda0(double kappa2) const;
};

struct LevelDiagnostics {
  int level = 0;
  double lambda = 0.0;
  /// Candidate set size: R_h for BLESS, |U_h| for BLESS-R.
  Index candidates = 0;
  /// BLESS: d_h = (n / R_h) sum_U l. BLESS-R: sum_U l / beta_h, the same
  /// estimate of the sum over [n].
  double d_estimate = 0.0;
  /// BLESS: M_h. BLESS-R: accepted count |J_h|.
  Index selected = 0;
  double beta = 1.0;                 // BLESS-R inclusion probability
  Index rejection_violations = 0;    // BLESS-R entries with p > beta
  std::size_t clamped_scores = 0;    // negative scores clamped to 0
  bool degenerate = false;           // all candidate scores were 0
  double jitter = 0.0;               // shift used to factor the previous level
  double seconds = 0.0;
};

struct DictionaryPath {
  Schedule schedule;
  std::vector<Dictionary> levels;  // levels[h - 1] holds J_h, A_h
  std::vector<LevelDiagnostics> diagnostics;

  const Dictionary& final_level() const { return levels.back(); }
};

/// Bottom-up leverage score sampling with replacement.
///
/// Level h draws R_h = ceil(q1 min(kappa^2 / lambda_h, n)) uniform
/// candidates, scores them with the level h-1 dictionary at lambda_h,
/// and draws M_h = ceil(q2 d_h) entries from the candidates with
/// probabilities proportional to those scores. Weights are
/// A_h = (R_h M_h / n) diag(p).
DictionaryPath bless(const Dataset& data, const KernelSpec& spec, double lambda,
                     const BlessParams& params);

/// Bottom-up leverage score sampling without replacement.
///
/// Level h keeps each point with probability beta_h = min(q2 kappa^2 /
/// (lambda_h n), 1), then accepts a kept point j with probability
/// p_j / beta_h where p_j = min(q2 l_{J_{h-1}}(j, lambda_{h-1}), 1).
/// Weights are A_h = diag(p).
DictionaryPath bless_r(const Dataset& data, const KernelSpec& spec, double lambda,
                       const BlessParams& params);

}  // namespace blesskit
