#pragma once

#include <cstdint>

#include "blesskit/leverage.hpp"

namespace blesskit {

/// M i.i.d. uniform draws from [n].
///
/// Weights are M/n for every entry, which is what the BLESS weight rule
/// gives for uniform probabilities and equals A = I when M = n.
Dictionary uniform_dict(const Dataset& data, Index m, double lambda, std::uint64_t seed);

/// ceil(4 / lambda), capped at n: the first-pass size used when none is given.
Index default_two_pass_first_size(double lambda, Index n);

/// Two-Pass sampling.
///
/// The first pass is a uniform subset J1 of M1 distinct points (J1 = [n]
/// with A = I when M1 >= n). Scores of all n points under J1 then drive
/// M2 multinomial draws from [n]; weights are M2 p_j as in the BLESS rule
/// with R = n.
Dictionary two_pass(const Dataset& data, const KernelSpec& spec, double lambda, Index m1, Index m2,
                    std::uint64_t seed);

/// two_pass with M2 = ceil(q2 * sum_i l_J1(i, lambda)), the first-pass
/// estimate of d_eff oversampled by q2.
Dictionary two_pass_auto(const Dataset& data, const KernelSpec& spec, double lambda, Index m1,
                         double q2, std::uint64_t seed);
/// First-pass dictionary used by two_pass (exposed for inspection).
Dictionary two_pass_first(const Dataset& data, double lambda, Index m1, std::uint64_t seed);

/// Normalized second-pass probabilities over [n] given a first-pass
/// dictionary. Throws NumericError when every score is 0.
Eigen::VectorXd two_pass_probabilities(const Dataset& data, const KernelSpec& spec, double lambda,
                                       const Dictionary& first);

/// M multinomial draws proportional to the exact scores, weights M p_j.
Dictionary exact_rls_dict(const Dataset& data, const KernelSpec& spec, double lambda, Index m,
                          std::uint64_t seed, Index oracle_cap = kDefaultOracleCap);

/// exact_rls_dict with M = ceil(q2 d_eff(lambda)).
Dictionary exact_rls_dict_auto(const Dataset& data, const KernelSpec& spec, double lambda,
                               double q2, std::uint64_t seed, Index oracle_cap = kDefaultOracleCap);
/// Normalized exact scores, the exact_rls_dict draw distribution.
Eigen::VectorXd exact_rls_probabilities(const Dataset& data, const KernelSpec& spec, double lambda,
                                        Index oracle_cap = kDefaultOracleCap);

/// M draws from `probs` over [n] with the BLESS weight rule for R = n.
/// `probs` must be normalized. Shared by two_pass and exact_rls_dict.
Dictionary draw_weighted(const Eigen::VectorXd& probs, Index m, double lambda, std::uint64_t seed,
                         std::uint64_t stream);

}  // namespace blesskit
