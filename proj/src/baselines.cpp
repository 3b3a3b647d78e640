#include "blesskit/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "blesskit/error.hpp"
#include "blesskit/rng.hpp"

namespace blesskit {
namespace {

// Stream ids keep the baselines' draws independent of each other and of
// the per-level BLESS streams (which use 1..H).
constexpr std::uint64_t kUniformStream = 0x756e69666f726dULL;
constexpr std::uint64_t kTwoPassFirstStream = 0x7032666972737431ULL;
constexpr std::uint64_t kTwoPassSecondStream = 0x7032736563326e64ULL;
constexpr std::uint64_t kExactStream = 0x6578616374726c73ULL;

}  // namespace

Dictionary uniform_dict(const Dataset& data, Index m, double lambda, std::uint64_t seed) {
  const Index n = data.size();
  if (m < 1 || m > n) {
    throw InvalidArgument("uniform_dict: M = " + std::to_string(m) + " outside [1, " +
                          std::to_string(n) + "]");
  }
  CounterRng rng(seed, kUniformStream);
  Dictionary d;
  d.lambda = lambda;
  d.indices.resize(static_cast<std::size_t>(m));
  for (auto& i : d.indices) i = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
  d.weights = Eigen::VectorXd::Constant(m, static_cast<double>(m) / static_cast<double>(n));
  d.probs = Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(n));
  return d;
}

Index default_two_pass_first_size(double lambda, Index n) {
  if (!(lambda > 0.0)) throw InvalidArgument("two_pass: lambda must be > 0");
  const double m1 = std::ceil(4.0 / lambda);
  return m1 >= static_cast<double>(n) ? n : std::max<Index>(1, static_cast<Index>(m1));
}

Dictionary two_pass_first(const Dataset& data, double lambda, Index m1, std::uint64_t seed) {
  const Index n = data.size();
  if (m1 < 1) throw InvalidArgument("two_pass: M1 must be >= 1");
  if (m1 >= n) return Dictionary::full(n, lambda);
  // Partial Fisher-Yates: the first m1 slots form a uniform subset.
  CounterRng rng(seed, kTwoPassFirstStream);
  IndexList perm = iota_indices(n);
  for (Index k = 0; k < m1; ++k) {
    const auto j = k + static_cast<Index>(rng.below(static_cast<std::uint64_t>(n - k)));
    std::swap(perm[static_cast<std::size_t>(k)], perm[static_cast<std::size_t>(j)]);
  }
  Dictionary d;
  d.lambda = lambda;
  d.indices.assign(perm.begin(), perm.begin() + m1);
  d.weights = Eigen::VectorXd::Constant(m1, static_cast<double>(m1) / static_cast<double>(n));
  return d;
}

namespace {

Eigen::VectorXd first_pass_scores(const Dataset& data, const KernelSpec& spec, double lambda,
                                  const Dictionary& first) {
  const GeneratorHandle handle = prepare_generator(data, spec, first, lambda);
  Eigen::VectorXd values = oos_scores(handle, iota_indices(data.size()), lambda).values;
  if (!(values.sum() > 0.0)) throw NumericError("two_pass: every first-pass score is zero");
  return values;
}

Eigen::VectorXd checked_exact_scores(const Dataset& data, const KernelSpec& spec, double lambda,
                                     Index oracle_cap) {
  Eigen::VectorXd values = exact_scores(data, spec, lambda, oracle_cap).values;
  if (!(values.sum() > 0.0)) throw NumericError("exact_rls: every exact score is zero");
  return values;
}

Index oversampled_size(double q2, double total) {
  if (!(q2 > 0.0)) throw InvalidArgument("q2 must be > 0");
  return std::max<Index>(1, static_cast<Index>(std::ceil(q2 * total)));
}

}  // namespace

Eigen::VectorXd two_pass_probabilities(const Dataset& data, const KernelSpec& spec, double lambda,
                                       const Dictionary& first) {
  const Eigen::VectorXd values = first_pass_scores(data, spec, lambda, first);
  return values / values.sum();
}

Dictionary draw_weighted(const Eigen::VectorXd& probs, Index m, double lambda, std::uint64_t seed,
                         std::uint64_t stream) {
  if (m < 1) throw InvalidArgument("dictionary size must be >= 1");
  std::vector<double> cumulative(static_cast<std::size_t>(probs.size()));
  double acc = 0.0;
  for (Index i = 0; i < probs.size(); ++i) cumulative[static_cast<std::size_t>(i)] = (acc += probs(i));
  CounterRng rng(seed, stream);
  Dictionary d;
  d.lambda = lambda;
  d.indices.resize(static_cast<std::size_t>(m));
  d.weights.resize(m);
  Eigen::VectorXd drawn(m);
  for (Index j = 0; j < m; ++j) {
    const auto i = static_cast<Index>(draw_from_cumulative(rng, cumulative));
    d.indices[static_cast<std::size_t>(j)] = i;
    drawn(j) = probs(i);
    d.weights(j) = static_cast<double>(m) * probs(i);
  }
  d.probs = std::move(drawn);
  return d;
}

Dictionary two_pass(const Dataset& data, const KernelSpec& spec, double lambda, Index m1, Index m2,
                    std::uint64_t seed) {
  if (m1 < 1 || m2 < 1) throw InvalidArgument("two_pass: M1 and M2 must be >= 1");
  const Dictionary first = two_pass_first(data, lambda, m1, seed);
  const Eigen::VectorXd probs = two_pass_probabilities(data, spec, lambda, first);
  return draw_weighted(probs, m2, lambda, seed, kTwoPassSecondStream);
}

Dictionary two_pass_auto(const Dataset& data, const KernelSpec& spec, double lambda, Index m1,
                         double q2, std::uint64_t seed) {
  if (m1 < 1) throw InvalidArgument("two_pass: M1 must be >= 1");
  const Dictionary first = two_pass_first(data, lambda, m1, seed);
  const Eigen::VectorXd values = first_pass_scores(data, spec, lambda, first);
  const double total = values.sum();
  return draw_weighted(values / total, oversampled_size(q2, total), lambda, seed,
                       kTwoPassSecondStream);
}

Eigen::VectorXd exact_rls_probabilities(const Dataset& data, const KernelSpec& spec, double lambda,
                                        Index oracle_cap) {
  const Eigen::VectorXd values = checked_exact_scores(data, spec, lambda, oracle_cap);
  return values / values.sum();
}

Dictionary exact_rls_dict_auto(const Dataset& data, const KernelSpec& spec, double lambda,
                               double q2, std::uint64_t seed, Index oracle_cap) {
  const Eigen::VectorXd values = checked_exact_scores(data, spec, lambda, oracle_cap);
  const double d_eff = values.sum();
  return draw_weighted(values / d_eff, oversampled_size(q2, d_eff), lambda, seed, kExactStream);
}

Dictionary exact_rls_dict(const Dataset& data, const KernelSpec& spec, double lambda, Index m,
                          std::uint64_t seed, Index oracle_cap) {
  return draw_weighted(exact_rls_probabilities(data, spec, lambda, oracle_cap), m, lambda, seed,
                       kExactStream);
}

}  // namespace blesskit
