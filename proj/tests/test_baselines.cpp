#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "blesskit/baselines.hpp"
#include "blesskit/error.hpp"
#include "blesskit/falkon.hpp"
#include "oracles.hpp"

using namespace blesskit;

TEST(Uniform, SizeWeightsAndDeterminism) {
  const Dataset d(oracle::random_points(20, 2, 40));
  const Dictionary a = uniform_dict(d, 20, 0.1, 3);
  EXPECT_EQ(a.size(), 20);
  EXPECT_NO_THROW(a.validate(20));
  // M = n gives A = I.
  EXPECT_TRUE(a.weights.isApprox(Eigen::VectorXd::Ones(20), 0.0));
  EXPECT_EQ(a.indices, uniform_dict(d, 20, 0.1, 3).indices);
  EXPECT_NE(a.indices, uniform_dict(d, 20, 0.1, 4).indices);
  const Dictionary b = uniform_dict(d, 5, 0.1, 3);
  EXPECT_TRUE(b.weights.isApprox(Eigen::VectorXd::Constant(5, 0.25), 0.0));
  EXPECT_TRUE(b.probs->isApprox(Eigen::VectorXd::Constant(5, 0.05), 0.0));
  EXPECT_THROW(uniform_dict(d, 0, 0.1, 0), InvalidArgument);
  EXPECT_THROW(uniform_dict(d, 21, 0.1, 0), InvalidArgument);
}

TEST(Uniform, InclusionFrequencies) {
  const Index n = 1000;
  const Index m = 100;
  const Dataset d(oracle::random_points(n, 1, 41));
  std::vector<int> counts(n, 0);
  const int seeds = 50;
  for (int s = 0; s < seeds; ++s) {
    for (Index i : uniform_dict(d, m, 0.1, static_cast<std::uint64_t>(s)).indices) ++counts[i];
  }
  // Each index is hit Binomial(seeds * m, 1 / n) times.
  const double trials = seeds * m;
  const double p = 1.0 / n;
  const double sd = std::sqrt(trials * p * (1 - p));
  for (int c : counts) EXPECT_LE(std::abs(c - trials * p), 5.0 * sd + 1.0);
}

TEST(TwoPass, FullFirstPassMatchesExactDistribution) {
  const Dataset d(oracle::random_points(60, 2, 42));
  const KernelSpec k = KernelSpec::gaussian(1.0);
  const Dictionary first = two_pass_first(d, 0.01, 60, 0);
  EXPECT_EQ(first.indices, iota_indices(60));
  EXPECT_TRUE(first.weights.isApprox(Eigen::VectorXd::Ones(60), 0.0));
  const Eigen::VectorXd p = two_pass_probabilities(d, k, 0.01, first);
  const Eigen::VectorXd e = exact_rls_probabilities(d, k, 0.01);
  EXPECT_LE((p - e).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(TwoPass, FirstPassIsDistinct) {
  const Dataset d(oracle::random_points(100, 2, 43));
  const Dictionary first = two_pass_first(d, 0.1, 40, 7);
  EXPECT_EQ(first.size(), 40);
  EXPECT_EQ(std::set<Index>(first.indices.begin(), first.indices.end()).size(), 40u);
  EXPECT_TRUE(first.weights.isApprox(Eigen::VectorXd::Constant(40, 0.4), 0.0));
  EXPECT_EQ(default_two_pass_first_size(0.1, 100), 40);
  EXPECT_EQ(default_two_pass_first_size(0.01, 100), 100);
}

TEST(TwoPass, RankOneIsUniform) {
  const Dataset d(RowMatrix::Constant(5, 2, 1.0));
  const KernelSpec k = KernelSpec::gaussian(1.0);
  const Eigen::VectorXd p = two_pass_probabilities(d, k, 0.1, two_pass_first(d, 0.1, 2, 0));
  EXPECT_LE((p.array() - 0.2).abs().maxCoeff(), 1e-12);
}

TEST(TwoPass, WeightsFollowDrawProbabilities) {
  const Dataset d(oracle::random_points(200, 2, 44));
  const Dictionary dict = two_pass(d, KernelSpec::gaussian(1.0), 1e-2, 50, 80, 1);
  EXPECT_EQ(dict.size(), 80);
  EXPECT_LE((dict.weights - 80.0 * *dict.probs).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_THROW(two_pass(d, KernelSpec::gaussian(1.0), 1e-2, 0, 10, 1), InvalidArgument);
}

TEST(TwoPass, AccuracyOnGaussian) {
  const Index n = 500;
  const double lambda = 1e-2;
  const Dataset d(oracle::random_points(n, 2, 45));
  const KernelSpec k = KernelSpec::gaussian(1.0);
  const Eigen::VectorXd exact = exact_scores(d, k, lambda).values;
  int good = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Dictionary dict =
        two_pass_auto(d, k, lambda, default_two_pass_first_size(lambda, n), 20.0, seed);
    const Eigen::VectorXd r =
        oos_scores(prepare_generator(d, k, dict), iota_indices(n), lambda).values.cwiseQuotient(exact);
    good += r.minCoeff() >= 0.5 && r.maxCoeff() <= 2.0;
  }
  EXPECT_GE(good, 18);
}

TEST(TwoPass, AllZeroScoresThrow) {
  const Dataset d(RowMatrix::Zero(5, 2));
  EXPECT_THROW(two_pass(d, KernelSpec::linear_with_bound(1.0), 0.1, 2, 3, 0), NumericError);
}

TEST(ExactRls, ProbabilitiesAreNormalizedScores) {
  const RowMatrix x = oracle::random_points(6, 2, 46);
  const Dataset d(x);
  const Eigen::VectorXd ref = oracle::dense_scores(oracle::gaussian_gram(x, 1.0), 0.1);
  const Eigen::VectorXd p = exact_rls_probabilities(d, KernelSpec::gaussian(1.0), 0.1);
  EXPECT_LE((p - ref / ref.sum()).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(ExactRls, SymmetricGramsAreUniform) {
  const Dataset id(RowMatrix::Identity(6, 6));
  const Eigen::VectorXd p = exact_rls_probabilities(id, KernelSpec::linear(id), 0.1);
  EXPECT_LE((p.array() - 1.0 / 6).abs().maxCoeff(), 1e-12);
  const Dataset one(RowMatrix::Constant(6, 1, 2.0));
  const Eigen::VectorXd q = exact_rls_probabilities(one, KernelSpec::gaussian(1.0), 0.1);
  EXPECT_LE((q.array() - 1.0 / 6).abs().maxCoeff(), 1e-12);
}

TEST(ExactRls, AutoSizeAndCap) {
  const Dataset d(oracle::random_points(100, 2, 47));
  const KernelSpec k = KernelSpec::gaussian(1.0);
  const double d_eff = exact_scores(d, k, 1e-2).values.sum();
  const Dictionary dict = exact_rls_dict_auto(d, k, 1e-2, 20.0, 0);
  EXPECT_EQ(dict.size(), static_cast<Index>(std::ceil(20.0 * d_eff)));
  EXPECT_THROW(exact_rls_dict(d, k, 1e-2, 10, 0, 50), ResourceLimit);
}

TEST(Baselines, DictionariesFeedGeneratorsAndFalkon) {
  const Dataset d(oracle::random_points(150, 2, 48), Eigen::VectorXd::LinSpaced(150, -1.0, 1.0));
  const KernelSpec k = KernelSpec::gaussian(1.0);
  FalkonOptions opts;
  opts.iterations = 5;
  for (const Dictionary& dict :
       {uniform_dict(d, 30, 1e-2, 0), two_pass(d, k, 1e-2, 40, 30, 0), exact_rls_dict(d, k, 1e-2, 30, 0)}) {
    EXPECT_NO_THROW(dict.validate(150));
    const ScoreVector s = oos_scores(prepare_generator(d, k, dict), iota_indices(150), 1e-2);
    EXPECT_TRUE(s.values.allFinite());
    const FalkonModel m = falkon_train(d, k, dict, 1e-3, opts);
    EXPECT_TRUE(m.alpha.allFinite());
  }
}
