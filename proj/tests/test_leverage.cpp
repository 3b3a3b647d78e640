#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "blesskit/bless.hpp"
#include "blesskit/error.hpp"
#include "blesskit/leverage.hpp"
#include "oracles.hpp"

using namespace blesskit;

namespace {

// Rows of the identity: the linear kernel Gram matrix is I_n.
Dataset orthonormal(Index n) { return Dataset(RowMatrix::Identity(n, n)); }

Dataset identical(Index n) { return Dataset(RowMatrix::Constant(n, 2, 0.25)); }

double max_rel(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return ((a - b).array().abs() / b.array().abs()).maxCoeff();
}

}  // namespace

TEST(ExactScores, IdentityGram) {
  const Dataset d = orthonormal(4);
  const ScoreVector s = exact_scores(d, KernelSpec::linear(d), 0.25);
  for (Index i = 0; i < 4; ++i) EXPECT_NEAR(s.values(i), 0.5, 1e-12);
  const ScoreSummary sum = score_summaries(s, 4);
  EXPECT_NEAR(sum.d_eff, 2.0, 1e-12);
  EXPECT_NEAR(sum.d_inf, 2.0, 1e-12);
}

TEST(ExactScores, RankOneGram) {
  const Dataset d = identical(5);
  const ScoreVector s = exact_scores(d, KernelSpec::gaussian(1.0), 0.2);
  for (Index i = 0; i < 5; ++i) EXPECT_NEAR(s.values(i), 1.0 / 6.0, 1e-12);
  const ScoreSummary sum = score_summaries(s, 5);
  EXPECT_NEAR(sum.d_eff, 5.0 / 6.0, 1e-12);
  EXPECT_NEAR(sum.d_inf, 5.0 / 6.0, 1e-12);
}

TEST(ExactScores, MatchesDenseInverse) {
  const RowMatrix x = oracle::random_points(6, 2, 11);
  const Dataset d(x);
  const ScoreVector s = exact_scores(d, KernelSpec::gaussian(1.0), 0.1);
  const Eigen::VectorXd ref = oracle::dense_scores(oracle::gaussian_gram(x, 1.0), 0.1);
  EXPECT_LE((s.values - ref).cwiseAbs().maxCoeff(), 1e-10);
  const ScoreSummary sum = score_summaries(s, 6);
  EXPECT_NEAR(sum.d_eff, ref.sum(), 1e-10);
  EXPECT_NEAR(sum.d_inf, 6.0 * ref.maxCoeff(), 1e-10);
}

TEST(ExactScores, EffectiveDimensionAgreesWithSum) {
  const Dataset d(oracle::random_points(50, 3, 12));
  const GramSpectrum g = gram_spectrum(d, KernelSpec::gaussian(1.5));
  for (double lam : {1e-4, 1e-2, 0.5}) {
    EXPECT_NEAR(effective_dimension(g, lam), scores_from_spectrum(g, lam).values.sum(), 1e-10);
  }
}

TEST(ExactScores, Errors) {
  const Dataset d(oracle::random_points(10, 2, 13));
  EXPECT_THROW(exact_scores(d, KernelSpec::gaussian(1.0), 0.1, 9), ResourceLimit);
  EXPECT_THROW(exact_scores(d, KernelSpec::gaussian(1.0), 0.0), InvalidArgument);
  EXPECT_THROW(exact_scores(d, KernelSpec::gaussian(1.0), -1.0), InvalidArgument);
}

TEST(ExactScores, RangeAndSummaryBounds) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Dataset d(oracle::random_points(80, 2, 100 + seed));
    const KernelSpec k = KernelSpec::gaussian(0.8);
    const GramSpectrum g = gram_spectrum(d, k);
    for (double lam : {1e-4, 1e-3, 1e-2, 1e-1, 1.0}) {
      const ScoreVector s = scores_from_spectrum(g, lam);
      const double n = 80.0;
      for (Index i = 0; i < s.values.size(); ++i) {
        EXPECT_GE(s.values(i), 1.0 / ((k.bound() + lam) * n) - 1e-10);
        EXPECT_LE(s.values(i), 1.0 / (lam * n) + 1e-10);
      }
      const ScoreSummary sum = score_summaries(s, 80);
      EXPECT_LE(sum.d_eff, sum.d_inf + 1e-10);
      EXPECT_LE(sum.d_inf, 1.0 / lam + 1e-10);
    }
  }
}

TEST(ExactScores, LambdaMonotonicity) {
  const std::vector<double> grid = {1e-5, 3e-5, 1e-4, 3e-4, 1e-3, 3e-3, 1e-2, 3e-2, 1e-1, 1.0};
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Dataset d(oracle::random_points(60, 2, 200 + seed));
    const GramSpectrum g = gram_spectrum(d, KernelSpec::gaussian(1.0));
    for (std::size_t a = 0; a < grid.size(); ++a) {
      for (std::size_t b = a; b < grid.size(); ++b) {
        const Eigen::VectorXd lo = scores_from_spectrum(g, grid[a]).values;  // l(i, lambda)
        const Eigen::VectorXd hi = scores_from_spectrum(g, grid[b]).values;  // l(i, lambda')
        const double r = grid[b] / grid[a];
        EXPECT_TRUE(((hi - lo).array() <= 1e-10).all());
        EXPECT_TRUE(((lo - r * hi).array() <= 1e-10).all());
      }
    }
  }
}

TEST(OosScores, EmptyDictionaryClosedForm) {
  const Dataset d(oracle::random_points(10, 2, 14));
  Dictionary empty;
  empty.lambda = 0.1;
  const GeneratorHandle h = prepare_generator(d, KernelSpec::gaussian(1.0), empty);
  EXPECT_TRUE(h.empty());
  EXPECT_EQ(h.probe_residual(), 0.0);
  const ScoreVector s = oos_scores(h, iota_indices(10), 0.1);
  for (Index i = 0; i < 10; ++i) EXPECT_DOUBLE_EQ(s.values(i), 1.0);
  // Any lambda works for the empty dictionary.
  EXPECT_DOUBLE_EQ(oos_scores(h, {0}, 0.5).values(0), 0.2);
}

TEST(OosScores, FullSetReproducesExact) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Dataset d(oracle::random_points(120, 3, 300 + seed));
    const KernelSpec k = KernelSpec::gaussian(1.0);
    for (double lam : {1e-3, 1e-2}) {
      const GeneratorHandle h = prepare_generator(d, k, Dictionary::full(120, lam));
      const ScoreVector approx = oos_scores(h, iota_indices(120), lam);
      EXPECT_LE(max_rel(approx.values, exact_scores(d, k, lam).values), 1e-8);
    }
  }
}

TEST(OosScores, MatchesDenseFormula) {
  const RowMatrix x = oracle::random_points(6, 2, 15);
  const Dataset d(x);
  Dictionary dict;
  dict.lambda = 0.05;
  dict.indices = {4, 1, 3};
  dict.weights = Eigen::Vector3d(0.7, 1.3, 2.0);
  const GeneratorHandle h = prepare_generator(d, KernelSpec::gaussian(1.0), dict);
  EXPECT_EQ(h.jitter(), 0.0);
  const ScoreVector s = oos_scores(h, iota_indices(6), 0.05);
  const Eigen::VectorXd ref =
      oracle::dense_oos(oracle::gaussian_gram(x, 1.0), dict.indices, dict.weights, 0.05);
  EXPECT_LE((s.values - ref).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(OosScores, AddingAColumnNeverIncreasesScores) {
  const RowMatrix x = oracle::random_points(30, 2, 16);
  const Eigen::MatrixXd k = oracle::gaussian_gram(x, 1.0);
  const Dataset d(x);
  std::vector<Index> j;
  std::vector<double> w;
  Eigen::VectorXd prev = Eigen::VectorXd::Constant(30, 1.0 / (0.01 * 30));
  for (Index add : {3, 17, 3, 25, 8, 0}) {
    j.push_back(add);
    w.push_back(0.5 + 0.1 * static_cast<double>(j.size()));
    Dictionary dict;
    dict.lambda = 0.01;
    dict.indices = j;
    dict.weights = Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Index>(w.size()));
    const Eigen::VectorXd ref = oracle::dense_oos(k, j, dict.weights, 0.01);
    const Eigen::VectorXd got =
        oos_scores(prepare_generator(d, KernelSpec::gaussian(1.0), dict), iota_indices(30), 0.01)
            .values;
    EXPECT_LE((got - ref).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_TRUE(((ref - prev).array() <= 1e-10).all());
    prev = ref;
  }
}

TEST(OosScores, ChunkingDoesNotChangeResults) {
  const Dataset d(oracle::random_points(3000, 2, 17));
  Dictionary dict;
  dict.lambda = 1e-3;
  dict.indices = {0, 10, 20, 2999, 1500};
  dict.weights = Eigen::VectorXd::Constant(5, 0.1);
  const GeneratorHandle h = prepare_generator(d, KernelSpec::gaussian(1.0), dict);
  const Eigen::VectorXd all = oos_scores(h, iota_indices(3000), 1e-3).values;
  for (Index i : {0, 2047, 2048, 2999}) {
    EXPECT_EQ(oos_scores(h, {i}, 1e-3).values(0), all(i));
  }
}

TEST(OosScores, Errors) {
  const Dataset d(oracle::random_points(6, 2, 18));
  const GeneratorHandle h = prepare_generator(d, KernelSpec::gaussian(1.0), Dictionary::full(6, 0.1));
  EXPECT_THROW(oos_scores(h, {0}, 0.0), InvalidArgument);
  EXPECT_THROW(oos_scores(h, {0}, 0.2), InvalidArgument);
  EXPECT_THROW(oos_scores(h, {6}, 0.1), InvalidArgument);
  Dictionary bad = Dictionary::full(6, 0.1);
  bad.weights(2) = 0.0;
  EXPECT_THROW(prepare_generator(d, KernelSpec::gaussian(1.0), bad), InvalidArgument);
  bad = Dictionary::full(6, 0.1);
  bad.indices[0] = 9;
  EXPECT_THROW(prepare_generator(d, KernelSpec::gaussian(1.0), bad), InvalidArgument);
}

TEST(OosScores, LambdaOverrideAndDuplicates) {
  const RowMatrix x = oracle::random_points(20, 2, 19);
  const Dataset d(x);
  Dictionary dict;
  dict.lambda = 0.1;
  dict.indices = {2, 2, 7, 7, 7};
  dict.weights = Eigen::VectorXd::Constant(5, 1e-3);
  const GeneratorHandle h = prepare_generator(d, KernelSpec::gaussian(1.0), dict, 0.05);
  EXPECT_EQ(h.lambda(), 0.05);
  const Eigen::VectorXd got = oos_scores(h, iota_indices(20), 0.05).values;
  const Eigen::VectorXd ref =
      oracle::dense_oos(oracle::gaussian_gram(x, 1.0), dict.indices, dict.weights, 0.05);
  EXPECT_LE((got - ref).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(OosScores, JitterRescuesTinyWeights) {
  // Duplicated columns with weights far below rounding: K_JJ + lambda n A is
  // numerically singular.
  const Dataset d(RowMatrix::Constant(4, 1, 1.0));
  Dictionary dict;
  dict.lambda = 1e-3;
  dict.indices = {0, 1, 2, 3};
  dict.weights = Eigen::VectorXd::Constant(4, 1e-300);
  const GeneratorHandle h = prepare_generator(d, KernelSpec::gaussian(1.0), dict);
  EXPECT_GT(h.jitter(), 0.0);
  const ScoreVector s = oos_scores(h, {0, 1}, 1e-3);
  EXPECT_TRUE(s.values.allFinite());
  EXPECT_TRUE((s.values.array() >= 0.0).all());
}

TEST(GeneratorHandle, ProbeResidualOnBlessDictionary) {
  const Dataset d(oracle::random_points(500, 2, 20));
  const KernelSpec k = KernelSpec::gaussian(1.0);
  const DictionaryPath path = bless(d, k, 1e-3, BlessParams{});
  const GeneratorHandle h = prepare_generator(d, k, path.final_level());
  EXPECT_LE(h.probe_residual(1), 1e-10);
}

TEST(Dictionary, Validation) {
  Dictionary d = Dictionary::full(3, 0.1);
  EXPECT_NO_THROW(d.validate(3));
  EXPECT_THROW(d.validate(2), InvalidArgument);
  d.probs = Eigen::Vector3d(0.5, 1.0, 1.5);
  EXPECT_THROW(d.validate(3), InvalidArgument);
  d.probs.reset();
  d.lambda = 0.0;
  EXPECT_THROW(d.validate(3), InvalidArgument);
  Dictionary empty;
  empty.lambda = 1.0;
  EXPECT_NO_THROW(empty.validate(3));
}
