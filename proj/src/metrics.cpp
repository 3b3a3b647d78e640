#include "blesskit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "blesskit/error.hpp"

namespace blesskit {

Eigen::VectorXd binary_labels(const Eigen::VectorXd& labels) {
  if (labels.size() == 0) throw InvalidArgument("no labels");
  const double lo = labels.minCoeff();
  const double hi = labels.maxCoeff();
  if (lo == hi) throw InvalidArgument("labels are constant; need two classes");
  Eigen::VectorXd out(labels.size());
  for (Eigen::Index i = 0; i < labels.size(); ++i) {
    if (labels(i) != lo && labels(i) != hi) {
      throw InvalidArgument("labels take more than two distinct values");
    }
    out(i) = labels(i) == hi ? 1.0 : -1.0;
  }
  return out;
}

double auc(const Eigen::VectorXd& scores, const Eigen::VectorXd& labels) {
  if (scores.size() != labels.size()) throw InvalidArgument("auc: size mismatch");
  if (!scores.allFinite()) throw InvalidArgument("auc: non-finite scores");
  const Eigen::VectorXd y = binary_labels(labels);
  const Eigen::Index n = scores.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index a, Eigen::Index b) { return scores(a) < scores(b); });

  // Sum of the (tie-averaged, 1-based) ranks of the positives.
  double rank_sum = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && scores(order[j + 1]) == scores(order[i])) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) {
      if (y(order[k]) > 0) rank_sum += avg_rank;
    }
    i = j + 1;
  }
  const double pos = static_cast<double>((y.array() > 0).count());
  const double neg = static_cast<double>(n) - pos;
  return (rank_sum - pos * (pos + 1.0) / 2.0) / (pos * neg);
}

double classification_error(const Eigen::VectorXd& scores, const Eigen::VectorXd& labels) {
  if (scores.size() != labels.size()) throw InvalidArgument("classification_error: size mismatch");
  const Eigen::VectorXd y = binary_labels(labels);
  Eigen::Index wrong = 0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double predicted = scores(i) > 0.0 ? 1.0 : -1.0;
    if (predicted != y(i)) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(y.size());
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw InvalidArgument("quantile of an empty set");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("quantile level must lie in [0, 1]");
  std::sort(values.begin(), values.end());
  const double pos = p * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

}  // namespace blesskit
