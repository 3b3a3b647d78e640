#pragma once

#include <Eigen/Dense>
#include <vector>

namespace blesskit {

/// Maps a two-valued label vector to -1 / +1 (smaller value -> -1).
/// Throws InvalidArgument unless exactly two distinct values occur.
Eigen::VectorXd binary_labels(const Eigen::VectorXd& labels);

/// Area under the ROC curve as the Mann-Whitney statistic: the fraction of
/// (positive, negative) pairs ranked correctly, ties counting 1/2. Labels
/// are mapped with binary_labels(); constant labels leave the AUC
/// undefined and throw InvalidArgument.
double auc(const Eigen::VectorXd& scores, const Eigen::VectorXd& labels);

/// Fraction of points with sign(score) != label, labels mapped with
/// binary_labels() and score 0 counted as -1.
double classification_error(const Eigen::VectorXd& scores, const Eigen::VectorXd& labels);

/// Linearly interpolated quantile (the "type 7" rule) of unsorted values,
/// p in [0, 1]. Throws InvalidArgument on empty input.
double quantile(std::vector<double> values, double p);
inline double median(std::vector<double> values) { return quantile(std::move(values), 0.5); }

}  // namespace blesskit
