#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace blesskit {

using Index = Eigen::Index;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Ordered indices into a dataset. Duplicates are allowed (multiset).
using IndexList = std::vector<Index>;

/// Points stored one per row, with optional real labels.
class Dataset {
 public:
  /// Throws InvalidArgument on empty input, non-finite entries, or a label
  /// vector whose length differs from the number of rows.
  explicit Dataset(RowMatrix points, std::optional<Eigen::VectorXd> labels = std::nullopt);

  Index size() const { return points_.rows(); }
  Index dim() const { return points_.cols(); }

  const RowMatrix& points() const { return points_; }
  std::span<const double> point(Index i) const {
    return {points_.data() + i * points_.cols(), static_cast<std::size_t>(points_.cols())};
  }

  bool has_labels() const { return labels_.has_value(); }
  /// Throws InvalidArgument when the dataset is unlabeled.
  const Eigen::VectorXd& labels() const;

  /// Rows `idx` in order (labels carried along when present).
  Dataset subset(const IndexList& idx) const;

 private:
  RowMatrix points_;
  std::optional<Eigen::VectorXd> labels_;
};

enum class KernelFamily { gaussian, linear };

std::string to_string(KernelFamily family);
KernelFamily parse_kernel_family(const std::string& name);

/// A bounded positive definite kernel together with its bound
/// kappa^2 >= sup_x K(x, x).
///
/// gaussian: K(x, x') = exp(-|x - x'|^2 / (2 sigma^2)), bound 1.
/// linear:   K(x, x') = <x, x'>, bound max_i |x_i|^2 over the dataset it
///           was built for.
class KernelSpec {
 public:
  static KernelSpec gaussian(double sigma);
  static KernelSpec linear(const Dataset& data);
  /// Linear kernel with an explicit bound (used when deserializing).
  static KernelSpec linear_with_bound(double bound);

  KernelFamily family() const { return family_; }
  double sigma() const { return sigma_; }
  double bound() const { return bound_; }

  /// Unchecked evaluation; both spans must have the same length.
  double operator()(std::span<const double> x, std::span<const double> y) const {
    double acc = 0.0;
    if (family_ == KernelFamily::gaussian) {
      for (std::size_t k = 0; k < x.size(); ++k) {
        const double diff = x[k] - y[k];
        acc += diff * diff;
      }
      return std::exp(-acc * inv_two_sigma2_);
    }
    for (std::size_t k = 0; k < x.size(); ++k) acc += x[k] * y[k];
    return acc;
  }

 private:
  KernelSpec(KernelFamily family, double sigma, double bound);

  KernelFamily family_;
  double sigma_;
  double bound_;
  double inv_two_sigma2_;
};

/// Checked single evaluation. Throws InvalidArgument on a dimension mismatch.
double eval_kernel(const KernelSpec& spec, std::span<const double> x, std::span<const double> y);

/// |rows| x |cols| block with entry (a, b) = K(x_rows[a], x_cols[b]).
///
/// Each entry is evaluated independently with the same operation order
/// regardless of threading, so kernel_block(r, c) is bitwise equal to
/// kernel_block(c, r) transposed.
Eigen::MatrixXd kernel_block(const KernelSpec& spec, const Dataset& data, const IndexList& rows,
                             const IndexList& cols);

/// Block between two point sets: entry (a, b) = K(left.row(a), right.row(b)).
Eigen::MatrixXd kernel_cross(const KernelSpec& spec, const RowMatrix& left, const RowMatrix& right);

/// Entries K(x_i, x_i) for i in idx.
Eigen::VectorXd kernel_diag(const KernelSpec& spec, const Dataset& data, const IndexList& idx);

/// Throws InvalidArgument if any index is outside [0, n).
void check_indices(const IndexList& idx, Index n, const char* what);

/// [0, 1, ..., n-1]
IndexList iota_indices(Index n);

}  // namespace blesskit
