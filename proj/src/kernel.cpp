#include "blesskit/kernel.hpp"

#include <cmath>
#include <numeric>

#include "blesskit/error.hpp"
#include "blesskit/parallel.hpp"

namespace blesskit {

Dataset::Dataset(RowMatrix points, std::optional<Eigen::VectorXd> labels)
    : points_(std::move(points)), labels_(std::move(labels)) {
  if (points_.rows() < 1 || points_.cols() < 1) {
    throw InvalidArgument("dataset must contain at least one point of dimension >= 1");
  }
  if (!points_.allFinite()) throw InvalidArgument("dataset contains non-finite coordinates");
  if (labels_) {
    if (labels_->size() != points_.rows()) {
      throw InvalidArgument("label count " + std::to_string(labels_->size()) +
                            " does not match point count " + std::to_string(points_.rows()));
    }
    if (!labels_->allFinite()) throw InvalidArgument("dataset contains non-finite labels");
  }
}

const Eigen::VectorXd& Dataset::labels() const {
  if (!labels_) throw InvalidArgument("dataset has no labels");
  return *labels_;
}

Dataset Dataset::subset(const IndexList& idx) const {
  check_indices(idx, size(), "subset");
  RowMatrix pts(static_cast<Index>(idx.size()), dim());
  std::optional<Eigen::VectorXd> lab;
  if (labels_) lab = Eigen::VectorXd(static_cast<Index>(idx.size()));
  for (std::size_t a = 0; a < idx.size(); ++a) {
    pts.row(static_cast<Index>(a)) = points_.row(idx[a]);
    if (lab) (*lab)(static_cast<Index>(a)) = (*labels_)(idx[a]);
  }
  return Dataset(std::move(pts), std::move(lab));
}

std::string to_string(KernelFamily family) {
  return family == KernelFamily::gaussian ? "gaussian" : "linear";
}

KernelFamily parse_kernel_family(const std::string& name) {
  if (name == "gaussian") return KernelFamily::gaussian;
  if (name == "linear") return KernelFamily::linear;
  throw InvalidArgument("unknown kernel family '" + name + "' (expected gaussian or linear)");
}

KernelSpec::KernelSpec(KernelFamily family, double sigma, double bound)
    : family_(family), sigma_(sigma), bound_(bound),
      inv_two_sigma2_(family == KernelFamily::gaussian ? 1.0 / (2.0 * sigma * sigma) : 0.0) {}

KernelSpec KernelSpec::gaussian(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidArgument("gaussian bandwidth must be finite and > 0");
  }
  return KernelSpec(KernelFamily::gaussian, sigma, 1.0);
}

KernelSpec KernelSpec::linear(const Dataset& data) {
  return KernelSpec(KernelFamily::linear, 0.0, data.points().rowwise().squaredNorm().maxCoeff());
}

KernelSpec KernelSpec::linear_with_bound(double bound) {
  if (!(bound >= 0.0) || !std::isfinite(bound)) {
    throw InvalidArgument("linear kernel bound must be finite and >= 0");
  }
  return KernelSpec(KernelFamily::linear, 0.0, bound);
}

double eval_kernel(const KernelSpec& spec, std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw InvalidArgument("kernel arguments have dimensions " + std::to_string(x.size()) + " and " +
                          std::to_string(y.size()));
  }
  return spec(x, y);
}

void check_indices(const IndexList& idx, Index n, const char* what) {
  for (Index i : idx) {
    if (i < 0 || i >= n) {
      throw InvalidArgument(std::string(what) + ": index " + std::to_string(i) +
                            " outside [0, " + std::to_string(n) + ")");
    }
  }
}

IndexList iota_indices(Index n) {
  IndexList idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Index{0});
  return idx;
}

Eigen::MatrixXd kernel_block(const KernelSpec& spec, const Dataset& data, const IndexList& rows,
                             const IndexList& cols) {
  check_indices(rows, data.size(), "kernel_block rows");
  check_indices(cols, data.size(), "kernel_block cols");
  const Index nr = static_cast<Index>(rows.size());
  const Index nc = static_cast<Index>(cols.size());
  Eigen::MatrixXd out(nr, nc);
  // Column-major output: fill one column per task.
#pragma omp parallel for schedule(static) num_threads(thread_count()) if (nr * nc > 65536)
  for (Index b = 0; b < nc; ++b) {
    const auto xb = data.point(cols[static_cast<std::size_t>(b)]);
    for (Index a = 0; a < nr; ++a) out(a, b) = spec(data.point(rows[static_cast<std::size_t>(a)]), xb);
  }
  return out;
}

Eigen::MatrixXd kernel_cross(const KernelSpec& spec, const RowMatrix& left, const RowMatrix& right) {
  if (left.cols() != right.cols()) {
    throw InvalidArgument("kernel_cross: point dimensions " + std::to_string(left.cols()) + " and " +
                          std::to_string(right.cols()) + " differ");
  }
  const Index nr = left.rows();
  const Index nc = right.rows();
  const auto d = static_cast<std::size_t>(left.cols());
  Eigen::MatrixXd out(nr, nc);
#pragma omp parallel for schedule(static) num_threads(thread_count()) if (nr * nc > 65536)
  for (Index b = 0; b < nc; ++b) {
    const std::span<const double> xb(right.data() + b * right.cols(), d);
    for (Index a = 0; a < nr; ++a) out(a, b) = spec({left.data() + a * left.cols(), d}, xb);
  }
  return out;
}

Eigen::VectorXd kernel_diag(const KernelSpec& spec, const Dataset& data, const IndexList& idx) {
  check_indices(idx, data.size(), "kernel_diag");
  Eigen::VectorXd out(static_cast<Index>(idx.size()));
  for (std::size_t a = 0; a < idx.size(); ++a) {
    const auto x = data.point(idx[a]);
    out(static_cast<Index>(a)) = spec(x, x);
  }
  return out;
}

}  // namespace blesskit
