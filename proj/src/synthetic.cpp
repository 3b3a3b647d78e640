#include "blesskit/synthetic.hpp"

#include <cmath>

#include "blesskit/error.hpp"
#include "blesskit/rng.hpp"

namespace blesskit {
namespace {

// Fixed stream ids keep the generators independent of the samplers.
constexpr std::uint64_t kPointsStream = 0x5eed0001;
constexpr std::uint64_t kBlobsStream = 0x5eed0002;
constexpr std::uint64_t kHaloStream = 0x5eed0003;

void require_shape(Index n, Index d) {
  if (n < 1 || d < 1) throw InvalidArgument("synthetic data needs n >= 1 and d >= 1");
}

}  // namespace

Dataset gaussian_points(Index n, Index d, std::uint64_t seed, double scale) {
  require_shape(n, d);
  if (!(scale > 0.0)) throw InvalidArgument("gaussian_points: scale must be > 0");
  CounterRng rng(seed, kPointsStream);
  RowMatrix pts(n, d);
  for (Index i = 0; i < n; ++i) {
    for (Index k = 0; k < d; ++k) pts(i, k) = scale * rng.normal();
  }
  return Dataset(std::move(pts));
}

Dataset gaussian_blobs(Index n, Index d, double separation, std::uint64_t seed) {
  require_shape(n, d);
  CounterRng rng(seed, kBlobsStream);
  RowMatrix pts(n, d);
  Eigen::VectorXd labels(n);
  for (Index i = 0; i < n; ++i) {
    const double y = i % 2 == 0 ? 1.0 : -1.0;
    for (Index k = 0; k < d; ++k) pts(i, k) = rng.normal();
    pts(i, 0) += 0.5 * separation * y;
    labels(i) = y;
  }
  return Dataset(std::move(pts), std::move(labels));
}

Dataset halo_task(Index n, std::uint64_t seed, const HaloOptions& o) {
  require_shape(n, o.d);
  if (!(o.core_scale > 0.0) || !(o.halo_scale > 0.0) || !(o.halo_fraction >= 0.0) ||
      !(o.halo_fraction <= 1.0) || !(o.margin >= 0.0)) {
    throw InvalidArgument("halo_task: invalid options");
  }
  CounterRng rng(seed, kHaloStream);
  RowMatrix pts(n, o.d);
  Eigen::VectorXd labels(n);
  for (Index i = 0; i < n; ++i) {
    const double scale = rng.uniform() < o.halo_fraction ? o.halo_scale : o.core_scale;
    for (Index k = 0; k < o.d; ++k) pts(i, k) = scale * rng.normal();
    const double y = pts(i, 0) >= 0.0 ? 1.0 : -1.0;
    if (std::abs(pts(i, 0)) < o.margin * scale) pts(i, 0) = y * o.margin * scale;
    labels(i) = y;
  }
  return Dataset(std::move(pts), std::move(labels));
}

}  // namespace blesskit
