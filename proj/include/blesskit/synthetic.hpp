#pragma once

#include <cstdint>

#include "blesskit/kernel.hpp"

namespace blesskit {

/// n i.i.d. N(0, scale^2 I_d) points, unlabeled.
Dataset gaussian_points(Index n, Index d, std::uint64_t seed, double scale = 1.0);

/// Two isotropic unit-variance gaussian blobs centred at +-(separation/2) e_1,
/// labels +1 / -1 in alternating order. Separable in practice for
/// separation >= 10.
Dataset gaussian_blobs(Index n, Index d, double separation, std::uint64_t seed);

/// Dense core plus a sparse, wide halo in d dimensions.
///
/// A fraction `halo_fraction` of the points is N(0, halo_scale^2 I), the
/// rest N(0, core_scale^2 I). The label is sign(x_1); points with
/// |x_1| < margin * scale of their component are pushed out to the margin,
/// so the classes are separable by the hyperplane x_1 = 0. Leverage is
/// concentrated on the halo, which a uniform dictionary undersamples.
struct HaloOptions {
  Index d = 2;
  double core_scale = 0.1;
  double halo_scale = 3.0;
  double halo_fraction = 0.1;
  double margin = 0.1;
};
Dataset halo_task(Index n, std::uint64_t seed, const HaloOptions& options = {});

}  // namespace blesskit
