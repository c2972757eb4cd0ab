#pragma once

#include <vector>

#include "grownet/gp/model.hpp"
#include "grownet/numeric/bounded_box.hpp"
#include "grownet/numeric/rng.hpp"

namespace grownet::acquisition {

struct Proposal {
  Vector point;      // integer-projected, original coordinates
  Vector raw_point;  // continuous acquisition optimum
  double ei_value = 0.0;
};

/// Rounds half-up per coordinate, then clamps into the box.
Vector project_to_integer(const Vector& raw, const numeric::BoundedBox& bounds);

/// Maximizes expected improvement over the box with multi-start
/// L-BFGS (Latin-hypercube starts plus the incumbent best
/// observation). If the integer projection duplicates `history`,
/// falls back to the best non-duplicate among 512 Latin-hypercube
/// candidates; when even those all duplicate, the original proposal
/// is returned and the caller decides.
Proposal propose_next(const gp::GpModel& model,
                      const numeric::BoundedBox& bounds,
                      const std::vector<Vector>& history, int n_starts,
                      numeric::Rng& rng);

}  // namespace grownet::acquisition
