#pragma once

#include "slicecount/lattice_slice.hpp"

namespace slicecount::internal {

// slice_volume with the squared radius given directly, so integer rho^2
// boundaries are compared exactly.
double slice_volume_squared(const SliceConfig& cfg, const TorusOffset& offset, double rho2, const SliceOptions& options);

}  // namespace slicecount::internal
