#pragma once

#include <cstdint>
#include <vector>

#include "dmabo/kernel.hpp"
#include "dmabo/types.hpp"

namespace dmabo {

/// A function known only on a finite grid.
struct TabulatedFunction {
  Grid grid;
  std::vector<double> values;
};

/// Draws one realization of GP(0, k) on `grid`, i.e. a sample of
/// N(0, K_grid + jitter I). Deterministic for a given seed on one platform.
/// Throws InputError on an empty grid, NumericalError if the Gram matrix
/// cannot be factored.
TabulatedFunction sample_prior_function(const KernelSpec& spec, const Grid& grid,
                                        std::uint64_t seed);

}  // namespace dmabo
