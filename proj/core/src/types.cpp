#include "dmabo/types.hpp"

#include "dmabo/error.hpp"

namespace dmabo {

Grid uniform_grid_1d(double lo, double hi, std::size_t size) {
  if (size == 0) throw InputError("uniform_grid_1d: size must be positive");
  if (!(hi >= lo)) throw InputError("uniform_grid_1d: hi < lo");
  Grid grid;
  grid.reserve(size);
  for (std::size_t k = 0; k < size; ++k) {
    const double u = size == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(size - 1);
    Point p(1);
    p[0] = lo + (hi - lo) * u;
    grid.push_back(std::move(p));
  }
  return grid;
}

}  // namespace dmabo
