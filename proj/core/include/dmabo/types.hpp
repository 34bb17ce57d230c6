#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

namespace dmabo {

/// A point of an agent's local decision space.
using Point = Eigen::VectorXd;

/// A finite local domain; optimization happens over grid indices.
using Grid = std::vector<Point>;

/// Uniform grid of `size` points on [lo, hi] (a single point sits at lo).
Grid uniform_grid_1d(double lo, double hi, std::size_t size);

}  // namespace dmabo
