#include "dmabo/dual.hpp"

#include "dmabo/error.hpp"

namespace dmabo {

std::vector<double> local_lagrangian(std::span<const double> lcb_f,
                                     std::span<const std::vector<double>> lcb_g,
                                     const Eigen::MatrixXd& affine_block, const DualState& dual,
                                     const Grid& grid) {
  const std::size_t size = grid.size();
  if (lcb_f.size() != size) throw InputError("primal update: lcb_f does not cover the grid");
  if (lcb_g.size() != static_cast<std::size_t>(dual.lambda.size())) {
    throw InputError("primal update: lambda and lcb_g disagree on m");
  }
  for (const auto& row : lcb_g) {
    if (row.size() != size) throw InputError("primal update: lcb_g does not cover the grid");
  }
  const bool has_affine = dual.mu.size() > 0;
  if (has_affine && affine_block.rows() != dual.mu.size()) {
    throw InputError("primal update: A_i and mu disagree on l");
  }
  // Row vector mu^T A_i, so each grid point costs one dot product.
  Eigen::RowVectorXd price;
  if (has_affine) price = dual.mu.transpose() * affine_block;

  std::vector<double> values(size);
  for (std::size_t k = 0; k < size; ++k) {
    double v = lcb_f[k];
    for (std::size_t j = 0; j < lcb_g.size(); ++j) {
      v += dual.eta * dual.lambda[static_cast<Eigen::Index>(j)] * lcb_g[j][k];
    }
    if (has_affine) v += dual.eta * price.dot(grid[k]);
    values[k] = v;
  }
  return values;
}

std::size_t primal_update(std::span<const double> lcb_f,
                          std::span<const std::vector<double>> lcb_g,
                          const Eigen::MatrixXd& affine_block, const DualState& dual,
                          const Grid& grid) {
  if (grid.empty()) throw InputError("primal update: empty grid");
  const std::vector<double> values = local_lagrangian(lcb_f, lcb_g, affine_block, dual, grid);
  std::size_t best = 0;
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (values[k] < values[best]) best = k;
  }
  return best;
}

DualState dual_update(const DualState& dual, const Eigen::VectorXd& sum_lcb_g,
                      const Eigen::VectorXd& affine_residual) {
  if (sum_lcb_g.size() != dual.lambda.size()) {
    throw InputError("dual update: constraint dimension mismatch");
  }
  if (affine_residual.size() != dual.mu.size()) {
    throw InputError("dual update: affine dimension mismatch");
  }
  DualState next = dual;
  next.lambda = (dual.lambda + sum_lcb_g).array() + dual.epsilon;
  next.lambda = next.lambda.cwiseMax(0.0);
  next.mu = dual.mu + affine_residual;
  return next;
}

}  // namespace dmabo
