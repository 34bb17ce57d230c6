#include "dmabo/prior_sampling.hpp"

#include <random>

#include "dmabo/error.hpp"
#include "dmabo/gp_posterior.hpp"

namespace dmabo {

TabulatedFunction sample_prior_function(const KernelSpec& spec, const Grid& grid,
                                        std::uint64_t seed) {
  spec.validate();
  if (grid.empty()) throw InputError("sample_prior_function: grid is empty");
  const auto n = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd gram(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      gram(i, j) = kernel_eval(spec, grid[static_cast<std::size_t>(i)],
                               grid[static_cast<std::size_t>(j)]);
      gram(j, i) = gram(i, j);
    }
  }
  const Eigen::MatrixXd lower = cholesky_with_jitter(gram);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) z[i] = normal(rng);
  const Eigen::VectorXd draw = lower.triangularView<Eigen::Lower>() * z;

  TabulatedFunction out;
  out.grid = grid;
  out.values.assign(draw.data(), draw.data() + n);
  return out;
}

}  // namespace dmabo
