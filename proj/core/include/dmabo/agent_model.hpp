#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "dmabo/gp_posterior.hpp"
#include "dmabo/sim.hpp"

namespace dmabo {

/// The m + 1 GP surrogates an agent keeps about its own oracle (output 0 is
/// the objective, output j >= 1 the j-th constraint), all tracking the
/// agent's grid.
class AgentModel {
 public:
  AgentModel(const KernelSpec& kernel, double model_noise, int num_constraints,
             std::shared_ptr<const Grid> grid);

  const GPPosterior& output(std::size_t j) const { return outputs_[j]; }
  std::size_t num_outputs() const { return outputs_.size(); }
  const Grid& grid() const { return *grid_; }

  void observe(const Point& x, const Observation& obs);

  std::vector<double> info_gains() const;

 private:
  std::shared_ptr<const Grid> grid_;
  std::vector<GPPosterior> outputs_;
};

}  // namespace dmabo
