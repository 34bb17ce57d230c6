#include "dmabo/agent_model.hpp"

#include <utility>

#include "dmabo/error.hpp"

namespace dmabo {

AgentModel::AgentModel(const KernelSpec& kernel, double model_noise, int num_constraints,
                       std::shared_ptr<const Grid> grid)
    : grid_(std::move(grid)) {
  for (int j = 0; j <= num_constraints; ++j) {
    outputs_.push_back(GPPosterior(kernel, model_noise).tracking(grid_));
  }
}

void AgentModel::observe(const Point& x, const Observation& obs) {
  if (obs.y_g.size() + 1 != outputs_.size()) {
    throw InputError("AgentModel::observe: observation has the wrong number of outputs");
  }
  outputs_[0] = std::move(outputs_[0]).with_observation(x, obs.y_f);
  for (std::size_t j = 0; j < obs.y_g.size(); ++j) {
    outputs_[j + 1] = std::move(outputs_[j + 1]).with_observation(x, obs.y_g[j]);
  }
}

std::vector<double> AgentModel::info_gains() const {
  std::vector<double> out;
  out.reserve(outputs_.size());
  for (const auto& post : outputs_) out.push_back(post.info_gain());
  return out;
}

}  // namespace dmabo
