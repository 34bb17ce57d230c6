#include "dmabo/sim.hpp"

#include <cmath>
#include <utility>

#include "dmabo/error.hpp"

namespace dmabo {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(splitmix64(master) ^ (a + 0x632be59bd9b4e019ULL)) ^
                    (b + 0x8cb92ba72f3d8dd7ULL));
}

AgentOracle::AgentOracle(const AgentProblem& agent, double noise_sigma,
                         std::uint64_t master_seed, std::size_t agent_id)
    : grid_(agent.grid),
      objective_(agent.objective),
      constraints_(agent.constraints),
      sigma_(noise_sigma),
      agent_id_(agent_id) {
  if (!(sigma_ >= 0.0)) throw InputError("noise sigma must be nonnegative");
  for (std::size_t output = 0; output <= constraints_.size(); ++output) {
    streams_.emplace_back(derive_seed(master_seed, agent_id, output));
    normals_.emplace_back(0.0, 1.0);
  }
}

Observation AgentOracle::truth(std::size_t index) const {
  if (index >= grid_.size()) {
    throw InputError("agent " + std::to_string(agent_id_) + ": grid index " +
                     std::to_string(index) + " outside the domain");
  }
  Observation obs;
  obs.y_f = objective_[index];
  obs.y_g.reserve(constraints_.size());
  for (const auto& g : constraints_) obs.y_g.push_back(g[index]);
  return obs;
}

Observation AgentOracle::evaluate(std::size_t index) {
  Observation obs = truth(index);
  if (sigma_ == 0.0) return obs;
  obs.y_f += sigma_ * normals_[0](streams_[0]);
  for (std::size_t j = 0; j < obs.y_g.size(); ++j) {
    obs.y_g[j] += sigma_ * normals_[j + 1](streams_[j + 1]);
  }
  return obs;
}

Observation AgentOracle::evaluate(const Point& x) { return evaluate(index_of(x)); }

std::size_t AgentOracle::index_of(const Point& x) const {
  for (std::size_t k = 0; k < grid_.size(); ++k) {
    if (grid_[k].size() == x.size() && (grid_[k] - x).cwiseAbs().maxCoeff() <= 1e-12) return k;
  }
  throw InputError("agent " + std::to_string(agent_id_) + ": point is not in the domain");
}

Coordinator::Coordinator(std::size_t num_agents, int num_constraints, Eigen::VectorXd b)
    : num_agents_(num_agents), num_constraints_(num_constraints), b_(std::move(b)) {}

DualState Coordinator::round(std::span<const AgentReport> reports, const DualState& dual) const {
  std::vector<bool> seen(num_agents_, false);
  Eigen::VectorXd sum_lcb = Eigen::VectorXd::Zero(num_constraints_);
  Eigen::VectorXd residual = -b_;
  for (const AgentReport& report : reports) {
    if (report.agent >= num_agents_) {
      throw ProtocolError("report from unknown agent " + std::to_string(report.agent));
    }
    if (seen[report.agent]) {
      throw ProtocolError("duplicate report from agent " + std::to_string(report.agent));
    }
    seen[report.agent] = true;
    if (report.affine_contribution.size() != b_.size() ||
        report.lcb_constraints.size() != num_constraints_) {
      throw ProtocolError("report from agent " + std::to_string(report.agent) +
                          " has the wrong dimensions");
    }
    sum_lcb += report.lcb_constraints;
    residual += report.affine_contribution;
  }
  for (std::size_t i = 0; i < num_agents_; ++i) {
    if (!seen[i]) throw ProtocolError("missing report from agent " + std::to_string(i));
  }
  return dual_update(dual, sum_lcb, residual);
}

}  // namespace dmabo
