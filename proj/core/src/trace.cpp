#include "dmabo/trace.hpp"

namespace dmabo {

double RoundRecord::total_f() const {
  double total = 0.0;
  for (double v : f_true) total += v;
  return total;
}

Eigen::VectorXd RoundRecord::total_g() const {
  const std::size_t m = g_true.empty() ? 0 : g_true.front().size();
  Eigen::VectorXd total = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
  for (const auto& per_agent : g_true) {
    for (std::size_t j = 0; j < m; ++j) total[static_cast<Eigen::Index>(j)] += per_agent[j];
  }
  return total;
}

}  // namespace dmabo
