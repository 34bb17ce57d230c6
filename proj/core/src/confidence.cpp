#include "dmabo/confidence.hpp"

#include <algorithm>
#include <cmath>

#include "dmabo/error.hpp"

namespace dmabo {

void BoundParams::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) throw InputError("delta must lie in (0, 1)");
  if (!(C >= 0.0)) throw InputError("norm bound C must be nonnegative");
  if (!(sigma_noise >= 0.0)) throw InputError("noise level sigma must be nonnegative");
  if (num_agents < 1) throw InputError("need at least one agent");
  if (num_constraints < 0) throw InputError("number of constraints must be nonnegative");
  if (mode.kind == BetaMode::Kind::kConstant && !(mode.value > 0.0)) {
    throw InputError("constant beta must be positive");
  }
}

double beta(const BoundParams& params, double gamma_prev) {
  params.validate();
  if (params.mode.kind == BetaMode::Kind::kConstant) return params.mode.value;
  if (!(gamma_prev >= 0.0)) throw InputError("information gain must be nonnegative");
  const double log_term =
      std::log(params.num_agents * (params.num_constraints + 1.0) / params.delta);
  return params.C + params.sigma_noise * std::sqrt(2.0 * (gamma_prev + 1.0 + log_term));
}

ConfidenceInterval clipped_interval(const Prediction& prediction, double beta, double C) {
  const double width = beta * prediction.stddev();
  // lower <= upper holds because -C <= C and mu - w <= mu + w; clipping keeps
  // both inside [-C, C] but may collapse the interval onto an end point.
  const double lower = std::clamp(prediction.mean - width, -C, C);
  const double upper = std::clamp(prediction.mean + width, -C, C);
  return {lower, upper};
}

double lcb(const GPPosterior& post, double beta, double C, const Point& x) {
  return clipped_interval(post.predict(x), beta, C).lower;
}

double ucb(const GPPosterior& post, double beta, double C, const Point& x) {
  return clipped_interval(post.predict(x), beta, C).upper;
}

std::vector<ConfidenceInterval> intervals_on_grid(const GPPosterior& post, double beta, double C,
                                                  std::span<const Point> grid) {
  std::vector<ConfidenceInterval> out;
  out.reserve(grid.size());
  for (const Point& x : grid) out.push_back(clipped_interval(post.predict(x), beta, C));
  return out;
}

}  // namespace dmabo
