#pragma once

#include <span>
#include <vector>

#include "dmabo/gp_posterior.hpp"

namespace dmabo {

/// How the confidence multiplier is chosen: the self-normalized formula driven
/// by the running information gain, or a fixed value (3 works well in practice).
struct BetaMode {
  enum class Kind { kTheoretical, kConstant };
  Kind kind = Kind::kConstant;
  double value = 3.0;

  static BetaMode theoretical() { return {Kind::kTheoretical, 0.0}; }
  static BetaMode constant(double v) { return {Kind::kConstant, v}; }

  bool operator==(const BetaMode&) const = default;
};

struct BoundParams {
  double C = 1.0;            // norm bound of the modelled function
  double sigma_noise = 0.0;  // sub-Gaussian observation noise level
  double delta = 0.1;        // failure probability, in (0, 1)
  int num_agents = 1;        // N
  int num_constraints = 0;   // m
  BetaMode mode{};

  /// Throws InputError when delta is outside (0,1), C < 0, N < 1, m < 0 or a
  /// constant beta is not positive.
  void validate() const;
};

/// beta = C + sigma * sqrt(2 (gamma_prev + 1 + ln(N (m + 1) / delta))) in
/// theoretical mode; the fixed value otherwise.
double beta(const BoundParams& params, double gamma_prev);

struct ConfidenceInterval {
  double lower = 0.0;
  double upper = 0.0;
};

/// [max(mu - beta sigma, -C), min(mu + beta sigma, C)].
ConfidenceInterval clipped_interval(const Prediction& prediction, double beta, double C);

double lcb(const GPPosterior& post, double beta, double C, const Point& x);
double ucb(const GPPosterior& post, double beta, double C, const Point& x);

std::vector<ConfidenceInterval> intervals_on_grid(const GPPosterior& post, double beta, double C,
                                                  std::span<const Point> grid);

}  // namespace dmabo
