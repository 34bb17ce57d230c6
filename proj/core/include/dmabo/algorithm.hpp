#pragma once

#include <cstdint>
#include <optional>

#include "dmabo/confidence.hpp"
#include "dmabo/problem.hpp"
#include "dmabo/trace.hpp"

namespace dmabo {

/// Drift added to the dual step: a fixed value, or one of the two
/// theoretical schedules. kEpsilon1 re-evaluates the information-gain term
/// every round from the running gains (the true maximum information gain is
/// not computable).
struct EpsilonMode {
  enum class Kind { kManual, kEpsilon1, kEpsilon2 };
  Kind kind = Kind::kManual;
  double value = 0.0;

  static EpsilonMode manual(double v) { return {Kind::kManual, v}; }
  static EpsilonMode epsilon1() { return {Kind::kEpsilon1, 0.0}; }
  static EpsilonMode epsilon2() { return {Kind::kEpsilon2, 0.0}; }

  bool operator==(const EpsilonMode&) const = default;
};

/// Initial lambda: a constant broadcast to every entry, or sqrt(H1 / divisor) e.
struct Lambda1Mode {
  enum class Kind { kManual, kTheoretical };
  Kind kind = Kind::kManual;
  double value = 0.0;

  static Lambda1Mode manual(double v) { return {Kind::kManual, v}; }
  static Lambda1Mode theoretical() { return {Kind::kTheoretical, 0.0}; }

  bool operator==(const Lambda1Mode&) const = default;
};

/// Where the confidence bounds come from. kExact replaces them by the
/// noise-free oracle values, i.e. the limit of perfectly learned surrogates;
/// it exists to study the primal-dual dynamics in isolation.
enum class BoundsSource { kGaussianProcess, kExact };

struct AlgoConfig {
  int horizon = 0;
  BetaMode beta = BetaMode::constant(3.0);
  double delta = 0.1;
  double model_noise = 0.0004;
  std::optional<double> eta;  // defaults to 1 / sqrt(T)
  EpsilonMode epsilon{};
  Lambda1Mode lambda1{};
  double lambda1_divisor = 0.0;  // <= 0 means m
  double mu1 = 0.0;
  BoundsSource bounds = BoundsSource::kGaussianProcess;

  /// Throws InputError for T < 0, eta <= 0, model noise <= 0, delta outside (0,1).
  void validate() const;

  bool operator==(const AlgoConfig&) const = default;
};

/// Scaling used by the primal step: the override, else 1 / sqrt(T) (1 for T = 0).
double effective_eta(const AlgoConfig& config);

/// Runs T rounds of the distributed primal-dual loop: every agent minimizes
/// its optimistic local Lagrangian on its grid, the coordinator updates the
/// duals from the agents' reports, then the agents query their noisy oracles
/// and update their surrogates. Deterministic for a given seed.
///
/// Numerical failures surface as NumericalError carrying the round index.
RunTrace run_dmabo(const ProblemInstance& problem, const AlgoConfig& config, std::uint64_t seed);

}  // namespace dmabo
