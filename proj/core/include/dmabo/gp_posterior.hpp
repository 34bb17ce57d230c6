#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "dmabo/kernel.hpp"
#include "dmabo/types.hpp"

namespace dmabo {

struct Prediction {
  double mean = 0.0;
  double variance = 0.0;

  double stddev() const { return std::sqrt(variance); }
};

/// Jitter ladder shared by every Gram factorization: start at
/// kJitterStart * k(x,x), multiply by 10 on failure, give up past kJitterMax.
inline constexpr double kJitterStart = 1e-10;
inline constexpr double kJitterMax = 1e-4;

/// Zero-mean GP regression state over an arbitrary sequence of inputs.
///
/// Holds the lower Cholesky factor L of (K_t + noise * I) in packed row-major
/// form together with L^{-1} y, so appending one observation costs O(t^2) and
/// a prediction costs O(t^2). The value is logically immutable: predict() is
/// const and thread-safe, and with_observation() returns a new posterior.
///
/// info_gain() is 1/2 log det(I + K_t / noise) of the observed sequence,
/// accumulated as 1/2 log(1 + sigma_{t-1}^2(x_t) / noise) per append.
class GPPosterior {
 public:
  /// The prior. Throws InputError for an invalid kernel or noise <= 0.
  GPPosterior(KernelSpec kernel, double noise);

  /// One-shot construction from a full data set (used as the batch reference
  /// for the incremental path).
  static GPPosterior fit(KernelSpec kernel, double noise, std::vector<Point> inputs,
                         std::vector<double> targets);

  Prediction predict(const Point& x) const;
  std::vector<Prediction> predict(std::span<const Point> xs) const;

  [[nodiscard]] GPPosterior with_observation(const Point& x, double y) const&;
  [[nodiscard]] GPPosterior with_observation(const Point& x, double y) &&;

  /// Returns a posterior that keeps mean and variance on `grid` up to date
  /// while observations are appended (O(t |grid|) per append instead of
  /// O(t^2 |grid|) per sweep of predict()).
  [[nodiscard]] GPPosterior tracking(std::shared_ptr<const Grid> grid) &&;
  bool tracks_grid() const { return grid_ != nullptr; }
  /// Prediction at point k of the tracked grid. Requires tracks_grid().
  Prediction grid_prediction(std::size_t k) const;

  double info_gain() const { return info_gain_; }
  std::size_t size() const { return inputs_.size(); }
  bool empty() const { return inputs_.empty(); }
  const KernelSpec& kernel() const { return kernel_; }
  double noise() const { return noise_; }
  /// Diagonal jitter currently in use on top of the noise term.
  double jitter() const { return jitter_; }
  const std::vector<Point>& inputs() const { return inputs_; }
  const std::vector<double>& targets() const { return targets_; }

 private:
  void append(const Point& x, double y);
  void refactor();
  bool try_factor(double jitter);
  double chol(std::size_t row, std::size_t col) const { return chol_[row * (row + 1) / 2 + col]; }
  // Solves L v = rhs in place for the current factor.
  void forward_solve(std::vector<double>& rhs) const;

  KernelSpec kernel_;
  double noise_;
  std::vector<Point> inputs_;
  std::vector<double> targets_;
  std::vector<double> chol_;
  std::vector<double> alpha_;
  double info_gain_ = 0.0;
  double jitter_ = 0.0;

  // Tracked grid: rows of L^{-1} K(X_t, grid) (t x |grid|, row-major) and the
  // resulting mean and variance at every grid point.
  void rebuild_grid_cache();
  std::shared_ptr<const Grid> grid_;
  std::vector<double> grid_v_;
  std::vector<double> grid_mean_;
  std::vector<double> grid_var_;
  std::vector<double> grid_prior_;
};

/// Lower Cholesky factor of `gram + jitter * I` using the jitter ladder
/// (jitter relative to the largest diagonal entry). Throws NumericalError when
/// the ladder is exhausted. `jitter_used` receives the absolute jitter.
Eigen::MatrixXd cholesky_with_jitter(const Eigen::MatrixXd& gram, double* jitter_used = nullptr);

}  // namespace dmabo
