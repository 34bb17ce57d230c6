#include "dmabo/gp_posterior.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <utility>

#include "dmabo/error.hpp"

namespace dmabo {

GPPosterior::GPPosterior(KernelSpec kernel, double noise) : kernel_(std::move(kernel)), noise_(noise) {
  kernel_.validate();
  if (!(noise_ > 0.0) || !std::isfinite(noise_)) {
    throw InputError("GP model noise must be positive");
  }
}

GPPosterior GPPosterior::fit(KernelSpec kernel, double noise, std::vector<Point> inputs,
                             std::vector<double> targets) {
  if (inputs.size() != targets.size()) {
    throw InputError("GPPosterior::fit: inputs and targets differ in length");
  }
  GPPosterior post(std::move(kernel), noise);
  for (const Point& x : inputs) {
    if (x.size() != static_cast<Eigen::Index>(post.kernel_.dimension())) {
      throw InputError("GPPosterior::fit: input dimension does not match kernel");
    }
  }
  post.inputs_ = std::move(inputs);
  post.targets_ = std::move(targets);
  post.refactor();
  return post;
}

void GPPosterior::forward_solve(std::vector<double>& rhs) const {
  const std::size_t n = inputs_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = chol_.data() + i * (i + 1) / 2;
    double acc = rhs[i];
    for (std::size_t j = 0; j < i; ++j) acc -= row[j] * rhs[j];
    rhs[i] = acc / row[i];
  }
}

bool GPPosterior::try_factor(double jitter) {
  const std::size_t n = inputs_.size();
  std::vector<double> packed(n * (n + 1) / 2);
  std::vector<double> alpha(n);
  double gain = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double* row = packed.data() + i * (i + 1) / 2;
    for (std::size_t j = 0; j < i; ++j) {
      const double* other = packed.data() + j * (j + 1) / 2;
      double acc = kernel_eval(kernel_, inputs_[i], inputs_[j]);
      for (std::size_t k = 0; k < j; ++k) acc -= row[k] * other[k];
      row[j] = acc / other[j];
    }
    double d2 = kernel_eval(kernel_, inputs_[i], inputs_[i]) + noise_ + jitter;
    for (std::size_t k = 0; k < i; ++k) d2 -= row[k] * row[k];
    if (!(d2 > 0.0) || !std::isfinite(d2)) return false;
    row[i] = std::sqrt(d2);
    double acc = targets_[i];
    for (std::size_t k = 0; k < i; ++k) acc -= row[k] * alpha[k];
    alpha[i] = acc / row[i];
    gain += 0.5 * std::log1p(std::max(0.0, d2 - noise_ - jitter) / noise_);
  }
  chol_ = std::move(packed);
  alpha_ = std::move(alpha);
  info_gain_ = gain;
  jitter_ = jitter;
  return true;
}

void GPPosterior::refactor() {
  bool done = try_factor(0.0);
  const double scale = kernel_.output_scale;
  for (double rel = kJitterStart; !done && rel <= kJitterMax * (1.0 + 1e-12); rel *= 10.0) {
    done = try_factor(rel * scale);
  }
  if (done) {
    if (grid_) rebuild_grid_cache();
    return;
  }
  throw NumericalError("Cholesky factorization of the GP Gram matrix failed after jitter " +
                       std::to_string(kJitterMax));
}

void GPPosterior::append(const Point& x, double y) {
  const std::size_t n = inputs_.size();
  std::vector<double> k(n);
  for (std::size_t i = 0; i < n; ++i) k[i] = kernel_eval(kernel_, inputs_[i], x);
  const double kxx = kernel_eval(kernel_, x, x);
  forward_solve(k);
  double d2 = kxx + noise_ + jitter_;
  double proj = y;
  for (std::size_t i = 0; i < n; ++i) {
    d2 -= k[i] * k[i];
    proj -= k[i] * alpha_[i];
  }
  inputs_.push_back(x);
  targets_.push_back(y);
  if (!(d2 > 0.0) || !std::isfinite(d2)) {
    refactor();
    return;
  }
  const double d = std::sqrt(d2);
  const double alpha_new = proj / d;
  if (grid_) {
    const std::size_t g = grid_->size();
    std::vector<double> row(g);
    for (std::size_t c = 0; c < g; ++c) {
      double acc = kernel_eval(kernel_, x, (*grid_)[c]);
      for (std::size_t i = 0; i < n; ++i) acc -= k[i] * grid_v_[i * g + c];
      row[c] = acc / d;
      grid_mean_[c] += row[c] * alpha_new;
      grid_var_[c] -= row[c] * row[c];
    }
    grid_v_.insert(grid_v_.end(), row.begin(), row.end());
  }
  chol_.insert(chol_.end(), k.begin(), k.end());
  chol_.push_back(d);
  alpha_.push_back(alpha_new);
  info_gain_ += 0.5 * std::log1p(std::max(0.0, d2 - noise_ - jitter_) / noise_);
}

void GPPosterior::rebuild_grid_cache() {
  const std::size_t g = grid_->size();
  const std::size_t n = inputs_.size();
  grid_prior_.assign(g, 0.0);
  grid_mean_.assign(g, 0.0);
  grid_var_.assign(g, 0.0);
  grid_v_.assign(n * g, 0.0);
  std::vector<double> v(n);
  for (std::size_t c = 0; c < g; ++c) {
    const Point& x = (*grid_)[c];
    grid_prior_[c] = kernel_eval(kernel_, x, x);
    for (std::size_t i = 0; i < n; ++i) v[i] = kernel_eval(kernel_, inputs_[i], x);
    forward_solve(v);
    double mean = 0.0;
    double reduction = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      grid_v_[i * g + c] = v[i];
      mean += v[i] * alpha_[i];
      reduction += v[i] * v[i];
    }
    grid_mean_[c] = mean;
    grid_var_[c] = grid_prior_[c] - reduction;
  }
}

GPPosterior GPPosterior::tracking(std::shared_ptr<const Grid> grid) && {
  if (!grid) throw InputError("GPPosterior::tracking: null grid");
  for (const Point& x : *grid) {
    if (x.size() != static_cast<Eigen::Index>(kernel_.dimension())) {
      throw InputError("GPPosterior::tracking: grid dimension does not match kernel");
    }
  }
  grid_ = std::move(grid);
  rebuild_grid_cache();
  return std::move(*this);
}

Prediction GPPosterior::grid_prediction(std::size_t k) const {
  if (!grid_ || k >= grid_->size()) throw InputError("grid_prediction: no such tracked point");
  return {grid_mean_[k], std::clamp(grid_var_[k], 0.0, grid_prior_[k])};
}

GPPosterior GPPosterior::with_observation(const Point& x, double y) const& {
  GPPosterior next(*this);
  next.append(x, y);
  return next;
}

GPPosterior GPPosterior::with_observation(const Point& x, double y) && {
  append(x, y);
  return std::move(*this);
}

Prediction GPPosterior::predict(const Point& x) const {
  const double kxx = kernel_eval(kernel_, x, x);
  const std::size_t n = inputs_.size();
  if (n == 0) return {0.0, kxx};
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = kernel_eval(kernel_, inputs_[i], x);
  forward_solve(v);
  double mean = 0.0;
  double reduction = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean += v[i] * alpha_[i];
    reduction += v[i] * v[i];
  }
  return {mean, std::clamp(kxx - reduction, 0.0, kxx)};
}

std::vector<Prediction> GPPosterior::predict(std::span<const Point> xs) const {
  std::vector<Prediction> out;
  out.reserve(xs.size());
  for (const Point& x : xs) out.push_back(predict(x));
  return out;
}

Eigen::MatrixXd cholesky_with_jitter(const Eigen::MatrixXd& gram, double* jitter_used) {
  if (gram.rows() != gram.cols()) throw InputError("cholesky_with_jitter: matrix is not square");
  const Eigen::Index n = gram.rows();
  if (n == 0) {
    if (jitter_used) *jitter_used = 0.0;
    return Eigen::MatrixXd(0, 0);
  }
  const double scale = std::max(gram.diagonal().maxCoeff(), 1e-300);
  for (double rel = kJitterStart; rel <= kJitterMax * (1.0 + 1e-12); rel *= 10.0) {
    const double jitter = rel * scale;
    Eigen::MatrixXd shifted = gram;
    shifted.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(shifted);
    if (llt.info() != Eigen::Success) continue;
    Eigen::MatrixXd lower = llt.matrixL();
    if (!lower.diagonal().allFinite() || (lower.diagonal().array() <= 0.0).any()) continue;
    if (jitter_used) *jitter_used = jitter;
    return lower;
  }
  throw NumericalError("Cholesky factorization failed after jitter escalation to " +
                       std::to_string(kJitterMax));
}

}  // namespace dmabo
