#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dmabo/types.hpp"

namespace dmabo {

enum class KernelFamily { kSquaredExponential, kMatern52 };

std::string to_string(KernelFamily family);
KernelFamily kernel_family_from_string(std::string_view name);

/// Stationary covariance with one lengthscale per input dimension.
///
/// The output scale doubles as k(x, x), so values above 1 would break the
/// normalized-kernel assumption the confidence bounds rely on; validate()
/// rejects them.
struct KernelSpec {
  KernelFamily family = KernelFamily::kSquaredExponential;
  std::vector<double> lengthscales{0.2};
  double output_scale = 1.0;

  static KernelSpec squared_exponential(double lengthscale, std::size_t dim = 1,
                                        double output_scale = 1.0);
  static KernelSpec matern52(double lengthscale, std::size_t dim = 1, double output_scale = 1.0);

  std::size_t dimension() const { return lengthscales.size(); }

  /// Throws InputError on non-positive lengthscales or a scale outside (0, 1].
  void validate() const;

  bool operator==(const KernelSpec&) const = default;
};

/// k(x, x'). Throws InputError when either point has the wrong dimension.
double kernel_eval(const KernelSpec& spec, const Point& x, const Point& x_prime);

}  // namespace dmabo
