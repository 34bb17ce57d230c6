#include "dmabo/kernel.hpp"

#include <cmath>

#include "dmabo/error.hpp"

namespace dmabo {

std::string to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::kSquaredExponential:
      return "se";
    case KernelFamily::kMatern52:
      return "matern52";
  }
  return "unknown";
}

KernelFamily kernel_family_from_string(std::string_view name) {
  if (name == "se" || name == "squared_exponential") return KernelFamily::kSquaredExponential;
  if (name == "matern52" || name == "matern-5/2") return KernelFamily::kMatern52;
  throw InputError("unknown kernel family '" + std::string(name) + "'");
}

KernelSpec KernelSpec::squared_exponential(double lengthscale, std::size_t dim,
                                           double output_scale) {
  return KernelSpec{KernelFamily::kSquaredExponential, std::vector<double>(dim, lengthscale),
                    output_scale};
}

KernelSpec KernelSpec::matern52(double lengthscale, std::size_t dim, double output_scale) {
  return KernelSpec{KernelFamily::kMatern52, std::vector<double>(dim, lengthscale), output_scale};
}

void KernelSpec::validate() const {
  if (lengthscales.empty()) throw InputError("kernel needs at least one lengthscale");
  for (double l : lengthscales) {
    if (!(l > 0.0) || !std::isfinite(l)) throw InputError("kernel lengthscales must be positive");
  }
  if (!(output_scale > 0.0) || output_scale > 1.0) {
    throw InputError("kernel output scale must lie in (0, 1]");
  }
}

double kernel_eval(const KernelSpec& spec, const Point& x, const Point& x_prime) {
  const auto dim = static_cast<Eigen::Index>(spec.lengthscales.size());
  if (x.size() != dim || x_prime.size() != dim) {
    throw InputError("kernel_eval: point dimension " + std::to_string(x.size()) + "/" +
                     std::to_string(x_prime.size()) + " does not match kernel dimension " +
                     std::to_string(dim));
  }
  double r2 = 0.0;
  for (Eigen::Index d = 0; d < dim; ++d) {
    const double scaled = (x[d] - x_prime[d]) / spec.lengthscales[static_cast<std::size_t>(d)];
    r2 += scaled * scaled;
  }
  switch (spec.family) {
    case KernelFamily::kSquaredExponential:
      return spec.output_scale * std::exp(-0.5 * r2);
    case KernelFamily::kMatern52: {
      const double sr = std::sqrt(5.0 * r2);
      return spec.output_scale * (1.0 + sr + 5.0 * r2 / 3.0) * std::exp(-sr);
    }
  }
  return 0.0;
}

}  // namespace dmabo
