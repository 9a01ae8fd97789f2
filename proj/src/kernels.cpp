#include "cit/kernels.hpp"

#include <cmath>

#include "cit/common.hpp"

namespace cit {

KernelFamily kernel_family_from_string(const std::string& name) {
  if (name == "gaussian") return KernelFamily::gaussian;
  if (name == "epanechnikov") return KernelFamily::epanechnikov;
  throw DataError("unknown kernel family: " + name);
}

std::string to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::gaussian: return "gaussian";
    case KernelFamily::epanechnikov: return "epanechnikov";
  }
  return "?";
}

double kernel_weight(const KernelSpec& spec, double u) {
  switch (spec.family) {
    case KernelFamily::gaussian:
      return std::exp(-0.5 * u * u) / std::sqrt(2.0 * M_PI);
    case KernelFamily::epanechnikov:
      return std::abs(u) <= 1.0 ? 0.75 * (1.0 - u * u) : 0.0;
  }
  return 0.0;
}

double rule_of_thumb_bandwidth(double column_sd, std::size_t n,
                               std::size_t cond_dim,
                               const BandwidthPolicy& policy) {
  if (policy.explicit_h) {
    if (*policy.explicit_h <= 0.0)
      throw DataError("explicit bandwidth must be positive");
    return *policy.explicit_h;
  }
  if (policy.scale_c <= 0.0) throw DataError("bandwidth scale must be positive");
  if (n < 2) throw DataError("bandwidth rule needs n >= 2");
  if (cond_dim < 1) throw DataError("bandwidth rule needs cond_dim >= 1");
  if (!(column_sd > 0.0)) throw DataError("constant column: sd is zero");
  const double expo = -1.0 / (4.0 + static_cast<double>(cond_dim));
  return policy.scale_c * 1.06 * column_sd *
         std::pow(static_cast<double>(n), expo);
}

}  // namespace cit
