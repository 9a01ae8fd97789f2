#pragma once

#include <cstddef>
#include <optional>
#include <string>

namespace cit {

enum class KernelFamily { gaussian, epanechnikov };

KernelFamily kernel_family_from_string(const std::string& name);
std::string to_string(KernelFamily family);

// Second-order symmetric kernels only; order_m is kept as an extension point.
struct KernelSpec {
  KernelFamily family = KernelFamily::gaussian;
  int order_m = 2;
};

// K(u). Nonnegative, symmetric, integrates to one; zero outside [-1,1] for
// the epanechnikov family.
double kernel_weight(const KernelSpec& spec, double u);

// Multiplier on the rule-of-thumb bandwidth, or an explicit override.
struct BandwidthPolicy {
  double scale_c = 1.0;
  std::optional<double> explicit_h{};
};

// scale_c * 1.06 * sd * n^(-1/(4+cond_dim)), or explicit_h when set.
double rule_of_thumb_bandwidth(double column_sd, std::size_t n,
                               std::size_t cond_dim,
                               const BandwidthPolicy& policy);

}  // namespace cit
