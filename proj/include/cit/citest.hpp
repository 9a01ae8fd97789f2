#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cit/dataset.hpp"
#include "cit/kernels.hpp"
#include "cit/nulldist.hpp"
#include "cit/statistic.hpp"
#include "cit/transforms.hpp"

namespace cit {

// Null tables are keyed by their own seed so every test run with default
// settings shares the same cached calibration.
inline constexpr std::uint64_t kDefaultCalibrationSeed = 20200831;

struct TestSpec {
  std::vector<std::string> x_cols, y_cols, z_cols;
  double alpha = 0.05;
  KernelSpec kernel{};
  BandwidthPolicy bandwidth{};
  std::size_t reps_B = 1000;
  std::uint64_t seed = 0;  // governs randomized discrete transforms
  std::uint64_t calibration_seed = kDefaultCalibrationSeed;
  std::size_t min_n = 20;
  SimBudget budget{};
};

struct TestResult {
  StatisticValue statistic{};
  double p_value = 1.0;
  std::map<double, double> critical_values;
  bool reject = false;
  double alpha = 0.05;
  std::size_t n = 0;
  StatKind kind = StatKind::rho_normalized;
  std::size_t reps_B = 0;
  TransformMeta transform;
  std::uint64_t seed_used = 0;
  std::uint64_t calibration_seed = 0;
};

// Validation plus transform dispatch shared by run_test and the transform
// CLI: continuous selections go through the kernel chains, all-discrete
// univariate selections through the randomized PIT. Mixed kinds are
// rejected.
TransformedSample run_transform(const Dataset& data, const TestSpec& spec);

// Full conditional independence test: transform, statistic, simulated-null
// calibration, decision. Falls back to the unconditional variant when
// z_cols is empty. Continuous selections use the kernel transform chain;
// all-discrete univariate selections use the randomized PIT.
TestResult run_test(const Dataset& data, const TestSpec& spec, NullCache& cache);

// Pairwise (depth-zero) variant: W factor removed from the statistic.
TestResult run_unconditional_test(const Dataset& data,
                                  const std::vector<std::string>& x_cols,
                                  const std::vector<std::string>& y_cols,
                                  const TestSpec& spec, NullCache& cache);

}  // namespace cit
