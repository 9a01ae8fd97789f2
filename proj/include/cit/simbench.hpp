#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cit/causal.hpp"
#include "cit/citest.hpp"
#include "cit/dataset.hpp"

namespace cit {

// Simulation models M1-M18. M1-M6 use a scalar conditioning variable
// (M4-M6 with heavy-tailed t1 ingredients), M7-M12 a bivariate z, and
// M13-M18 bivariate x, y and z.
enum class ModelId {
  M1 = 1, M2, M3, M4, M5, M6, M7, M8, M9, M10, M11, M12,
  M13, M14, M15, M16, M17, M18,
};

ModelId model_from_string(const std::string& name);
std::string to_string(ModelId id);

// Column selections for testing the model's hypothesis.
struct ModelSelection {
  std::vector<std::string> x_cols, y_cols, z_cols;
};
ModelSelection model_selection(ModelId id);

// True under the null (size models): M1, M7, M13.
bool model_is_null(ModelId id);

Dataset gen_model(ModelId id, std::size_t n, std::uint64_t seed);

struct BenchRow {
  std::string model;
  std::size_t n = 0;
  double alpha = 0.05;
  double scale_c = 1.0;
  std::size_t reps = 0;
  double frequency = 0.0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::size_t reps_B = 0;
  std::uint64_t seed = 0;
  double wall_seconds = 0.0;  // informational; excluded from deterministic output
};

struct BenchOptions {
  KernelSpec kernel{};
  BandwidthPolicy bandwidth{};
  std::size_t reps_B = 1000;
  std::uint64_t calibration_seed = kDefaultCalibrationSeed;
  SimBudget budget{};
};

// Empirical rejection frequency of run_test per (model, alpha) over
// independent replicate datasets. Deterministic given the seed, for any
// worker count.
BenchReport size_power_run(const std::vector<ModelId>& ids, std::size_t n,
                           const std::vector<double>& alphas, std::size_t reps,
                           std::uint64_t seed, NullCache& cache,
                           const BenchOptions& options = {});

// Power per (model, c) with the bandwidth scaled to c * h0. c = 1 rows
// reproduce size_power_run exactly for the same seed.
BenchReport bandwidth_sweep(const std::vector<ModelId>& ids, std::size_t n,
                            const std::vector<double>& c_values,
                            std::size_t reps, std::uint64_t seed,
                            NullCache& cache, const BenchOptions& options = {});

enum class NoiseKind { normal, uniform };

// Random upper-triangular DAG: edges Bernoulli(edge_prob), weights
// U(0.1, 1), X_j = sum_{k<j} A_jk X_k + eps_j.
std::pair<Dag, Dataset> random_dag_instance(std::size_t p, double edge_prob,
                                            std::size_t n, NoiseKind noise,
                                            std::uint64_t seed);

struct DagStudyReport {
  std::size_t nodes = 0;
  double edge_prob = 0.0;
  std::size_t n = 0;
  std::size_t reps = 0;
  double alpha = 0.05;
  double mean_tpr = 0.0;
  double mean_fpr = 0.0;
  std::uint64_t seed = 0;
};

// PC recovery study on random DAG instances; skeleton-level TPR/FPR means.
DagStudyReport dag_recovery_study(std::size_t p, double edge_prob,
                                  std::size_t n, std::size_t reps,
                                  NoiseKind noise, double alpha,
                                  std::uint64_t seed, NullCache& cache,
                                  const BenchOptions& options = {});

enum class IngredientDist { normal, uniform, exponential };
enum class StudyStat { rho, rho0 };

// Full-pipeline null statistics (times n) on conditionally independent
// X = Z + e1, Y = Z + e2 data built from the chosen ingredient
// distribution; used for comparison against simulate_null references.
std::vector<double> null_distribution_study(std::size_t n, std::size_t reps,
                                            IngredientDist ingredient,
                                            StudyStat stat, std::uint64_t seed,
                                            const BenchOptions& options = {});

}  // namespace cit
