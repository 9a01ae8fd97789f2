#include "cit/simbench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>

#include "cit/parallel.hpp"
#include "cit/rng.hpp"

namespace cit {

ModelId model_from_string(const std::string& name) {
  if (name.size() >= 2 && (name[0] == 'M' || name[0] == 'm')) {
    const int k = std::atoi(name.c_str() + 1);
    if (k >= 1 && k <= 18) return static_cast<ModelId>(k);
  }
  throw DataError("unknown model id: " + name);
}

std::string to_string(ModelId id) {
  return "M" + std::to_string(static_cast<int>(id));
}

ModelSelection model_selection(ModelId id) {
  const int k = static_cast<int>(id);
  if (k <= 6) return {{"X"}, {"Y"}, {"Z"}};
  if (k <= 12) return {{"X"}, {"Y"}, {"Z1", "Z2"}};
  return {{"X1", "X2"}, {"Y1", "Y2"}, {"Z1", "Z2"}};
}

bool model_is_null(ModelId id) {
  return id == ModelId::M1 || id == ModelId::M7 || id == ModelId::M13;
}

Dataset gen_model(ModelId id, std::size_t n, std::uint64_t seed) {
  if (n < 2) throw DataError("gen_model: n >= 2 required");
  const int k = static_cast<int>(id);
  rng::Engine eng = rng::derive(seed, rng::kModel, static_cast<std::uint64_t>(k));

  if (k <= 6) {
    Column x(n), y(n), z(n);
    for (std::size_t i = 0; i < n; ++i) {
      const bool heavy = k >= 4;
      const double x1 = heavy ? eng.cauchy() : eng.normal();
      const double x2 = heavy ? eng.cauchy() : eng.normal();
      const double zi = eng.normal();
      z[i] = zi;
      switch (k) {
        case 1:
          x[i] = x1 + zi;
          y[i] = x2 + zi;
          break;
        case 2:
          x[i] = x1 + zi;
          y[i] = x1 * x1 + zi;
          break;
        case 3:
          x[i] = x1 + zi;
          y[i] = 0.5 * std::sin(M_PI * x1) + zi;
          break;
        case 4:
          x[i] = x1 + zi;
          y[i] = x1 + x2 + zi;
          break;
        case 5:
          x[i] = std::sqrt(std::abs(x1 * zi)) + zi;
          y[i] = 0.25 * x1 * x1 * x2 * x2 + x2 + zi;
          break;
        case 6:
          x[i] = std::log(std::abs(x1 * zi) + 1.0) + zi;
          y[i] = 0.5 * (x1 * x1 * zi) + x2 + zi;
          break;
      }
    }
    return make_dataset({"X", "Y", "Z"}, {std::move(x), std::move(y), std::move(z)});
  }

  if (k <= 12) {
    Column x(n), y(n), z1(n), z2(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double x1 = eng.normal();
      const double x2 = eng.normal();
      const double a = eng.normal();
      const double b = eng.normal();
      z1[i] = a;
      z2[i] = b;
      const double zs = a + b;
      switch (k) {
        case 7:
          x[i] = x1 + zs;
          y[i] = x2 + zs;
          break;
        case 8:
          x[i] = x1 * x1 + zs;
          y[i] = std::log(x1 + 10.0) + zs;
          break;
        case 9:
          x[i] = std::tanh(x1) + zs;
          y[i] = std::log(x1 * x1 + 10.0) + zs;
          break;
        case 10:
          x[i] = x1 * x1 + zs;
          y[i] = std::log(x1 * a + 10.0) + zs;
          break;
        case 11:
          x[i] = x1 + zs;
          y[i] = std::sin(x1 * a) + zs;
          break;
        case 12:
          x[i] = std::log(x1 * a + 10.0) + zs;
          y[i] = std::exp(x1 * b) + zs;
          break;
      }
    }
    return make_dataset({"X", "Y", "Z1", "Z2"},
                        {std::move(x), std::move(y), std::move(z1), std::move(z2)});
  }

  Column x1c(n), x2c(n), y1c(n), y2c(n), z1(n), z2(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x1 = eng.normal();
    const double x2 = eng.normal();
    const double y2 = eng.normal();
    const double a = eng.normal();
    const double b = eng.normal();
    x2c[i] = x2;
    y2c[i] = y2;
    z1[i] = a;
    z2[i] = b;
    const double zs = a + b;
    switch (k) {
      case 13:
        x1c[i] = x1 + a;
        y1c[i] = a + b;
        break;
      case 14:
        x1c[i] = std::log(x1 * a + 100.0) + zs;
        y1c[i] = std::exp(x1 * a) + zs;
        break;
      case 15:
        x1c[i] = std::log(x1 * x1 + 100.0) + zs;
        y1c[i] = 0.1 * x1 * x1 * x1 + zs;
        break;
      case 16:
        x1c[i] = std::log(x1 * a + 100.0) + zs;
        y1c[i] = 0.5 * x1 * x1 * x1 * a * a * a + zs;
        break;
      case 17:
        x1c[i] = 0.1 * std::exp(x1) + zs;
        y1c[i] = std::sin(x1) + std::abs(x1) + zs;
        break;
      case 18:
        x1c[i] = std::tanh(x1) + zs;
        y1c[i] = 0.5 * std::log(x1 * x1 + 100.0) + 0.5 * x2 + zs;
        break;
    }
  }
  return make_dataset({"X1", "X2", "Y1", "Y2", "Z1", "Z2"},
                      {std::move(x1c), std::move(x2c), std::move(y1c),
                       std::move(y2c), std::move(z1), std::move(z2)});
}

namespace {

void warm_cache(ModelId id, std::size_t n, NullCache& cache,
                const BenchOptions& options) {
  const int k = static_cast<int>(id);
  if (k <= 6)
    cache.get_or_build(n, {1, 1, 1}, options.reps_B, options.calibration_seed,
                       StatKind::rho_normalized, options.budget);
  else if (k <= 12)
    cache.get_or_build(n, {1, 1, 2}, options.reps_B, options.calibration_seed,
                       StatKind::rho_multi_unnormalized, options.budget);
  else
    cache.get_or_build(n, {2, 2, 2}, options.reps_B, options.calibration_seed,
                       StatKind::rho_multi_unnormalized, options.budget);
}

TestSpec bench_test_spec(ModelId id, const BenchOptions& options,
                         double scale_c) {
  const ModelSelection sel = model_selection(id);
  TestSpec spec;
  spec.x_cols = sel.x_cols;
  spec.y_cols = sel.y_cols;
  spec.z_cols = sel.z_cols;
  spec.kernel = options.kernel;
  spec.bandwidth = options.bandwidth;
  spec.bandwidth.scale_c = scale_c;
  spec.reps_B = options.reps_B;
  spec.calibration_seed = options.calibration_seed;
  spec.budget = options.budget;
  return spec;
}

// p-values of the model's test over reps replicate datasets.
std::vector<double> replicate_pvalues(ModelId id, std::size_t n,
                                      std::size_t reps, std::uint64_t seed,
                                      double scale_c, NullCache& cache,
                                      const BenchOptions& options) {
  warm_cache(id, n, cache, options);
  const TestSpec spec = bench_test_spec(id, options, scale_c);
  std::vector<double> pvals(reps);
  par::for_blocks(reps, par::effective_threads(0), [&](std::size_t rep) {
    const std::uint64_t rep_seed = rng::derive_seed(
        seed, rng::kBenchRep, static_cast<std::uint64_t>(static_cast<int>(id)),
        rep);
    const Dataset data = gen_model(id, n, rep_seed);
    pvals[rep] = run_test(data, spec, cache).p_value;
  });
  return pvals;
}

}  // namespace

BenchReport size_power_run(const std::vector<ModelId>& ids, std::size_t n,
                           const std::vector<double>& alphas, std::size_t reps,
                           std::uint64_t seed, NullCache& cache,
                           const BenchOptions& options) {
  if (reps < 1) throw DataError("size_power_run: reps >= 1 required");
  const auto start = std::chrono::steady_clock::now();
  BenchReport report;
  report.reps_B = options.reps_B;
  report.seed = seed;
  for (ModelId id : ids) {
    const auto pvals = replicate_pvalues(id, n, reps, seed,
                                         options.bandwidth.scale_c, cache, options);
    for (double alpha : alphas) {
      std::size_t rejections = 0;
      for (double p : pvals)
        if (p <= alpha) ++rejections;
      report.rows.push_back({to_string(id), n, alpha,
                             options.bandwidth.scale_c, reps,
                             static_cast<double>(rejections) /
                                 static_cast<double>(reps)});
    }
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

BenchReport bandwidth_sweep(const std::vector<ModelId>& ids, std::size_t n,
                            const std::vector<double>& c_values,
                            std::size_t reps, std::uint64_t seed,
                            NullCache& cache, const BenchOptions& options) {
  if (reps < 1) throw DataError("bandwidth_sweep: reps >= 1 required");
  for (double c : c_values)
    if (!(c > 0.0)) throw DataError("bandwidth_sweep: c values must be positive");
  const auto start = std::chrono::steady_clock::now();
  BenchReport report;
  report.reps_B = options.reps_B;
  report.seed = seed;
  for (ModelId id : ids) {
    for (double c : c_values) {
      const auto pvals = replicate_pvalues(id, n, reps, seed, c, cache, options);
      std::size_t rejections = 0;
      for (double p : pvals)
        if (p <= 0.05) ++rejections;
      report.rows.push_back({to_string(id), n, 0.05, c, reps,
                             static_cast<double>(rejections) /
                                 static_cast<double>(reps)});
    }
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

std::pair<Dag, Dataset> random_dag_instance(std::size_t p, double edge_prob,
                                            std::size_t n, NoiseKind noise,
                                            std::uint64_t seed) {
  if (p < 2) throw DataError("random_dag_instance: p >= 2 required");
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0))
    throw DataError("random_dag_instance: edge_prob outside [0,1]");

  Dag dag;
  dag.node_count = p;
  dag.coef.assign(p, std::vector<double>(p, 0.0));
  rng::Engine edges = rng::derive(seed, rng::kDagEdges);
  for (std::size_t j = 1; j < p; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      if (edges.uniform() < edge_prob) dag.coef[j][k] = edges.uniform(0.1, 1.0);
    }
  }

  rng::Engine noise_eng = rng::derive(seed, rng::kDagNoise);
  std::vector<Column> cols(p, Column(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      double v = noise == NoiseKind::normal ? noise_eng.normal()
                                            : noise_eng.uniform();
      for (std::size_t k = 0; k < j; ++k) v += dag.coef[j][k] * cols[k][i];
      cols[j][i] = v;
    }
  }

  std::vector<std::string> names;
  for (std::size_t j = 0; j < p; ++j) names.push_back("X" + std::to_string(j + 1));
  return {std::move(dag), make_dataset(std::move(names), std::move(cols))};
}

DagStudyReport dag_recovery_study(std::size_t p, double edge_prob,
                                  std::size_t n, std::size_t reps,
                                  NoiseKind noise, double alpha,
                                  std::uint64_t seed, NullCache& cache,
                                  const BenchOptions& options) {
  if (reps < 1) throw DataError("dag_recovery_study: reps >= 1 required");

  // Tables for every conditioning-set size the skeleton search can reach.
  cache.get_or_build(n, {1, 1, 0}, options.reps_B, options.calibration_seed,
                     StatKind::rho_unconditional, options.budget);
  cache.get_or_build(n, {1, 1, 1}, options.reps_B, options.calibration_seed,
                     StatKind::rho_normalized, options.budget);
  for (std::size_t r = 2; r + 2 <= p; ++r)
    cache.get_or_build(n, {1, 1, r}, options.reps_B, options.calibration_seed,
                       StatKind::rho_multi_unnormalized, options.budget);

  TestSpec base;
  base.kernel = options.kernel;
  base.bandwidth = options.bandwidth;
  base.reps_B = options.reps_B;
  base.calibration_seed = options.calibration_seed;
  base.budget = options.budget;
  base.alpha = alpha;

  std::vector<double> tprs(reps), fprs(reps);
  par::for_blocks(reps, par::effective_threads(0), [&](std::size_t rep) {
    const std::uint64_t rep_seed = rng::derive_seed(seed, rng::kBenchRep, rep);
    auto [truth, data] = random_dag_instance(p, edge_prob, n, noise, rep_seed);
    const CiOracle oracle = make_rho_oracle(data, base, cache);
    const Cpdag estimate = pc(data, alpha, p >= 2 ? p - 2 : 0, oracle);
    const auto [tpr, fpr] = tpr_fpr(estimate, truth);
    tprs[rep] = tpr;
    fprs[rep] = fpr;
  });

  DagStudyReport report;
  report.nodes = p;
  report.edge_prob = edge_prob;
  report.n = n;
  report.reps = reps;
  report.alpha = alpha;
  report.seed = seed;
  for (double t : tprs) report.mean_tpr += t;
  for (double f : fprs) report.mean_fpr += f;
  report.mean_tpr /= static_cast<double>(reps);
  report.mean_fpr /= static_cast<double>(reps);
  return report;
}

std::vector<double> null_distribution_study(std::size_t n, std::size_t reps,
                                            IngredientDist ingredient,
                                            StudyStat stat, std::uint64_t seed,
                                            const BenchOptions& options) {
  if (reps < 1) throw DataError("null_distribution_study: reps >= 1 required");
  std::vector<double> out(reps);
  par::for_blocks(reps, par::effective_threads(0), [&](std::size_t rep) {
    rng::Engine eng = rng::derive(seed, rng::kStudy, rep);
    auto draw = [&]() {
      switch (ingredient) {
        case IngredientDist::normal: return eng.normal();
        case IngredientDist::uniform: return eng.uniform();
        case IngredientDist::exponential: return eng.exponential();
      }
      return 0.0;
    };
    Column x(n), y(n), z(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double zi = draw();
      x[i] = zi + draw();
      y[i] = zi + draw();
      z[i] = zi;
    }
    const Dataset data =
        make_dataset({"X", "Y", "Z"}, {std::move(x), std::move(y), std::move(z)});
    const TransformedSample ts =
        transform_continuous(data, {0}, {1}, {2}, options.bandwidth,
                             options.kernel);
    const double value =
        stat == StudyStat::rho ? rho_hat(ts).value : rho0_hat(ts).value;
    out[rep] = static_cast<double>(n) * value;
  });
  return out;
}

}  // namespace cit
