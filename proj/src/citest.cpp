#include "cit/citest.hpp"

#include <algorithm>

namespace cit {

namespace {

void check_selection(const Dataset& data, const TestSpec& spec,
                     bool allow_empty_z) {
  if (spec.x_cols.empty() || spec.y_cols.empty())
    throw DataError("test: x and y selections must be nonempty");
  if (!allow_empty_z && spec.z_cols.empty())
    throw DataError("test: z selection must be nonempty");
  std::vector<std::string> all = spec.x_cols;
  all.insert(all.end(), spec.y_cols.begin(), spec.y_cols.end());
  all.insert(all.end(), spec.z_cols.begin(), spec.z_cols.end());
  for (const auto& name : all) {
    data.col_index(name);
    if (std::count(all.begin(), all.end(), name) != 1)
      throw DataError("test: column selected twice: " + name);
  }
  if (!(spec.alpha > 0.0 && spec.alpha < 1.0))
    throw DataError("test: alpha outside (0,1)");
  if (data.n < spec.min_n)
    throw DataError("test: insufficient sample size n=" + std::to_string(data.n) +
                    " (floor " + std::to_string(spec.min_n) + ")");
}

// All selected columns must share one kind; returns true for discrete.
bool selection_is_discrete(const Dataset& data, const TestSpec& spec) {
  bool any_discrete = false, any_continuous = false;
  auto scan = [&](const std::vector<std::string>& sel) {
    for (const auto& name : sel) {
      if (data.kind(name) == ColumnKind::discrete)
        any_discrete = true;
      else
        any_continuous = true;
    }
  };
  scan(spec.x_cols);
  scan(spec.y_cols);
  scan(spec.z_cols);
  if (any_discrete && any_continuous)
    throw DataError(
        "test: mixed continuous/discrete selections are not supported");
  return any_discrete;
}

TestResult finish(const Dataset& data, const TestSpec& spec, NullCache& cache,
                  TransformedSample ts, StatisticValue stat, StatKind kind) {
  Dims table_dims = stat.dims;
  const NullTable table = cache.get_or_build(
      data.n, table_dims, spec.reps_B, spec.calibration_seed, kind, spec.budget);

  TestResult result;
  result.statistic = stat;
  result.p_value = p_value(table, stat.value);
  for (double a : {0.05, 0.10, spec.alpha})
    result.critical_values[a] = critical_value(table, a);
  result.reject = result.p_value <= spec.alpha;
  result.alpha = spec.alpha;
  result.n = data.n;
  result.kind = kind;
  result.reps_B = spec.reps_B;
  result.transform = std::move(ts.meta);
  result.seed_used = spec.seed;
  result.calibration_seed = spec.calibration_seed;
  return result;
}

}  // namespace

TransformedSample run_transform(const Dataset& data, const TestSpec& spec) {
  const bool unconditional = spec.z_cols.empty();
  check_selection(data, spec, unconditional);

  if (selection_is_discrete(data, spec)) {
    if (spec.x_cols.size() != 1 || spec.y_cols.size() != 1 ||
        spec.z_cols.size() > 1)
      throw DataError("test: discrete path supports univariate x, y, z only");
    std::optional<std::size_t> z_idx;
    if (!unconditional) z_idx = data.col_index(spec.z_cols[0]);
    return transform_discrete(data, data.col_index(spec.x_cols[0]),
                              data.col_index(spec.y_cols[0]), z_idx, spec.seed);
  }
  return transform_continuous(data, data.indices(spec.x_cols),
                              data.indices(spec.y_cols),
                              data.indices(spec.z_cols), spec.bandwidth,
                              spec.kernel);
}

TestResult run_test(const Dataset& data, const TestSpec& spec,
                    NullCache& cache) {
  if (spec.z_cols.empty())
    return run_unconditional_test(data, spec.x_cols, spec.y_cols, spec, cache);

  TransformedSample ts = run_transform(data, spec);
  if (ts.dims() == Dims{1, 1, 1}) {
    StatisticValue stat = rho_hat(ts);
    return finish(data, spec, cache, std::move(ts), stat,
                  StatKind::rho_normalized);
  }
  StatisticValue stat = rho_hat_multi(ts);
  return finish(data, spec, cache, std::move(ts), stat,
                StatKind::rho_multi_unnormalized);
}

TestResult run_unconditional_test(const Dataset& data,
                                  const std::vector<std::string>& x_cols,
                                  const std::vector<std::string>& y_cols,
                                  const TestSpec& spec, NullCache& cache) {
  TestSpec local = spec;
  local.x_cols = x_cols;
  local.y_cols = y_cols;
  local.z_cols.clear();
  TransformedSample ts = run_transform(data, local);
  StatisticValue stat = rho_hat_unconditional(ts.u, ts.v);
  return finish(data, local, cache, std::move(ts), stat,
                StatKind::rho_unconditional);
}

}  // namespace cit
