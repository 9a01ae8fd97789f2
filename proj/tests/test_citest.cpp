#include <doctest.h>

#include <cmath>

#include "cit/citest.hpp"
#include "cit/parallel.hpp"
#include "cit/rng.hpp"
#include "cit/simbench.hpp"
#include "test_helpers.hpp"

using namespace cit;

namespace {

TestSpec m1_spec() {
  TestSpec spec;
  spec.x_cols = {"X"};
  spec.y_cols = {"Y"};
  spec.z_cols = {"Z"};
  return spec;
}

double rejection_rate(ModelId id, std::size_t n, std::size_t reps,
                      std::uint64_t seed, double alpha) {
  const ModelSelection sel = model_selection(id);
  TestSpec spec;
  spec.x_cols = sel.x_cols;
  spec.y_cols = sel.y_cols;
  spec.z_cols = sel.z_cols;
  spec.alpha = alpha;
  std::vector<int> rej(reps, 0);
  par::for_blocks(reps, 0, [&](std::size_t rep) {
    const Dataset data =
        gen_model(id, n, rng::derive_seed(seed, rng::kBenchRep, 0, rep));
    rej[rep] = run_test(data, spec, testutil::shared_cache()).reject ? 1 : 0;
  });
  int s = 0;
  for (int r : rej) s += r;
  return static_cast<double>(s) / static_cast<double>(reps);
}

}  // namespace

TEST_SUITE("citest") {

TEST_CASE("size under the null and power under alternatives") {
  const double size = rejection_rate(ModelId::M1, 100, 500, 11, 0.05);
  CHECK(size >= 0.02);
  CHECK(size <= 0.08);
  CHECK(rejection_rate(ModelId::M2, 100, 500, 12, 0.05) >= 0.99);
}

TEST_CASE("power grows with n") {
  const double p50 = rejection_rate(ModelId::M3, 50, 500, 13, 0.05);
  const double p100 = rejection_rate(ModelId::M3, 100, 500, 13, 0.05);
  CHECK(p100 > p50);
}

TEST_CASE("joint row permutation leaves the continuous test unchanged") {
  const Dataset data = gen_model(ModelId::M1, 80, 21);
  const TestResult base = run_test(data, m1_spec(), testutil::shared_cache());

  std::vector<Column> permuted(3);
  const std::size_t n = data.n;
  for (std::size_t c = 0; c < 3; ++c) {
    permuted[c].resize(n);
    for (std::size_t i = 0; i < n; ++i)
      permuted[c][i] = data.columns[c][(i * 31 + 7) % n];
  }
  const Dataset shuffled = make_dataset(data.names, permuted);
  const TestResult other = run_test(shuffled, m1_spec(), testutil::shared_cache());
  CHECK(std::abs(base.statistic.value - other.statistic.value) < 1e-12);
  CHECK(base.p_value == other.p_value);
}

TEST_CASE("monotone transforms of x and y do not move the test") {
  const Dataset data = gen_model(ModelId::M2, 100, 22);
  const TestResult base = run_test(data, m1_spec(), testutil::shared_cache());

  Column gx = data.col("X"), gy = data.col("Y");
  for (auto& v : gx) v = std::exp(v);
  for (auto& v : gy) v = std::atan(v);
  const Dataset transformed =
      make_dataset({"X", "Y", "Z"}, {gx, gy, data.col("Z")});
  const TestResult other =
      run_test(transformed, m1_spec(), testutil::shared_cache());
  CHECK(std::abs(base.statistic.value - other.statistic.value) < 1e-12);
  CHECK(base.p_value == other.p_value);
  CHECK(base.reject == other.reject);
}

TEST_CASE("unconditional test: size, power, symmetry") {
  const std::size_t n = 100, reps = 500;
  TestSpec spec;
  spec.x_cols = {"A"};
  spec.y_cols = {"B"};

  std::vector<int> rej_null(reps, 0), rej_dep(reps, 0);
  par::for_blocks(reps, 0, [&](std::size_t rep) {
    rng::Engine eng = rng::derive(505, 1, rep);
    Column a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = eng.uniform();
      b[i] = eng.uniform();
    }
    const Dataset indep = make_dataset({"A", "B"}, {a, b});
    rej_null[rep] =
        run_unconditional_test(indep, {"A"}, {"B"}, spec, testutil::shared_cache())
                .reject
            ? 1
            : 0;
    const Dataset dep = make_dataset({"A", "B"}, {a, a});
    rej_dep[rep] =
        run_unconditional_test(dep, {"A"}, {"B"}, spec, testutil::shared_cache())
                .reject
            ? 1
            : 0;
  });
  int s0 = 0, s1 = 0;
  for (std::size_t i = 0; i < reps; ++i) {
    s0 += rej_null[i];
    s1 += rej_dep[i];
  }
  const double size = static_cast<double>(s0) / reps;
  CHECK(std::abs(size - 0.05) <= 0.02);
  CHECK(static_cast<double>(s1) / reps >= 0.99);

  rng::Engine eng(77);
  Column a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = eng.normal();
    b[i] = eng.normal() + 0.3 * a[i];
  }
  const Dataset data = make_dataset({"A", "B"}, {a, b});
  const TestResult ab =
      run_unconditional_test(data, {"A"}, {"B"}, spec, testutil::shared_cache());
  const TestResult ba =
      run_unconditional_test(data, {"B"}, {"A"}, spec, testutil::shared_cache());
  CHECK(ab.statistic.value == ba.statistic.value);
  CHECK(ab.kind == StatKind::rho_unconditional);
  CHECK(ab.statistic.dims.r == 0);
}

TEST_CASE("unconditional test accepts multivariate blocks") {
  rng::Engine eng(808);
  const std::size_t n = 120;
  Column a(n), b(n), c(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = eng.normal();
    b[i] = eng.normal();
    c[i] = eng.normal();
  }
  const Dataset data = make_dataset({"A", "B", "C"}, {a, b, c});
  TestSpec spec;
  const TestResult res = run_unconditional_test(data, {"A", "B"}, {"C"}, spec,
                                                testutil::shared_cache());
  CHECK(res.kind == StatKind::rho_unconditional);
  CHECK(res.statistic.dims == Dims{2, 1, 0});
  CHECK(!res.statistic.normalized);
  REQUIRE(res.transform.u_stages.size() == 2);
  CHECK(res.transform.u_stages[0].h.empty());
  CHECK(res.transform.u_stages[1].cond_dim == 1);
}

TEST_CASE("discrete path: size control and reproducibility") {
  const std::size_t n = 200, reps = 500;
  TestSpec spec;
  spec.x_cols = {"X"};
  spec.y_cols = {"Y"};
  spec.z_cols = {"Z"};

  std::vector<int> rej(reps, 0);
  par::for_blocks(reps, 0, [&](std::size_t rep) {
    rng::Engine eng = rng::derive(606, 2, rep);
    Column x(n), y(n), z(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = eng.uniform() < 0.5 ? 1.0 : 0.0;
      y[i] = eng.uniform() < 0.5 ? 1.0 : 0.0;
      z[i] = eng.uniform() < 0.5 ? 1.0 : 0.0;
    }
    TestSpec local = spec;
    local.seed = rep;
    const Dataset data = make_dataset(
        {"X", "Y", "Z"}, {x, y, z},
        {ColumnKind::discrete, ColumnKind::discrete, ColumnKind::discrete});
    rej[rep] = run_test(data, local, testutil::shared_cache()).reject ? 1 : 0;
  });
  int s = 0;
  for (int r : rej) s += r;
  const double size = static_cast<double>(s) / reps;
  CHECK(std::abs(size - 0.05) <= 0.03);

  // Same seed, same answer; the PIT stream is part of the contract.
  rng::Engine eng(999);
  Column x(60), y(60), z(60);
  for (std::size_t i = 0; i < 60; ++i) {
    x[i] = eng.uniform() < 0.4 ? 1.0 : 0.0;
    y[i] = std::floor(3.0 * eng.uniform());
    z[i] = eng.uniform() < 0.5 ? 1.0 : 0.0;
  }
  const Dataset data = make_dataset(
      {"X", "Y", "Z"}, {x, y, z},
      {ColumnKind::discrete, ColumnKind::discrete, ColumnKind::discrete});
  TestSpec s1 = spec;
  s1.seed = 42;
  s1.min_n = 20;
  const TestResult a = run_test(data, s1, testutil::shared_cache());
  const TestResult b = run_test(data, s1, testutil::shared_cache());
  CHECK(a.statistic.value == b.statistic.value);
  CHECK(a.p_value == b.p_value);
  CHECK(a.kind == StatKind::rho_normalized);
  CHECK(a.transform.discrete);
  CHECK(a.seed_used == 42);
}

TEST_CASE("result invariants and provenance") {
  const Dataset data = gen_model(ModelId::M7, 100, 31);
  TestSpec spec;
  spec.x_cols = {"X"};
  spec.y_cols = {"Y"};
  spec.z_cols = {"Z1", "Z2"};
  spec.alpha = 0.07;
  const TestResult res = run_test(data, spec, testutil::shared_cache());
  CHECK(res.kind == StatKind::rho_multi_unnormalized);
  CHECK(res.statistic.dims == Dims{1, 1, 2});
  CHECK(res.reject == (res.p_value <= spec.alpha));
  CHECK(res.p_value > 0.0);
  CHECK(res.p_value <= 1.0);
  CHECK(res.critical_values.count(0.05) == 1);
  CHECK(res.critical_values.count(0.10) == 1);
  CHECK(res.critical_values.count(0.07) == 1);
  REQUIRE(res.transform.u_stages.size() == 1);
  CHECK(res.transform.u_stages[0].cond_dim == 2);
  CHECK(res.transform.u_stages[0].h.size() == 2);
  REQUIRE(res.transform.w_stages.size() == 2);
  CHECK(res.transform.w_stages[0].h.empty());
  CHECK(res.transform.w_stages[1].cond_dim == 1);
  CHECK(res.calibration_seed == kDefaultCalibrationSeed);
}

TEST_CASE("input validation") {
  const Dataset data = gen_model(ModelId::M1, 100, 41);
  NullCache& cache = testutil::shared_cache();

  TestSpec spec = m1_spec();
  spec.x_cols = {"Q"};
  CHECK_THROWS_AS(run_test(data, spec, cache), DataError);

  spec = m1_spec();
  spec.z_cols = {"X"};
  CHECK_THROWS_AS(run_test(data, spec, cache), DataError);

  spec = m1_spec();
  spec.alpha = 1.5;
  CHECK_THROWS_AS(run_test(data, spec, cache), DataError);

  const Dataset tiny = gen_model(ModelId::M1, 10, 42);
  CHECK_THROWS_AS(run_test(tiny, m1_spec(), cache), DataError);

  // Mixed kinds are rejected.
  const Dataset mixed = make_dataset(
      {"X", "Y", "Z"},
      {data.columns[0], data.columns[1], data.columns[2]},
      {ColumnKind::continuous, ColumnKind::continuous, ColumnKind::discrete});
  CHECK_THROWS_AS(run_test(mixed, m1_spec(), cache), DataError);

  // Multivariate discrete is not supported.
  Column d1(100), d2(100), d3(100), d4(100);
  rng::Engine eng(43);
  for (std::size_t i = 0; i < 100; ++i) {
    d1[i] = std::floor(2.0 * eng.uniform());
    d2[i] = std::floor(2.0 * eng.uniform());
    d3[i] = std::floor(2.0 * eng.uniform());
    d4[i] = std::floor(2.0 * eng.uniform());
  }
  const Dataset disc = make_dataset(
      {"A", "B", "C", "D"}, {d1, d2, d3, d4},
      {ColumnKind::discrete, ColumnKind::discrete, ColumnKind::discrete,
       ColumnKind::discrete});
  TestSpec multi;
  multi.x_cols = {"A", "B"};
  multi.y_cols = {"C"};
  multi.z_cols = {"D"};
  CHECK_THROWS_AS(run_test(disc, multi, cache), DataError);
}

}  // TEST_SUITE
