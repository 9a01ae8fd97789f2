#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "cit/nulldist.hpp"
#include "cit/parallel.hpp"
#include "cit/rng.hpp"
#include "cit/statistic.hpp"
#include "test_helpers.hpp"

using namespace cit;

TEST_SUITE("nulldist") {

TEST_CASE("single replicate equals a direct evaluation") {
  const NullTable t = simulate_null(10, {1, 1, 1}, 1, 5, StatKind::rho_normalized);
  REQUIRE(t.stats.size() == 1);

  rng::Engine eng = rng::derive(5, rng::kNullSim, 0);
  ColMatrix u, v, w;
  for (ColMatrix* m : {&u, &v, &w}) {
    Column c(10);
    for (auto& x : c) x = eng.uniform();
    m->push_col(std::move(c));
  }
  CHECK(t.stats[0] == k_c0 * vstat_conditional(u, v, w));
}

TEST_CASE("determinism across runs and worker counts") {
  const NullTable a = simulate_null(40, {1, 1, 1}, 64, 9, StatKind::rho_normalized);
  const NullTable b = simulate_null(40, {1, 1, 1}, 64, 9, StatKind::rho_normalized);
  CHECK(a.stats == b.stats);

  const int saved = par::default_threads();
  par::set_default_threads(1);
  const NullTable c = simulate_null(40, {1, 1, 1}, 64, 9, StatKind::rho_normalized);
  par::set_default_threads(4);
  const NullTable d = simulate_null(40, {1, 1, 1}, 64, 9, StatKind::rho_normalized);
  par::set_default_threads(saved);
  CHECK(a.stats == c.stats);
  CHECK(a.stats == d.stats);

  const NullTable e = simulate_null(40, {1, 1, 1}, 64, 10, StatKind::rho_normalized);
  CHECK(a.stats != e.stats);
}

TEST_CASE("critical value order statistics") {
  NullTable t;
  t.n = 10;
  t.dims = {1, 1, 1};
  t.B = 3;
  t.kind = StatKind::rho_normalized;
  t.stats = {0.1, 0.2, 0.3};
  CHECK(critical_value(t, 1.0 / 3.0) == doctest::Approx(0.2));
  CHECK(critical_value(t, 1e-9) == doctest::Approx(0.3));
  CHECK_THROWS_AS(critical_value(t, 0.0), DataError);
  CHECK_THROWS_AS(critical_value(t, 1.0), DataError);

  NullTable big;
  big.B = 1000;
  big.stats.resize(1000);
  for (std::size_t i = 0; i < 1000; ++i)
    big.stats[i] = static_cast<double>(i + 1) / 1000.0;
  CHECK(critical_value(big, 0.05) == doctest::Approx(0.950));
  CHECK(critical_value(big, 0.10) == doctest::Approx(0.900));
}

TEST_CASE("p-value conventions") {
  NullTable t;
  t.B = 3;
  t.stats = {0.1, 0.2, 0.3};
  CHECK(p_value(t, 0.5) == doctest::Approx(0.25));   // 1/(B+1)
  CHECK(p_value(t, 0.0) == doctest::Approx(1.0));    // below all
  CHECK(p_value(t, 0.25) == doctest::Approx(0.5));   // (1+1)/4

  double prev = 2.0;
  for (double obs = -0.5; obs < 0.6; obs += 0.01) {
    const double p = p_value(t, obs);
    CHECK(p <= prev);
    CHECK(p > 0.0);
    CHECK(p <= 1.0);
    prev = p;
  }
}

TEST_CASE("upper quantile is stable across seeds") {
  const NullTable a =
      simulate_null(100, {1, 1, 1}, 1000, 21, StatKind::rho_normalized);
  const NullTable b =
      simulate_null(100, {1, 1, 1}, 1000, 22, StatKind::rho_normalized);
  const double qa = critical_value(a, 0.05);
  const double qb = critical_value(b, 0.05);
  CHECK(std::abs(qa - qb) / qa < 0.10);
}

TEST_CASE("empirical size matches the nominal level") {
  const NullTable table =
      simulate_null(100, {1, 1, 1}, 1000, 31, StatKind::rho_normalized);
  const std::size_t R = 500;
  for (double alpha : {0.05, 0.10}) {
    const double crit = critical_value(table, alpha);
    std::size_t rejections = 0;
    for (std::size_t r = 0; r < R; ++r) {
      rng::Engine eng = rng::derive(77, rng::kNullSim, r + 100000);
      ColMatrix u, v, w;
      for (ColMatrix* m : {&u, &v, &w}) {
        Column c(100);
        for (auto& x : c) x = eng.uniform();
        m->push_col(std::move(c));
      }
      if (k_c0 * vstat_conditional(u, v, w) > crit) ++rejections;
    }
    const double size = static_cast<double>(rejections) / R;
    const double tol = 3.0 * std::sqrt(alpha * (1.0 - alpha) / R);
    CHECK(std::abs(size - alpha) < tol);
  }
}

TEST_CASE("budget guard") {
  SimBudget tiny{1e3};
  CHECK_THROWS_AS(
      simulate_null(100, {1, 1, 1}, 1000, 1, StatKind::rho_normalized, tiny),
      BudgetError);
  CHECK_THROWS_AS(simulate_null(1, {1, 1, 1}, 10, 1, StatKind::rho_normalized),
                  DataError);
  CHECK_THROWS_AS(simulate_null(10, {1, 1, 1}, 0, 1, StatKind::rho_normalized),
                  DataError);
  CHECK_THROWS_AS(simulate_null(10, {2, 1, 1}, 5, 1, StatKind::rho_normalized),
                  DataError);
  CHECK_THROWS_AS(
      simulate_null(10, {1, 1, 1}, 5, 1, StatKind::rho_unconditional),
      DataError);
}

TEST_CASE("save and load round trip exactly") {
  const auto dir = testutil::fresh_temp_dir("nulltab");
  const NullTable t =
      simulate_null(30, {2, 1, 1}, 50, 3, StatKind::rho_multi_unnormalized);
  const auto file = dir / "table.txt";
  save_null_table(t, file);
  const NullTable back = load_null_table(file);
  CHECK(back.n == t.n);
  CHECK(back.dims == t.dims);
  CHECK(back.B == t.B);
  CHECK(back.seed == t.seed);
  CHECK(back.kind == t.kind);
  CHECK(back.stats == t.stats);
  std::filesystem::remove_all(dir);
}

TEST_CASE("cache: cold build, warm load, corruption recovery") {
  const auto dir = testutil::fresh_temp_dir("cache");
  std::vector<std::string> log;
  NullCache cache(dir);
  cache.set_logger([&](const std::string& m) { log.push_back(m); });

  const NullTable a =
      cache.get_or_build(25, {1, 1, 0}, 40, 7, StatKind::rho_unconditional);
  REQUIRE(log.size() == 1);
  CHECK(log.back().find("built") != std::string::npos);
  const auto file =
      dir / null_table_filename(25, {1, 1, 0}, 40, 7, StatKind::rho_unconditional);
  CHECK(std::filesystem::exists(file));

  // Warm in-memory hit returns the same stats without logging a rebuild.
  const NullTable b =
      cache.get_or_build(25, {1, 1, 0}, 40, 7, StatKind::rho_unconditional);
  CHECK(b.stats == a.stats);
  CHECK(log.size() == 1);

  // A fresh cache object loads from disk byte-identically.
  NullCache cache2(dir);
  cache2.set_logger([&](const std::string& m) { log.push_back(m); });
  const NullTable c =
      cache2.get_or_build(25, {1, 1, 0}, 40, 7, StatKind::rho_unconditional);
  CHECK(c.stats == a.stats);
  CHECK(log.back().find("loaded") != std::string::npos);

  // Truncate the file: a third cache rebuilds it.
  {
    std::ofstream trunc(file, std::ios::trunc);
    trunc << "citnull 1\nn=25\n";
  }
  NullCache cache3(dir);
  cache3.set_logger([&](const std::string& m) { log.push_back(m); });
  const NullTable d =
      cache3.get_or_build(25, {1, 1, 0}, 40, 7, StatKind::rho_unconditional);
  CHECK(d.stats == a.stats);
  bool saw_rebuild = false;
  for (const auto& m : log)
    if (m.find("corrupt") != std::string::npos) saw_rebuild = true;
  CHECK(saw_rebuild);
  const NullTable reloaded = load_null_table(file);
  CHECK(reloaded.stats == a.stats);

  // Distinct seeds get distinct files.
  cache3.get_or_build(25, {1, 1, 0}, 40, 8, StatKind::rho_unconditional);
  CHECK(std::filesystem::exists(
      dir / null_table_filename(25, {1, 1, 0}, 40, 8, StatKind::rho_unconditional)));

  std::filesystem::remove_all(dir);
}

TEST_CASE("cache: unwritable directory degrades to memory") {
  const auto dir = testutil::fresh_temp_dir("cachefile");
  const auto blocker = dir / "blocker";
  {
    std::ofstream f(blocker);
    f << "x";
  }
  std::vector<std::string> log;
  NullCache cache(blocker / "sub");  // parent is a regular file
  cache.set_logger([&](const std::string& m) { log.push_back(m); });
  const NullTable t =
      cache.get_or_build(20, {1, 1, 0}, 10, 1, StatKind::rho_unconditional);
  CHECK(t.stats.size() == 10);
  bool warned = false;
  for (const auto& m : log)
    if (m.find("not writable") != std::string::npos) warned = true;
  CHECK(warned);
  std::filesystem::remove_all(dir);
}

}  // TEST_SUITE
