#include "cit/nulldist.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <unistd.h>

#include "cit/parallel.hpp"
#include "cit/rng.hpp"
#include "cit/statistic.hpp"

namespace cit {

std::string to_string(StatKind kind) {
  switch (kind) {
    case StatKind::rho_normalized: return "rho_normalized";
    case StatKind::rho_multi_unnormalized: return "rho_multi_unnormalized";
    case StatKind::rho_unconditional: return "rho_unconditional";
  }
  return "?";
}

StatKind stat_kind_from_string(const std::string& name) {
  if (name == "rho_normalized") return StatKind::rho_normalized;
  if (name == "rho_multi_unnormalized") return StatKind::rho_multi_unnormalized;
  if (name == "rho_unconditional") return StatKind::rho_unconditional;
  throw DataError("unknown statistic kind: " + name);
}

namespace {

void check_kind_dims(StatKind kind, Dims dims) {
  switch (kind) {
    case StatKind::rho_normalized:
      if (!(dims == Dims{1, 1, 1}))
        throw DataError("rho_normalized requires dims (1,1,1)");
      break;
    case StatKind::rho_multi_unnormalized:
      if (dims.p < 1 || dims.q < 1 || dims.r < 1)
        throw DataError("rho_multi_unnormalized requires p,q,r >= 1");
      break;
    case StatKind::rho_unconditional:
      if (dims.p < 1 || dims.q < 1 || dims.r != 0)
        throw DataError("rho_unconditional requires p,q >= 1 and r = 0");
      break;
  }
}

ColMatrix draw_uniform_block(rng::Engine& eng, std::size_t n, std::size_t d) {
  ColMatrix m;
  for (std::size_t k = 0; k < d; ++k) {
    Column c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = eng.uniform();
    m.push_col(std::move(c));
  }
  return m;
}

double null_replicate(std::size_t n, Dims dims, StatKind kind,
                      rng::Engine eng) {
  const ColMatrix u = draw_uniform_block(eng, n, dims.p);
  const ColMatrix v = draw_uniform_block(eng, n, dims.q);
  switch (kind) {
    case StatKind::rho_normalized: {
      const ColMatrix w = draw_uniform_block(eng, n, dims.r);
      return k_c0 * vstat_conditional(u, v, w);
    }
    case StatKind::rho_multi_unnormalized: {
      const ColMatrix w = draw_uniform_block(eng, n, dims.r);
      return vstat_conditional(u, v, w);
    }
    case StatKind::rho_unconditional:
      return vstat_unconditional(u, v);
  }
  throw DataError("unreachable statistic kind");
}

}  // namespace

NullTable simulate_null(std::size_t n, Dims dims, std::size_t B,
                        std::uint64_t seed, StatKind kind,
                        const SimBudget& budget) {
  if (n < 2) throw DataError("simulate_null: n >= 2 required");
  if (B < 1) throw DataError("simulate_null: B >= 1 required");
  check_kind_dims(kind, dims);

  const double work = static_cast<double>(B) * static_cast<double>(n) *
                      static_cast<double>(n) *
                      static_cast<double>(dims.p + dims.q + dims.r);
  if (work > budget.max_work) {
    std::ostringstream msg;
    msg << "simulate_null: estimated work " << work
        << " exceeds the budget ceiling " << budget.max_work
        << "; lower n or B, or raise the ceiling";
    throw BudgetError(msg.str());
  }

  NullTable table;
  table.n = n;
  table.dims = dims;
  table.B = B;
  table.seed = seed;
  table.kind = kind;
  table.stats.resize(B);

  par::for_blocks(B, par::effective_threads(0), [&](std::size_t b) {
    table.stats[b] =
        null_replicate(n, dims, kind, rng::derive(seed, rng::kNullSim, b));
  });
  std::sort(table.stats.begin(), table.stats.end());
  return table;
}

double critical_value(const NullTable& table, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DataError("critical_value: alpha outside (0,1)");
  if (table.stats.empty()) throw DataError("critical_value: empty table");
  const double bd = static_cast<double>(table.stats.size());
  auto k = static_cast<std::size_t>(std::ceil(bd * (1.0 - alpha) - 1e-9));
  k = std::clamp<std::size_t>(k, 1, table.stats.size());
  return table.stats[k - 1];
}

double p_value(const NullTable& table, double observed) {
  if (table.stats.empty()) throw DataError("p_value: empty table");
  const auto it =
      std::lower_bound(table.stats.begin(), table.stats.end(), observed);
  const auto count = static_cast<double>(table.stats.end() - it);
  return (1.0 + count) / (static_cast<double>(table.stats.size()) + 1.0);
}

std::string null_table_filename(std::size_t n, Dims dims, std::size_t B,
                                std::uint64_t seed, StatKind kind) {
  std::ostringstream name;
  name << "null_" << to_string(kind) << "_n" << n << "_p" << dims.p << "_q"
       << dims.q << "_r" << dims.r << "_B" << B << "_seed" << seed << ".txt";
  return name.str();
}

void save_null_table(const NullTable& table, const std::filesystem::path& file) {
  const std::filesystem::path tmp =
      file.string() + ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << "citnull 1\n";
    out << "n=" << table.n << "\n";
    out << "p=" << table.dims.p << "\n";
    out << "q=" << table.dims.q << "\n";
    out << "r=" << table.dims.r << "\n";
    out << "B=" << table.B << "\n";
    out << "seed=" << table.seed << "\n";
    out << "kind=" << to_string(table.kind) << "\n";
    out << "stats=" << table.stats.size() << "\n";
    char buf[40];
    for (double v : table.stats) {
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out << buf << "\n";
    }
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, file, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot replace " + file.string());
  }
}

namespace {

std::uint64_t parse_field(std::istream& in, const std::string& key) {
  std::string line;
  if (!std::getline(in, line) || line.rfind(key + "=", 0) != 0)
    throw IoError("null table: missing field " + key);
  return std::strtoull(line.c_str() + key.size() + 1, nullptr, 10);
}

}  // namespace

NullTable load_null_table(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open " + file.string());
  std::string header;
  if (!std::getline(in, header) || header != "citnull 1")
    throw IoError("null table: bad header in " + file.string());

  NullTable t;
  t.n = parse_field(in, "n");
  t.dims.p = parse_field(in, "p");
  t.dims.q = parse_field(in, "q");
  t.dims.r = parse_field(in, "r");
  t.B = parse_field(in, "B");
  t.seed = parse_field(in, "seed");

  std::string line;
  if (!std::getline(in, line) || line.rfind("kind=", 0) != 0)
    throw IoError("null table: missing field kind");
  t.kind = stat_kind_from_string(line.substr(5));

  const std::uint64_t count = parse_field(in, "stats");
  if (count != t.B) throw IoError("null table: stats count mismatch");
  t.stats.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    if (!std::getline(in, line)) throw IoError("null table: truncated stats");
    char* end = nullptr;
    const double v = std::strtod(line.c_str(), &end);
    if (end == line.c_str() || !std::isfinite(v))
      throw IoError("null table: bad stat value");
    t.stats.push_back(v);
  }
  if (!std::is_sorted(t.stats.begin(), t.stats.end()))
    throw IoError("null table: stats not sorted");
  return t;
}

NullCache::NullCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
}

std::filesystem::path NullCache::default_dir() {
  if (const char* env = std::getenv("CIT_CACHE_DIR"); env && *env)
    return env;
  if (const char* home = std::getenv("HOME"); home && *home)
    return std::filesystem::path(home) / ".cache" / "cit";
  return "cit_cache";
}

void NullCache::set_logger(std::function<void(const std::string&)> logger) {
  logger_ = std::move(logger);
}

void NullCache::log(const std::string& message) {
  if (logger_) {
    logger_(message);
  } else {
    std::cerr << "cit: " << message << "\n";
  }
}

NullTable NullCache::get_or_build(std::size_t n, Dims dims, std::size_t B,
                                  std::uint64_t seed, StatKind kind,
                                  const SimBudget& budget) {
  const std::string name = null_table_filename(n, dims, B, seed, kind);
  std::lock_guard<std::mutex> lock(mutex_);

  if (auto it = memory_.find(name); it != memory_.end()) return it->second;

  const std::filesystem::path file = dir_ / name;
  std::error_code ec;
  if (std::filesystem::exists(file, ec)) {
    try {
      NullTable t = load_null_table(file);
      if (t.n != n || !(t.dims == dims) || t.B != B || t.seed != seed ||
          t.kind != kind)
        throw IoError("null table: key mismatch");
      memory_[name] = t;
      log("loaded null table " + name);
      return t;
    } catch (const IoError& e) {
      log(std::string("rebuilding corrupt null table (") + e.what() + ")");
    }
  }

  NullTable t = simulate_null(n, dims, B, seed, kind, budget);
  log("built null table " + name);
  try {
    save_null_table(t, file);
  } catch (const IoError& e) {
    log(std::string("cache not writable, keeping table in memory (") +
        e.what() + ")");
  }
  memory_[name] = t;
  return t;
}

}  // namespace cit
