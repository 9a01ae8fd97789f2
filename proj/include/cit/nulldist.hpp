#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "cit/common.hpp"

namespace cit {

enum class StatKind { rho_normalized, rho_multi_unnormalized, rho_unconditional };

std::string to_string(StatKind kind);
StatKind stat_kind_from_string(const std::string& name);

// Sorted Monte-Carlo sample of the null statistic, keyed by
// (n, dims, B, seed, kind). Regenerating with the same key reproduces the
// stats exactly, for any worker count.
struct NullTable {
  std::size_t n = 0;
  Dims dims{};
  std::size_t B = 0;
  std::uint64_t seed = 0;
  StatKind kind = StatKind::rho_normalized;
  std::vector<double> stats;  // ascending
};

// Work ceiling for a single simulation run, measured as B * n^2 * (p+q+r).
struct SimBudget {
  double max_work = 1e12;
};

// Each replicate draws n*(p+q+r) i.i.d. uniforms and evaluates the chosen
// statistic on them directly (no kernel estimation).
NullTable simulate_null(std::size_t n, Dims dims, std::size_t B,
                        std::uint64_t seed, StatKind kind,
                        const SimBudget& budget = {});

// ceil(B*(1-alpha))-th ascending order statistic.
double critical_value(const NullTable& table, double alpha);

// Add-one Monte-Carlo p-value: (1 + #{stats_b >= observed}) / (B + 1).
double p_value(const NullTable& table, double observed);

std::string null_table_filename(std::size_t n, Dims dims, std::size_t B,
                                std::uint64_t seed, StatKind kind);

// Plain-text serialization; see README for the format.
void save_null_table(const NullTable& table, const std::filesystem::path& file);
NullTable load_null_table(const std::filesystem::path& file);

// Persistent store of null tables, one file per key. Thread-safe; files are
// replaced atomically. A corrupt file is rebuilt; an unwritable directory
// degrades to in-memory tables. Both conditions are reported through the
// logger (stderr by default).
class NullCache {
 public:
  explicit NullCache(std::filesystem::path dir);

  // CIT_CACHE_DIR, else $HOME/.cache/cit, else ./cit_cache.
  static std::filesystem::path default_dir();

  NullTable get_or_build(std::size_t n, Dims dims, std::size_t B,
                         std::uint64_t seed, StatKind kind,
                         const SimBudget& budget = {});

  void set_logger(std::function<void(const std::string&)> logger);
  const std::filesystem::path& dir() const { return dir_; }

 private:
  void log(const std::string& message);

  std::filesystem::path dir_;
  std::map<std::string, NullTable> memory_;
  std::mutex mutex_;
  std::function<void(const std::string&)> logger_;
};

}  // namespace cit
