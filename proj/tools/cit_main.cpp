#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cit/csv.hpp"
#include "cit/parallel.hpp"
#include "cit/report.hpp"
#include "cit/rng.hpp"

namespace {

std::uint64_t fresh_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path);
  if (!out) throw cit::IoError("cannot write " + path);
  out << content;
}

struct KernelOpts {
  std::string kernel = "gaussian";
  double bandwidth_scale = 1.0;
  double bandwidth = 0.0;  // 0 = rule of thumb

  cit::KernelSpec spec() const {
    return {cit::kernel_family_from_string(kernel), 2};
  }
  cit::BandwidthPolicy policy() const {
    cit::BandwidthPolicy p;
    p.scale_c = bandwidth_scale;
    if (bandwidth > 0.0) p.explicit_h = bandwidth;
    return p;
  }
};

void add_kernel_options(CLI::App* cmd, KernelOpts& opts) {
  cmd->add_option("--kernel", opts.kernel, "kernel family: gaussian|epanechnikov")
      ->check(CLI::IsMember({"gaussian", "epanechnikov"}));
  cmd->add_option("--bandwidth-scale", opts.bandwidth_scale,
                  "multiplier c on the rule-of-thumb bandwidth");
  cmd->add_option("--bandwidth", opts.bandwidth,
                  "explicit bandwidth (overrides the rule of thumb)");
}

cit::Dims parse_dims(const std::vector<std::size_t>& d) {
  if (d.size() != 3) throw cit::DataError("--dims expects p,q,r");
  return {d[0], d[1], d[2]};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "cit: distribution-free conditional independence testing, null-table "
      "calibration, and PC-algorithm causal discovery"};
  app.require_subcommand(1);

  int threads = 0;
  std::string cache_dir;
  app.add_option("--threads", threads, "worker cap (0 = hardware concurrency)");
  app.add_option("--cache-dir", cache_dir,
                 "null-table cache directory (default: $CIT_CACHE_DIR or "
                 "$HOME/.cache/cit)");

  // ---- test ----------------------------------------------------------
  auto* cmd_test = app.add_subcommand("test", "conditional independence test");
  std::string in_path, format = "json", out_path = "-";
  std::vector<std::string> xs, ys, zs, discrete;
  double alpha = 0.05;
  std::size_t reps_B = 1000;
  std::uint64_t seed = 0;
  double budget = 1e12;
  KernelOpts kopts;
  cmd_test->add_option("--input,-i", in_path, "CSV file")->required();
  cmd_test->add_option("--x", xs, "x columns")->delimiter(',')->required();
  cmd_test->add_option("--y", ys, "y columns")->delimiter(',')->required();
  cmd_test->add_option("--z", zs, "conditioning columns (empty = unconditional)")
      ->delimiter(',');
  cmd_test->add_option("--discrete", discrete, "columns to treat as discrete")
      ->delimiter(',');
  cmd_test->add_option("--alpha", alpha, "significance level");
  cmd_test->add_option("--reps", reps_B, "null-table replicates B");
  cmd_test->add_option("--seed", seed, "seed for randomized transforms");
  cmd_test->add_option("--budget", budget, "work ceiling for calibration");
  cmd_test->add_option("--format", format, "json|text")
      ->check(CLI::IsMember({"json", "text"}));
  cmd_test->add_option("--output,-o", out_path, "output path (- = stdout)");
  add_kernel_options(cmd_test, kopts);

  // ---- calibrate ------------------------------------------------------
  auto* cmd_cal = app.add_subcommand("calibrate", "build or load a null table");
  std::size_t cal_n = 100;
  std::vector<std::size_t> cal_dims{1, 1, 1};
  std::size_t cal_B = 1000;
  std::uint64_t cal_seed = cit::kDefaultCalibrationSeed;
  std::string cal_kind = "auto";
  cmd_cal->add_option("--n", cal_n, "sample size")->required();
  cmd_cal->add_option("--dims", cal_dims, "p,q,r")->delimiter(',');
  cmd_cal->add_option("--reps", cal_B, "replicates B");
  cmd_cal->add_option("--seed", cal_seed, "table seed");
  cmd_cal->add_option("--kind", cal_kind,
                      "auto|rho_normalized|rho_multi_unnormalized|rho_unconditional");
  cmd_cal->add_option("--budget", budget, "work ceiling");
  cmd_cal->add_option("--format", format, "json|text")
      ->check(CLI::IsMember({"json", "text"}));

  // ---- transform ------------------------------------------------------
  auto* cmd_tr = app.add_subcommand("transform", "emit U/V/W coordinates as CSV");
  cmd_tr->add_option("--input,-i", in_path, "CSV file")->required();
  cmd_tr->add_option("--x", xs, "x columns")->delimiter(',')->required();
  cmd_tr->add_option("--y", ys, "y columns")->delimiter(',')->required();
  cmd_tr->add_option("--z", zs, "conditioning columns")->delimiter(',');
  cmd_tr->add_option("--discrete", discrete, "columns to treat as discrete")
      ->delimiter(',');
  cmd_tr->add_option("--seed", seed, "seed for randomized transforms");
  cmd_tr->add_option("--output,-o", out_path, "output path (- = stdout)");
  add_kernel_options(cmd_tr, kopts);

  // ---- pc --------------------------------------------------------------
  auto* cmd_pc = app.add_subcommand("pc", "PC-algorithm causal discovery");
  int max_depth = -1;
  std::string tester = "rho", dot_path;
  cmd_pc->add_option("--input,-i", in_path, "CSV file")->required();
  cmd_pc->add_option("--alpha", alpha, "significance level");
  cmd_pc->add_option("--max-depth", max_depth,
                     "largest conditioning-set size (-1 = columns-2)");
  cmd_pc->add_option("--test", tester, "CI oracle: rho|pcor")
      ->check(CLI::IsMember({"rho", "pcor"}));
  cmd_pc->add_option("--reps", reps_B, "null-table replicates B (rho oracle)");
  cmd_pc->add_option("--budget", budget, "work ceiling for calibration");
  cmd_pc->add_option("--dot", dot_path, "also write DOT rendering here");
  cmd_pc->add_option("--format", format, "json|text")
      ->check(CLI::IsMember({"json", "text"}));
  cmd_pc->add_option("--output,-o", out_path, "output path (- = stdout)");
  add_kernel_options(cmd_pc, kopts);

  // ---- bench -----------------------------------------------------------
  auto* cmd_bench = app.add_subcommand("bench", "simulation studies");
  std::vector<std::string> model_names;
  std::size_t bench_n = 100, bench_reps = 500;
  std::vector<double> alphas{0.05, 0.10};
  std::vector<double> sweep_c;
  bool dag_study = false, timing = false;
  std::size_t dag_nodes = 5;
  double dag_edge_prob = 0.4;
  std::string dag_noise = "normal";
  cmd_bench->add_option("--models", model_names, "model ids, e.g. M1,M2")
      ->delimiter(',');
  cmd_bench->add_option("--n", bench_n, "sample size per replicate");
  cmd_bench->add_option("--reps", bench_reps, "replicates per scenario");
  cmd_bench->add_option("--alphas", alphas, "significance levels")->delimiter(',');
  cmd_bench->add_option("--seed", seed, "study seed");
  cmd_bench->add_option("--reps-b", reps_B, "null-table replicates B");
  cmd_bench->add_option("--sweep-c", sweep_c, "bandwidth scales to sweep")
      ->delimiter(',');
  cmd_bench->add_flag("--dag-study", dag_study, "run the DAG recovery study");
  cmd_bench->add_option("--dag-nodes", dag_nodes, "nodes in the random DAG");
  cmd_bench->add_option("--dag-edge-prob", dag_edge_prob, "edge probability");
  cmd_bench->add_option("--dag-noise", dag_noise, "normal|uniform")
      ->check(CLI::IsMember({"normal", "uniform"}));
  cmd_bench->add_option("--alpha", alpha, "level for sweep/DAG study");
  cmd_bench->add_option("--budget", budget, "work ceiling for calibration");
  cmd_bench->add_flag("--timing", timing, "include wall-clock in the report");
  cmd_bench->add_option("--format", format, "json|text")
      ->check(CLI::IsMember({"json", "text"}));
  cmd_bench->add_option("--output,-o", out_path, "output path (- = stdout)");
  add_kernel_options(cmd_bench, kopts);

  // Global flags may appear after the subcommand name.
  for (auto* cmd : {cmd_test, cmd_cal, cmd_tr, cmd_pc, cmd_bench})
    cmd->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    cit::par::set_default_threads(threads);
    cit::NullCache cache(cache_dir.empty() ? cit::NullCache::default_dir()
                                           : std::filesystem::path(cache_dir));
    const cit::OutputFormat ofmt = cit::output_format_from_string(format);
    const bool seed_given = (*cmd_test && cmd_test->count("--seed")) ||
                            (*cmd_tr && cmd_tr->count("--seed")) ||
                            (*cmd_bench && cmd_bench->count("--seed"));
    if ((*cmd_test || *cmd_tr || *cmd_bench) && !seed_given)
      seed = fresh_seed();

    if (*cmd_test) {
      const cit::Dataset data = cit::read_csv(in_path, discrete);
      cit::TestSpec spec;
      spec.x_cols = xs;
      spec.y_cols = ys;
      spec.z_cols = zs;
      spec.alpha = alpha;
      spec.kernel = kopts.spec();
      spec.bandwidth = kopts.policy();
      spec.reps_B = reps_B;
      spec.seed = seed;
      spec.budget.max_work = budget;
      const cit::TestResult result = cit::run_test(data, spec, cache);
      for (const auto& w : result.transform.warnings)
        std::cerr << "cit: warning: " << w << "\n";
      write_output(out_path, cit::render(result, ofmt));
      return 0;
    }

    if (*cmd_cal) {
      const cit::Dims dims = parse_dims(cal_dims);
      cit::StatKind kind;
      if (cal_kind == "auto") {
        if (dims.r == 0) kind = cit::StatKind::rho_unconditional;
        else if (dims == cit::Dims{1, 1, 1}) kind = cit::StatKind::rho_normalized;
        else kind = cit::StatKind::rho_multi_unnormalized;
      } else {
        kind = cit::stat_kind_from_string(cal_kind);
      }
      cit::SimBudget b{budget};
      const cit::NullTable table =
          cache.get_or_build(cal_n, dims, cal_B, cal_seed, kind, b);
      const std::string file =
          (cache.dir() /
           cit::null_table_filename(cal_n, dims, cal_B, cal_seed, kind))
              .string();
      std::ostringstream out;
      if (ofmt == cit::OutputFormat::json) {
        nlohmann::json doc;
        doc["n"] = table.n;
        doc["dims"] = {table.dims.p, table.dims.q, table.dims.r};
        doc["B"] = table.B;
        doc["seed"] = table.seed;
        doc["kind"] = cit::to_string(table.kind);
        nlohmann::json crit;
        for (double a : {0.10, 0.05, 0.01}) {
          char key[16];
          std::snprintf(key, sizeof(key), "%.2f", a);
          crit[key] = cit::critical_value(table, a);
        }
        doc["critical_values"] = crit;
        doc["file"] = file;
        out << doc.dump(2) << "\n";
      } else {
        out << "null table " << file << "\n";
        out << "  n " << table.n << "  dims " << table.dims.p << ","
            << table.dims.q << "," << table.dims.r << "  B " << table.B
            << "  seed " << table.seed << "  kind " << cit::to_string(table.kind)
            << "\n";
        for (double a : {0.10, 0.05, 0.01})
          out << "  crit[" << a << "] " << cit::critical_value(table, a) << "\n";
      }
      write_output(out_path, out.str());
      return 0;
    }

    if (*cmd_tr) {
      const cit::Dataset data = cit::read_csv(in_path, discrete);
      cit::TestSpec spec;
      spec.x_cols = xs;
      spec.y_cols = ys;
      spec.z_cols = zs;
      spec.seed = seed;
      spec.kernel = kopts.spec();
      spec.bandwidth = kopts.policy();
      const cit::TransformedSample ts = cit::run_transform(data, spec);
      for (const auto& w : ts.meta.warnings)
        std::cerr << "cit: warning: " << w << "\n";

      std::vector<std::string> names;
      std::vector<cit::Column> cols;
      auto add_block = [&](const cit::ColMatrix& m, const std::string& prefix) {
        for (std::size_t k = 0; k < m.ncol(); ++k) {
          names.push_back(prefix + std::to_string(k + 1));
          cols.push_back(m[k]);
        }
      };
      add_block(ts.u, "U");
      add_block(ts.v, "V");
      add_block(ts.w, "W");
      std::ostringstream out;
      out << "# cit transform seed=" << seed << " kernel=" << kopts.kernel
          << " scale_c=" << kopts.bandwidth_scale;
      if (kopts.bandwidth > 0.0) out << " bandwidth=" << kopts.bandwidth;
      out << "\n";
      cit::write_csv(out, cit::make_dataset(std::move(names), std::move(cols)));
      write_output(out_path, out.str());
      return 0;
    }

    if (*cmd_pc) {
      const cit::Dataset data = cit::read_csv(in_path, {});
      const std::size_t depth_cap =
          max_depth >= 0 ? static_cast<std::size_t>(max_depth)
                         : (data.ncol() >= 2 ? data.ncol() - 2 : 0);
      cit::TestSpec base;
      base.kernel = kopts.spec();
      base.bandwidth = kopts.policy();
      base.reps_B = reps_B;
      base.seed = seed;
      base.budget.max_work = budget;
      base.alpha = alpha;
      const cit::CiOracle oracle = tester == "rho"
                                       ? cit::make_rho_oracle(data, base, cache)
                                       : cit::make_pcor_oracle(data);
      const cit::Cpdag graph = cit::pc(data, alpha, depth_cap, oracle);
      write_output(out_path, cit::render(graph, ofmt));
      if (!dot_path.empty()) write_output(dot_path, cit::to_dot(graph));
      return 0;
    }

    if (*cmd_bench) {
      cit::BenchOptions options;
      options.kernel = kopts.spec();
      options.bandwidth = kopts.policy();
      options.reps_B = reps_B;
      options.budget.max_work = budget;
      if (dag_study) {
        const cit::NoiseKind noise = dag_noise == "normal"
                                         ? cit::NoiseKind::normal
                                         : cit::NoiseKind::uniform;
        const cit::DagStudyReport report = cit::dag_recovery_study(
            dag_nodes, dag_edge_prob, bench_n, bench_reps, noise, alpha, seed,
            cache, options);
        write_output(out_path, cit::render(report, ofmt));
        return 0;
      }
      std::vector<cit::ModelId> ids;
      for (const auto& name : model_names)
        ids.push_back(cit::model_from_string(name));
      if (ids.empty()) throw cit::DataError("bench: --models is required");
      const cit::BenchReport report =
          sweep_c.empty()
              ? cit::size_power_run(ids, bench_n, alphas, bench_reps, seed,
                                    cache, options)
              : cit::bandwidth_sweep(ids, bench_n, sweep_c, bench_reps, seed,
                                     cache, options);
      write_output(out_path, cit::render(report, ofmt, timing));
      return 0;
    }
  } catch (const cit::BudgetError& e) {
    std::cerr << "cit: budget error: " << e.what() << "\n";
    return 4;
  } catch (const cit::IoError& e) {
    std::cerr << "cit: io error: " << e.what() << "\n";
    return 5;
  } catch (const cit::DataError& e) {
    std::cerr << "cit: data error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "cit: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
