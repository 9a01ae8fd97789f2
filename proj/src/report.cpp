#include "cit/report.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace cit {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

json stages_json(const std::vector<StageBandwidths>& stages) {
  json arr = json::array();
  for (const auto& s : stages) {
    json one;
    one["cond_dim"] = s.cond_dim;
    one["h"] = s.h;
    arr.push_back(one);
  }
  return arr;
}

json transform_json(const TransformMeta& meta) {
  json t;
  t["u_stages"] = stages_json(meta.u_stages);
  t["v_stages"] = stages_json(meta.v_stages);
  t["w_stages"] = stages_json(meta.w_stages);
  t["discrete"] = meta.discrete;
  if (meta.discrete) t["seed"] = meta.seed;
  if (!meta.warnings.empty()) t["warnings"] = meta.warnings;
  return t;
}

}  // namespace

OutputFormat output_format_from_string(const std::string& name) {
  if (name == "json") return OutputFormat::json;
  if (name == "text") return OutputFormat::text;
  throw DataError("unknown output format: " + name);
}

std::string render(const TestResult& result, OutputFormat format) {
  if (format == OutputFormat::json) {
    json doc;
    doc["statistic"] = result.statistic.value;
    doc["n"] = result.n;
    doc["dims"] = {result.statistic.dims.p, result.statistic.dims.q,
                   result.statistic.dims.r};
    doc["normalized"] = result.statistic.normalized;
    doc["kind"] = to_string(result.kind);
    doc["p_value"] = result.p_value;
    doc["alpha"] = result.alpha;
    doc["reject"] = result.reject;
    json crit;
    for (const auto& [a, c] : result.critical_values) crit[fmt6(a)] = c;
    doc["critical_values"] = crit;
    doc["reps_B"] = result.reps_B;
    doc["seed"] = result.seed_used;
    doc["calibration_seed"] = result.calibration_seed;
    doc["transform"] = transform_json(result.transform);
    return doc.dump(2) + "\n";
  }

  std::ostringstream out;
  out << "conditional independence test\n";
  out << "  n            " << result.n << "\n";
  out << "  dims (p,q,r) " << result.statistic.dims.p << ","
      << result.statistic.dims.q << "," << result.statistic.dims.r << "\n";
  out << "  kind         " << to_string(result.kind) << "\n";
  out << "  statistic    " << fmt(result.statistic.value) << "\n";
  out << "  p_value      " << fmt(result.p_value) << "\n";
  for (const auto& [a, c] : result.critical_values)
    out << "  crit[" << fmt6(a) << "]   " << fmt(c) << "\n";
  out << "  alpha        " << fmt6(result.alpha) << "\n";
  out << "  reject       " << (result.reject ? "yes" : "no") << "\n";
  out << "  reps_B       " << result.reps_B << "\n";
  out << "  seed         " << result.seed_used << "\n";
  out << "  calib_seed   " << result.calibration_seed << "\n";
  for (const auto& stages :
       {&result.transform.u_stages, &result.transform.v_stages,
        &result.transform.w_stages}) {
    for (const auto& s : *stages) {
      out << "  bandwidths  ";
      if (s.h.empty()) {
        out << " ecdf";
      } else {
        for (double h : s.h) out << " " << fmt6(h);
      }
      out << "\n";
    }
  }
  for (const auto& w : result.transform.warnings)
    out << "  warning      " << w << "\n";
  return out.str();
}

std::string render(const BenchReport& report, OutputFormat format,
                   bool include_timing) {
  if (format == OutputFormat::json) {
    json doc;
    doc["seed"] = report.seed;
    doc["reps_B"] = report.reps_B;
    if (include_timing) doc["wall_seconds"] = report.wall_seconds;
    json rows = json::array();
    for (const auto& r : report.rows) {
      json one;
      one["model"] = r.model;
      one["n"] = r.n;
      one["alpha"] = r.alpha;
      one["scale_c"] = r.scale_c;
      one["reps"] = r.reps;
      one["frequency"] = r.frequency;
      rows.push_back(one);
    }
    doc["rows"] = rows;
    return doc.dump(2) + "\n";
  }

  std::ostringstream out;
  out << "model      n  alpha    c   reps  frequency\n";
  for (const auto& r : report.rows) {
    char line[128];
    std::snprintf(line, sizeof(line), "%-6s %6zu  %-5.3g %-4.3g %6zu  %.6g\n",
                  r.model.c_str(), r.n, r.alpha, r.scale_c, r.reps, r.frequency);
    out << line;
  }
  out << "seed " << report.seed << "  reps_B " << report.reps_B << "\n";
  if (include_timing) out << "wall_seconds " << fmt6(report.wall_seconds) << "\n";
  return out.str();
}

std::string render(const DagStudyReport& report, OutputFormat format) {
  if (format == OutputFormat::json) {
    json doc;
    doc["nodes"] = report.nodes;
    doc["edge_prob"] = report.edge_prob;
    doc["n"] = report.n;
    doc["reps"] = report.reps;
    doc["alpha"] = report.alpha;
    doc["mean_tpr"] = report.mean_tpr;
    doc["mean_fpr"] = report.mean_fpr;
    doc["seed"] = report.seed;
    return doc.dump(2) + "\n";
  }
  std::ostringstream out;
  out << "dag recovery study\n";
  out << "  nodes     " << report.nodes << "\n";
  out << "  edge_prob " << fmt6(report.edge_prob) << "\n";
  out << "  n         " << report.n << "\n";
  out << "  reps      " << report.reps << "\n";
  out << "  alpha     " << fmt6(report.alpha) << "\n";
  out << "  mean_tpr  " << fmt6(report.mean_tpr) << "\n";
  out << "  mean_fpr  " << fmt6(report.mean_fpr) << "\n";
  out << "  seed      " << report.seed << "\n";
  return out.str();
}

std::string render(const Cpdag& graph, OutputFormat format) {
  if (format == OutputFormat::json) {
    json doc;
    doc["nodes"] = graph.nodes;
    json edges = json::array();
    for (std::size_t i = 0; i < graph.size(); ++i) {
      for (std::size_t j = 0; j < graph.size(); ++j) {
        if (i < j && graph.undirected(i, j))
          edges.push_back({{"from", graph.nodes[i]},
                           {"to", graph.nodes[j]},
                           {"directed", false}});
        else if (graph.directed(i, j))
          edges.push_back({{"from", graph.nodes[i]},
                           {"to", graph.nodes[j]},
                           {"directed", true}});
      }
    }
    doc["edges"] = edges;
    json seps = json::array();
    for (const auto& [pair, sep] : graph.sepsets) {
      json one;
      one["i"] = graph.nodes[pair.first];
      one["j"] = graph.nodes[pair.second];
      json names = json::array();
      for (std::size_t k : sep) names.push_back(graph.nodes[k]);
      one["sepset"] = names;
      seps.push_back(one);
    }
    doc["sepsets"] = seps;
    return doc.dump(2) + "\n";
  }

  std::ostringstream out;
  out << "nodes " << graph.size() << "\n";
  for (const auto& name : graph.nodes) out << "node " << name << "\n";
  for (std::size_t i = 0; i < graph.size(); ++i) {
    for (std::size_t j = 0; j < graph.size(); ++j) {
      if (i < j && graph.undirected(i, j))
        out << "edge " << graph.nodes[i] << " -- " << graph.nodes[j] << "\n";
      else if (graph.directed(i, j))
        out << "edge " << graph.nodes[i] << " -> " << graph.nodes[j] << "\n";
    }
  }
  for (const auto& [pair, sep] : graph.sepsets) {
    out << "sepset " << graph.nodes[pair.first] << " " << graph.nodes[pair.second]
        << " |";
    for (std::size_t k : sep) out << " " << graph.nodes[k];
    out << "\n";
  }
  return out.str();
}

std::string to_dot(const Cpdag& graph) {
  std::ostringstream out;
  out << "digraph cpdag {\n";
  for (const auto& name : graph.nodes) out << "  \"" << name << "\";\n";
  for (std::size_t i = 0; i < graph.size(); ++i) {
    for (std::size_t j = 0; j < graph.size(); ++j) {
      if (i < j && graph.undirected(i, j))
        out << "  \"" << graph.nodes[i] << "\" -> \"" << graph.nodes[j]
            << "\" [dir=none];\n";
      else if (graph.directed(i, j))
        out << "  \"" << graph.nodes[i] << "\" -> \"" << graph.nodes[j]
            << "\";\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace cit
