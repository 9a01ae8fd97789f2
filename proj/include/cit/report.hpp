#pragma once

#include <string>

#include "cit/causal.hpp"
#include "cit/citest.hpp"
#include "cit/simbench.hpp"

namespace cit {

enum class OutputFormat { json, text };

OutputFormat output_format_from_string(const std::string& name);

// Stable structured renderings. Every document carries the full
// configuration (seeds, bandwidths, replicate counts) needed to reproduce
// the run. Timing is emitted only when include_timing is set, so default
// documents are byte-identical across runs and worker counts.
std::string render(const TestResult& result, OutputFormat format);
std::string render(const BenchReport& report, OutputFormat format,
                   bool include_timing = false);
std::string render(const DagStudyReport& report, OutputFormat format);
std::string render(const Cpdag& graph, OutputFormat format);

std::string to_dot(const Cpdag& graph);

}  // namespace cit
