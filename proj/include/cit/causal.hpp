#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cit/citest.hpp"
#include "cit/dataset.hpp"

namespace cit {

// Weighted DAG over nodes 0..node_count-1; coef[j][k] != 0 encodes an edge
// k -> j (only k < j is populated by the generators).
struct Dag {
  std::size_t node_count = 0;
  std::vector<std::vector<double>> coef;

  bool edge(std::size_t from, std::size_t to) const {
    return coef[to][from] != 0.0;
  }
  std::size_t edge_count() const;
};

using SepsetMap =
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>>;

struct Skeleton {
  std::vector<std::string> nodes;
  std::vector<std::vector<bool>> adj;
  SepsetMap sepsets;

  std::size_t edge_count() const;
};

enum class EdgeMark : unsigned char { none, undirected, directed };

// Partially directed graph: mark[i][j] == directed means i -> j; undirected
// edges carry the undirected mark on both sides.
struct Cpdag {
  std::vector<std::string> nodes;
  std::vector<std::vector<EdgeMark>> mark;
  SepsetMap sepsets;

  std::size_t size() const { return nodes.size(); }
  bool adjacent(std::size_t i, std::size_t j) const {
    return mark[i][j] != EdgeMark::none || mark[j][i] != EdgeMark::none;
  }
  bool directed(std::size_t i, std::size_t j) const {
    return mark[i][j] == EdgeMark::directed;
  }
  bool undirected(std::size_t i, std::size_t j) const {
    return mark[i][j] == EdgeMark::undirected;
  }
  void add_undirected(std::size_t i, std::size_t j);
  void orient(std::size_t i, std::size_t j);  // i -> j
  std::size_t edge_count() const;
  bool has_directed_cycle() const;
  bool has_directed_path(std::size_t from, std::size_t to) const;
};

// p-value of the test "column i independent of column j given columns s".
using CiOracle = std::function<double(
    std::size_t i, std::size_t j, const std::vector<std::size_t>& s)>;

// Stable (order-independent) PC skeleton search: at each depth, edges are
// tested against subsets of a snapshot of the current neighborhoods and
// removals are applied only between depths. The first accepting test
// (p > alpha) records the separating set.
Skeleton pc_skeleton(const Dataset& data, double alpha, std::size_t max_depth,
                     const CiOracle& oracle);

// Orient unshielded triples i - k - j with k outside sepset(i,j) as
// i -> k <- j. Edges claimed in both directions are left undirected.
Cpdag orient_v_structures(const Skeleton& skeleton);

// Meek closure R1-R4 to a fixed point. Orientations that would introduce a
// directed cycle or a new v-structure are skipped.
Cpdag meek_rules(Cpdag graph);

// Skeleton pipeline + v-structures + Meek closure.
Cpdag pc(const Dataset& data, double alpha, std::size_t max_depth,
         const CiOracle& oracle);

// Skeleton-level true/false positive rates against a known DAG.
std::pair<double, double> tpr_fpr(const Cpdag& estimated, const Dag& truth);

// CI oracle backed by the rho test; depth-zero queries use the
// unconditional variant.
CiOracle make_rho_oracle(const Dataset& data, const TestSpec& base,
                         NullCache& cache);

// Gaussian partial-correlation baseline (Fisher z).
CiOracle make_pcor_oracle(const Dataset& data);

}  // namespace cit
