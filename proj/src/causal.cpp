#include "cit/causal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cit/stats.hpp"

namespace cit {

std::size_t Dag::edge_count() const {
  std::size_t count = 0;
  for (std::size_t j = 0; j < node_count; ++j)
    for (std::size_t k = 0; k < j; ++k)
      if (coef[j][k] != 0.0) ++count;
  return count;
}

std::size_t Skeleton::edge_count() const {
  std::size_t count = 0;
  for (std::size_t i = 0; i < adj.size(); ++i)
    for (std::size_t j = i + 1; j < adj.size(); ++j)
      if (adj[i][j]) ++count;
  return count;
}

void Cpdag::add_undirected(std::size_t i, std::size_t j) {
  mark[i][j] = EdgeMark::undirected;
  mark[j][i] = EdgeMark::undirected;
}

void Cpdag::orient(std::size_t i, std::size_t j) {
  mark[i][j] = EdgeMark::directed;
  mark[j][i] = EdgeMark::none;
}

std::size_t Cpdag::edge_count() const {
  std::size_t count = 0;
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = i + 1; j < size(); ++j)
      if (adjacent(i, j)) ++count;
  return count;
}

bool Cpdag::has_directed_path(std::size_t from, std::size_t to) const {
  std::vector<bool> seen(size(), false);
  std::vector<std::size_t> stack{from};
  seen[from] = true;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    if (v == to) return true;
    for (std::size_t w = 0; w < size(); ++w) {
      if (directed(v, w) && !seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
    }
  }
  return false;
}

bool Cpdag::has_directed_cycle() const {
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = 0; j < size(); ++j)
      if (directed(i, j) && has_directed_path(j, i)) return true;
  return false;
}

namespace {

// Next k-combination of indices into a pool of the given size,
// lexicographic order. Returns false when exhausted.
bool next_combination(std::vector<std::size_t>& comb, std::size_t pool_size) {
  const std::size_t k = comb.size();
  if (k == 0) return false;
  std::size_t i = k;
  while (i-- > 0) {
    if (comb[i] < pool_size - (k - i)) {
      ++comb[i];
      for (std::size_t j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
      return true;
    }
  }
  return false;
}

std::vector<std::size_t> snapshot_neighbors(
    const std::vector<std::vector<bool>>& adj, std::size_t node,
    std::size_t excluded) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < adj.size(); ++k)
    if (k != node && k != excluded && adj[node][k]) out.push_back(k);
  return out;
}

bool is_subset_sorted(const std::vector<std::size_t>& a,
                      const std::vector<std::size_t>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

Skeleton pc_skeleton(const Dataset& data, double alpha, std::size_t max_depth,
                     const CiOracle& oracle) {
  const std::size_t m = data.ncol();
  if (m < 2) throw DataError("pc_skeleton: need at least 2 columns");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DataError("pc_skeleton: alpha outside (0,1)");

  Skeleton skel;
  skel.nodes = data.names;
  skel.adj.assign(m, std::vector<bool>(m, false));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (i != j) skel.adj[i][j] = true;

  auto test = [&](std::size_t i, std::size_t j,
                  const std::vector<std::size_t>& s) {
    try {
      return oracle(i, j, s);
    } catch (const std::exception& e) {
      std::ostringstream msg;
      msg << "pc_skeleton: oracle failed for (" << data.names[i] << ", "
          << data.names[j] << " | ";
      for (std::size_t k = 0; k < s.size(); ++k)
        msg << (k ? "," : "") << data.names[s[k]];
      msg << "): " << e.what();
      throw Error(msg.str());
    }
  };

  for (std::size_t depth = 0; depth <= max_depth; ++depth) {
    const auto snapshot = skel.adj;
    bool any_candidate = false;
    struct Removal {
      std::size_t i, j;
      std::vector<std::size_t> sepset;
    };
    std::vector<Removal> removals;

    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        if (!snapshot[i][j]) continue;
        const auto nbrs_i = snapshot_neighbors(snapshot, i, j);
        const auto nbrs_j = snapshot_neighbors(snapshot, j, i);
        if (nbrs_i.size() > depth || nbrs_j.size() > depth)
          any_candidate = true;
        if (nbrs_i.size() < depth && nbrs_j.size() < depth) continue;

        bool removed = false;
        auto try_side = [&](const std::vector<std::size_t>& pool,
                            bool skip_covered_by_first) {
          if (removed || pool.size() < depth) return;
          std::vector<std::size_t> comb(depth);
          for (std::size_t k = 0; k < depth; ++k) comb[k] = k;
          do {
            std::vector<std::size_t> s(depth);
            for (std::size_t k = 0; k < depth; ++k) s[k] = pool[comb[k]];
            if (skip_covered_by_first && is_subset_sorted(s, nbrs_i)) continue;
            if (test(i, j, s) > alpha) {
              removals.push_back({i, j, s});
              removed = true;
              return;
            }
          } while (depth > 0 && next_combination(comb, pool.size()));
        };

        if (depth == 0) {
          if (test(i, j, {}) > alpha) removals.push_back({i, j, {}});
        } else {
          try_side(nbrs_i, false);
          try_side(nbrs_j, true);
        }
      }
    }

    for (const auto& rem : removals) {
      skel.adj[rem.i][rem.j] = false;
      skel.adj[rem.j][rem.i] = false;
      skel.sepsets[{rem.i, rem.j}] = rem.sepset;
    }
    if (!any_candidate) break;
  }
  return skel;
}

Cpdag orient_v_structures(const Skeleton& skeleton) {
  const std::size_t m = skeleton.nodes.size();
  Cpdag g;
  g.nodes = skeleton.nodes;
  g.sepsets = skeleton.sepsets;
  g.mark.assign(m, std::vector<EdgeMark>(m, EdgeMark::none));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      if (skeleton.adj[i][j]) g.add_undirected(i, j);

  // Arrowhead claims x -> y from unshielded triples.
  std::vector<std::pair<std::size_t, std::size_t>> claims;
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t i = 0; i < m; ++i) {
      if (i == k || !skeleton.adj[i][k]) continue;
      for (std::size_t j = i + 1; j < m; ++j) {
        if (j == k || !skeleton.adj[j][k] || skeleton.adj[i][j]) continue;
        const auto it = skeleton.sepsets.find({std::min(i, j), std::max(i, j)});
        if (it == skeleton.sepsets.end()) continue;
        const auto& sep = it->second;
        if (std::find(sep.begin(), sep.end(), k) == sep.end()) {
          claims.emplace_back(i, k);
          claims.emplace_back(j, k);
        }
      }
    }
  }

  for (const auto& [from, to] : claims) {
    const bool opposite =
        std::find(claims.begin(), claims.end(),
                  std::make_pair(to, from)) != claims.end();
    if (!opposite && g.undirected(from, to)) g.orient(from, to);
  }
  return g;
}

namespace {

// Orient i -> j only when doing so cannot close a directed cycle or create
// a v-structure not sanctioned by the sepsets.
bool try_orient(Cpdag& g, std::size_t i, std::size_t j) {
  if (!g.undirected(i, j)) return false;
  if (g.has_directed_path(j, i)) return false;
  for (std::size_t d = 0; d < g.size(); ++d)
    if (d != i && g.directed(d, j) && !g.adjacent(d, i)) return false;
  g.orient(i, j);
  return true;
}

}  // namespace

Cpdag meek_rules(Cpdag g) {
  const std::size_t m = g.size();
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < m; ++b) {
        if (!g.undirected(a, b)) continue;

        // R1: c -> a, a - b, c and b nonadjacent.
        for (std::size_t c = 0; c < m; ++c) {
          if (g.directed(c, a) && !g.adjacent(c, b)) {
            if (try_orient(g, a, b)) changed = true;
            break;
          }
        }
        if (!g.undirected(a, b)) continue;

        // R2: a -> c -> b with a - b.
        for (std::size_t c = 0; c < m; ++c) {
          if (g.directed(a, c) && g.directed(c, b)) {
            if (try_orient(g, a, b)) changed = true;
            break;
          }
        }
        if (!g.undirected(a, b)) continue;

        // R3: a - c and a - d, c -> b and d -> b, c and d nonadjacent.
        bool fired = false;
        for (std::size_t c = 0; c < m && !fired; ++c) {
          if (!g.undirected(a, c) || !g.directed(c, b)) continue;
          for (std::size_t d = c + 1; d < m && !fired; ++d) {
            if (!g.undirected(a, d) || !g.directed(d, b)) continue;
            if (!g.adjacent(c, d)) {
              if (try_orient(g, a, b)) changed = true;
              fired = true;
            }
          }
        }
        if (!g.undirected(a, b)) continue;

        // R4: a - c and a - d with c -> d, d -> b, c and b nonadjacent.
        fired = false;
        for (std::size_t d = 0; d < m && !fired; ++d) {
          if (!g.adjacent(a, d) || !g.directed(d, b)) continue;
          for (std::size_t c = 0; c < m && !fired; ++c) {
            if (!g.adjacent(a, c) || !g.directed(c, d)) continue;
            if (!g.adjacent(c, b)) {
              if (try_orient(g, a, b)) changed = true;
              fired = true;
            }
          }
        }
      }
    }
  }
  return g;
}

Cpdag pc(const Dataset& data, double alpha, std::size_t max_depth,
         const CiOracle& oracle) {
  return meek_rules(orient_v_structures(pc_skeleton(data, alpha, max_depth, oracle)));
}

std::pair<double, double> tpr_fpr(const Cpdag& estimated, const Dag& truth) {
  const std::size_t m = truth.node_count;
  if (estimated.size() != m)
    throw DataError("tpr_fpr: node sets have different sizes");

  std::size_t true_edges = 0, hits = 0, false_edges = 0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const bool truth_edge = truth.coef[j][i] != 0.0;
      const bool est_edge = estimated.adjacent(i, j);
      if (truth_edge) {
        ++true_edges;
        if (est_edge) ++hits;
      } else if (est_edge) {
        ++false_edges;
      }
    }
  }
  const std::size_t pairs = m * (m - 1) / 2;
  const std::size_t non_edges = pairs - true_edges;
  const double tpr = true_edges == 0
                         ? 1.0
                         : static_cast<double>(hits) / static_cast<double>(true_edges);
  const double fpr = non_edges == 0 ? 0.0
                                    : static_cast<double>(false_edges) /
                                          static_cast<double>(non_edges);
  return {tpr, fpr};
}

CiOracle make_rho_oracle(const Dataset& data, const TestSpec& base,
                         NullCache& cache) {
  return [&data, base, &cache](std::size_t i, std::size_t j,
                               const std::vector<std::size_t>& s) {
    TestSpec spec = base;
    spec.x_cols = {data.names[i]};
    spec.y_cols = {data.names[j]};
    spec.z_cols.clear();
    for (std::size_t k : s) spec.z_cols.push_back(data.names[k]);
    // The transform chain is sequential in z, so fix a canonical order to
    // keep skeletons independent of the dataset's column order.
    std::sort(spec.z_cols.begin(), spec.z_cols.end());
    return run_test(data, spec, cache).p_value;
  };
}

namespace {

// Partial correlation of variables 0 and 1 given the rest, from the inverse
// of their correlation matrix.
double partial_correlation(const std::vector<const Column*>& vars) {
  const std::size_t d = vars.size();
  std::vector<std::vector<double>> r(d, std::vector<double>(d, 1.0));
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = a + 1; b < d; ++b)
      r[a][b] = r[b][a] = pearson_corr(*vars[a], *vars[b]);

  // Gauss-Jordan inverse; d is tiny.
  std::vector<std::vector<double>> inv(d, std::vector<double>(d, 0.0));
  for (std::size_t a = 0; a < d; ++a) inv[a][a] = 1.0;
  for (std::size_t col = 0; col < d; ++col) {
    std::size_t pivot = col;
    for (std::size_t row = col + 1; row < d; ++row)
      if (std::abs(r[row][col]) > std::abs(r[pivot][col])) pivot = row;
    std::swap(r[col], r[pivot]);
    std::swap(inv[col], inv[pivot]);
    const double diag = r[col][col];
    if (std::abs(diag) < 1e-12)
      throw DataError("partial correlation: singular correlation matrix");
    for (std::size_t k = 0; k < d; ++k) {
      r[col][k] /= diag;
      inv[col][k] /= diag;
    }
    for (std::size_t row = 0; row < d; ++row) {
      if (row == col) continue;
      const double f = r[row][col];
      for (std::size_t k = 0; k < d; ++k) {
        r[row][k] -= f * r[col][k];
        inv[row][k] -= f * inv[col][k];
      }
    }
  }
  return -inv[0][1] / std::sqrt(inv[0][0] * inv[1][1]);
}

}  // namespace

CiOracle make_pcor_oracle(const Dataset& data) {
  return [&data](std::size_t i, std::size_t j,
                 const std::vector<std::size_t>& s) {
    std::vector<const Column*> vars{&data.columns[i], &data.columns[j]};
    for (std::size_t k : s) vars.push_back(&data.columns[k]);
    const double df =
        static_cast<double>(data.n) - static_cast<double>(s.size()) - 3.0;
    if (df <= 0.0) return 1.0;
    double rho = partial_correlation(vars);
    rho = std::clamp(rho, -1.0 + 1e-12, 1.0 - 1e-12);
    const double z = std::sqrt(df) * std::atanh(rho);
    return 2.0 * (1.0 - normal_cdf(std::abs(z)));
  };
}

}  // namespace cit
