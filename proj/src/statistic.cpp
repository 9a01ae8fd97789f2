#include "cit/statistic.hpp"

#include <algorithm>
#include <optional>

#include "cit/parallel.hpp"

namespace cit {

double s0(double u1, double u2) {
  return std::exp(-std::abs(u1 - u2)) + std::exp(-u1) + std::exp(u1 - 1.0) +
         std::exp(-u2) + std::exp(u2 - 1.0) + 2.0 * std::exp(-1.0) - 4.0;
}

double s_marginal_product(const std::vector<double>& u_row) {
  double prod = 1.0;
  for (double u : u_row) prod *= 2.0 - std::exp(-u) - std::exp(u - 1.0);
  return prod;
}

namespace {

constexpr std::size_t kRowBlock = 64;
constexpr std::size_t kParallelThreshold = 512;

// Per-row caches for one coordinate block: e^x and e^-x per coordinate,
// plus the marginal product per row. Keeps memory O(n * ncol).
struct BlockCache {
  const ColMatrix* m = nullptr;
  std::vector<Column> epos, eneg;
  Column sprod;
  double const_term = 1.0;  // (2/e)^ncol

  explicit BlockCache(const ColMatrix& mat, bool with_sprod) : m(&mat) {
    const std::size_t n = mat.nrow(), d = mat.ncol();
    epos.resize(d);
    eneg.resize(d);
    for (std::size_t k = 0; k < d; ++k) {
      epos[k].resize(n);
      eneg[k].resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        epos[k][i] = std::exp(mat[k][i]);
        eneg[k][i] = std::exp(-mat[k][i]);
      }
    }
    if (with_sprod) {
      const_term = std::pow(2.0 / M_E, static_cast<double>(d));
      sprod.resize(n);
      std::vector<double> row(d);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < d; ++k) row[k] = mat[k][i];
        sprod[i] = s_marginal_product(row);
      }
    }
  }

  // exp(-||row_i - row_j||_1) from the cached exponentials.
  double l1_factor(std::size_t i, std::size_t j) const {
    double f = 1.0;
    for (std::size_t k = 0; k < epos.size(); ++k) {
      f *= (*m)[k][i] >= (*m)[k][j] ? eneg[k][i] * epos[k][j]
                                    : epos[k][i] * eneg[k][j];
    }
    return f;
  }

  double pair_term(std::size_t i, std::size_t j) const {
    return l1_factor(i, j) + const_term - sprod[i] - sprod[j];
  }

  double diag_term(std::size_t i) const {
    return 1.0 + const_term - 2.0 * sprod[i];
  }
};

double vstat_core(const ColMatrix& u, const ColMatrix& v, const ColMatrix* w) {
  const std::size_t n = u.nrow();
  if (n < 1) throw DataError("statistic: empty sample");
  if (v.nrow() != n || (w && w->ncol() > 0 && w->nrow() != n))
    throw DataError("statistic: row count mismatch between blocks");
  if (u.ncol() == 0 || v.ncol() == 0)
    throw DataError("statistic: u and v blocks must be nonempty");

  const BlockCache cu(u, true);
  const BlockCache cv(v, true);
  const bool has_w = w && w->ncol() > 0;
  std::optional<BlockCache> cw;
  if (has_w) cw.emplace(*w, false);

  const std::size_t nblocks = (n + kRowBlock - 1) / kRowBlock;
  std::vector<double> partial(nblocks, 0.0);
  auto row_block = [&](std::size_t b) {
    const std::size_t lo = b * kRowBlock;
    const std::size_t hi = std::min(n, lo + kRowBlock);
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      acc += cu.diag_term(i) * cv.diag_term(i);
      double rowsum = 0.0;
      for (std::size_t j = i + 1; j < n; ++j) {
        double t = cu.pair_term(i, j) * cv.pair_term(i, j);
        if (has_w) t *= cw->l1_factor(i, j);
        rowsum += t;
      }
      acc += 2.0 * rowsum;
    }
    partial[b] = acc;
  };

  const int workers = n >= kParallelThreshold ? par::effective_threads(0) : 1;
  par::for_blocks(nblocks, workers, row_block);

  double total = 0.0;
  for (double p : partial) total += p;
  return total / (static_cast<double>(n) * static_cast<double>(n));
}

}  // namespace

double vstat_conditional(const ColMatrix& u, const ColMatrix& v,
                         const ColMatrix& w) {
  if (w.ncol() == 0) throw DataError("vstat_conditional: w block is empty");
  return vstat_core(u, v, &w);
}

double vstat_unconditional(const ColMatrix& u, const ColMatrix& v) {
  return vstat_core(u, v, nullptr);
}

StatisticValue rho_hat(const TransformedSample& ts) {
  if (ts.dims() != Dims{1, 1, 1})
    throw DataError("rho_hat: requires univariate u, v, w");
  StatisticValue s;
  s.value = k_c0 * vstat_conditional(ts.u, ts.v, ts.w);
  s.n = ts.n();
  s.dims = ts.dims();
  s.normalized = true;
  return s;
}

StatisticValue rho0_hat(const TransformedSample& ts) {
  if (ts.dims() != Dims{1, 1, 1})
    throw DataError("rho0_hat: requires univariate u, v, w");
  const Column& u = ts.u[0];
  const Column& v = ts.v[0];
  const Column& w = ts.w[0];
  const std::size_t n = u.size();
  if (n < 1) throw DataError("rho0_hat: empty sample");

  double joint = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    joint += 1.0;  // i == j
    double rowsum = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      rowsum += std::exp(-std::abs(u[i] - u[j]) - std::abs(v[i] - v[j]) -
                         std::abs(w[i] - w[j]));
    }
    joint += 2.0 * rowsum;
  }
  joint /= static_cast<double>(n) * static_cast<double>(n);

  double marg = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    marg += (2.0 - std::exp(-u[i]) - std::exp(u[i] - 1.0)) *
            (2.0 - std::exp(-v[i]) - std::exp(v[i] - 1.0)) *
            (2.0 - std::exp(-w[i]) - std::exp(w[i] - 1.0));
  }
  marg /= static_cast<double>(n);

  StatisticValue s;
  s.value = k_c0 * (joint + 8.0 * std::exp(-3.0) - 2.0 * marg);
  s.n = n;
  s.dims = ts.dims();
  s.normalized = true;
  return s;
}

StatisticValue rho_hat_multi(const TransformedSample& ts) {
  const Dims d = ts.dims();
  if (d.p < 1 || d.q < 1 || d.r < 1)
    throw DataError("rho_hat_multi: requires p, q, r >= 1");
  StatisticValue s;
  s.value = vstat_conditional(ts.u, ts.v, ts.w);
  s.n = ts.n();
  s.dims = d;
  s.normalized = false;
  return s;
}

StatisticValue rho_hat_unconditional(const ColMatrix& u, const ColMatrix& v) {
  StatisticValue s;
  s.value = vstat_unconditional(u, v);
  s.n = u.nrow();
  s.dims = {u.ncol(), v.ncol(), 0};
  s.normalized = false;
  return s;
}

}  // namespace cit
