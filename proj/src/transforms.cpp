#include "cit/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "cit/rng.hpp"
#include "cit/stats.hpp"

namespace cit {

Column ecdf_transform(const Column& z) {
  const std::size_t n = z.size();
  if (n == 0) throw DataError("ecdf_transform: empty column");
  Column sorted(z);
  std::sort(sorted.begin(), sorted.end());
  Column out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ub = std::upper_bound(sorted.begin(), sorted.end(), z[i]);
    out[i] = static_cast<double>(ub - sorted.begin()) / static_cast<double>(n);
  }
  return out;
}

namespace {

// Product kernel weight across conditioning coordinates, row j against row i.
// The 1/h normalization cancels in the conditional-CDF ratio and is omitted.
inline double product_weight(const ColMatrix& cond, const std::vector<double>& h,
                             std::size_t i, std::size_t j,
                             const KernelSpec& spec) {
  if (spec.family == KernelFamily::gaussian) {
    double ssq = 0.0;
    for (std::size_t k = 0; k < cond.ncol(); ++k) {
      const double t = (cond[k][j] - cond[k][i]) / h[k];
      ssq += t * t;
    }
    return std::exp(-0.5 * ssq);
  }
  double w = 1.0;
  for (std::size_t k = 0; k < cond.ncol(); ++k) {
    const double t = (cond[k][j] - cond[k][i]) / h[k];
    if (std::abs(t) > 1.0) return 0.0;
    w *= 0.75 * (1.0 - t * t);
  }
  return w;
}

}  // namespace

Column kernel_cond_cdf(const Column& x, const ColMatrix& cond,
                       const std::vector<double>& h, const KernelSpec& spec,
                       double self_weight) {
  const std::size_t n = x.size();
  if (n == 0) throw DataError("kernel_cond_cdf: empty column");
  if (cond.ncol() == 0) throw DataError("kernel_cond_cdf: empty conditioning set");
  if (cond.nrow() != n) throw DataError("kernel_cond_cdf: row count mismatch");
  if (h.size() != cond.ncol())
    throw DataError("kernel_cond_cdf: one bandwidth per conditioning column required");
  for (double hk : h)
    if (!(hk > 0.0)) throw DataError("kernel_cond_cdf: bandwidths must be positive");
  if (!(self_weight >= 0.0 && self_weight <= 1.0))
    throw DataError("kernel_cond_cdf: self_weight outside [0,1]");

  Column out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double den = 0.0, num = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double w = product_weight(cond, h, i, j, spec);
      den += w;
      if (j == i)
        num += self_weight * w;
      else if (x[j] <= x[i])
        num += w;
    }
    if (!(den > 0.0))
      throw DataError(
          "kernel_cond_cdf: zero kernel mass at an observation; increase the "
          "bandwidth or use the gaussian kernel");
    out[i] = std::clamp(num / den, 0.0, 1.0);
  }
  return out;
}

double chain_bandwidth_factor(std::size_t cond_dim) {
  return cond_dim <= 1 ? 0.7 : 1.0;
}

ChainResult rosenblatt_chain(const ColMatrix& block, const ColMatrix& cond,
                             const BandwidthPolicy& policy,
                             const KernelSpec& spec) {
  if (block.ncol() == 0) throw DataError("rosenblatt_chain: empty block");
  const std::size_t n = block.nrow();
  if (cond.ncol() > 0 && cond.nrow() != n)
    throw DataError("rosenblatt_chain: row count mismatch");

  ChainResult result;
  ColMatrix acc;  // rank-transformed conditioning coordinates
  for (std::size_t k = 0; k < cond.ncol(); ++k)
    acc.push_col(ecdf_transform(cond[k]));

  for (std::size_t k = 0; k < block.ncol(); ++k) {
    const std::size_t d = acc.ncol();
    if (d == 0) {
      result.transformed.push_col(ecdf_transform(block[k]));
      result.stages.push_back({0, {}});
    } else {
      std::vector<double> h(d);
      try {
        for (std::size_t c = 0; c < d; ++c)
          h[c] = chain_bandwidth_factor(d) *
                 rule_of_thumb_bandwidth(sample_sd(acc[c]), n, d, policy);
        result.transformed.push_col(kernel_cond_cdf(block[k], acc, h, spec, 0.5));
      } catch (const DataError& e) {
        throw DataError("rosenblatt_chain stage " + std::to_string(k + 1) +
                        ": " + e.what());
      }
      result.stages.push_back({d, std::move(h)});
    }
    acc.push_col(ecdf_transform(block[k]));
  }
  return result;
}

Column discrete_randomized_pit(const Column& x, const Column& z,
                               std::uint64_t rng_seed) {
  const std::size_t n = x.size();
  if (n == 0) throw DataError("discrete_randomized_pit: empty column");
  if (!z.empty() && z.size() != n)
    throw DataError("discrete_randomized_pit: row count mismatch");

  std::map<double, std::vector<std::size_t>> levels;
  for (std::size_t i = 0; i < n; ++i) levels[z.empty() ? 0.0 : z[i]].push_back(i);

  Column out(n);
  for (const auto& [level, rows] : levels) {
    const double m = static_cast<double>(rows.size());
    Column vals;
    vals.reserve(rows.size());
    for (std::size_t i : rows) vals.push_back(x[i]);
    std::sort(vals.begin(), vals.end());
    for (std::size_t i : rows) {
      const auto lo = std::lower_bound(vals.begin(), vals.end(), x[i]);
      const auto hi = std::upper_bound(vals.begin(), vals.end(), x[i]);
      const double f_left = static_cast<double>(lo - vals.begin()) / m;
      const double f = static_cast<double>(hi - vals.begin()) / m;
      const double u = rng::derive(rng_seed, i).uniform();
      out[i] = (1.0 - u) * f_left + u * f;
    }
  }
  return out;
}

double tied_pair_fraction(const Column& x) {
  const std::size_t n = x.size();
  if (n < 2) return 0.0;
  Column sorted(x);
  std::sort(sorted.begin(), sorted.end());
  double tied = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && sorted[j + 1] == sorted[i]) ++j;
    const double m = static_cast<double>(j - i + 1);
    tied += 0.5 * m * (m - 1.0);
    i = j + 1;
  }
  return tied / (0.5 * static_cast<double>(n) * static_cast<double>(n - 1));
}

namespace {

ColMatrix gather(const Dataset& data, const std::vector<std::size_t>& idx) {
  ColMatrix m;
  for (std::size_t c : idx) m.push_col(data.columns[c]);
  return m;
}

}  // namespace

TransformedSample transform_continuous(const Dataset& data,
                                       const std::vector<std::size_t>& x_idx,
                                       const std::vector<std::size_t>& y_idx,
                                       const std::vector<std::size_t>& z_idx,
                                       const BandwidthPolicy& policy,
                                       const KernelSpec& spec) {
  const ColMatrix xblock = gather(data, x_idx);
  const ColMatrix yblock = gather(data, y_idx);
  const ColMatrix zblock = gather(data, z_idx);

  TransformedSample ts;
  for (std::size_t c : x_idx) {
    const double frac = tied_pair_fraction(data.columns[c]);
    if (frac > 0.01)
      ts.meta.warnings.push_back("column " + data.names[c] + ": " +
                                 std::to_string(100.0 * frac) +
                                 "% of pairs tie; continuous theory assumes "
                                 "tie-free data");
  }
  for (std::size_t c : y_idx) {
    const double frac = tied_pair_fraction(data.columns[c]);
    if (frac > 0.01)
      ts.meta.warnings.push_back("column " + data.names[c] + ": " +
                                 std::to_string(100.0 * frac) +
                                 "% of pairs tie; continuous theory assumes "
                                 "tie-free data");
  }

  auto u_chain = rosenblatt_chain(xblock, zblock, policy, spec);
  auto v_chain = rosenblatt_chain(yblock, zblock, policy, spec);
  ts.u = std::move(u_chain.transformed);
  ts.v = std::move(v_chain.transformed);
  ts.meta.u_stages = std::move(u_chain.stages);
  ts.meta.v_stages = std::move(v_chain.stages);
  if (!z_idx.empty()) {
    auto w_chain = rosenblatt_chain(zblock, ColMatrix{}, policy, spec);
    ts.w = std::move(w_chain.transformed);
    ts.meta.w_stages = std::move(w_chain.stages);
  }
  return ts;
}

TransformedSample transform_discrete(const Dataset& data, std::size_t x_idx,
                                     std::size_t y_idx,
                                     std::optional<std::size_t> z_idx,
                                     std::uint64_t seed) {
  const Column& x = data.columns[x_idx];
  const Column& y = data.columns[y_idx];
  static const Column kEmpty;
  const Column& z = z_idx ? data.columns[*z_idx] : kEmpty;

  TransformedSample ts;
  ts.meta.discrete = true;
  ts.meta.seed = seed;
  ts.u.push_col(discrete_randomized_pit(x, z, rng::derive_seed(seed, rng::kPitX)));
  ts.v.push_col(discrete_randomized_pit(y, z, rng::derive_seed(seed, rng::kPitY)));
  if (z_idx)
    ts.w.push_col(
        discrete_randomized_pit(z, kEmpty, rng::derive_seed(seed, rng::kPitZ)));
  return ts;
}

}  // namespace cit
