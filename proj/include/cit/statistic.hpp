#pragma once

#include <cmath>
#include <vector>

#include "cit/common.hpp"
#include "cit/transforms.hpp"

namespace cit {

// Normalization constant of the univariate index:
//   c0^-1 = 13 e^-3 - 40 e^-2 + 13 e^-1.
inline const double k_c0_inv =
    13.0 * std::exp(-3.0) - 40.0 * std::exp(-2.0) + 13.0 * std::exp(-1.0);
inline const double k_c0 = 1.0 / k_c0_inv;

// Degenerate pair kernel on [0,1]^2:
//   s0(a,b) = e^-|a-b| + e^-a + e^(a-1) + e^-b + e^(b-1) + 2e^-1 - 4.
double s0(double u1, double u2);

// prod_k (2 - e^(-u_k) - e^(u_k - 1)); the marginal mean of e^-|u_k - U'|
// under an independent uniform U', multiplied across coordinates.
double s_marginal_product(const std::vector<double>& u_row);

struct StatisticValue {
  double value = 0.0;
  std::size_t n = 0;
  Dims dims{};
  bool normalized = false;
};

// n^-2 sum_{i,j} A_ij B_ij exp(-||w_i - w_j||_1) where
//   A_ij = exp(-||u_i-u_j||_1) + (2/e)^p - sprod(u_i) - sprod(u_j)
// and B_ij is the analogue for v. This is the shared V-statistic core for
// both the normalized univariate index and the multivariate statistic.
// The pairwise double sum is reduced over fixed row blocks so results do
// not depend on the worker count.
double vstat_conditional(const ColMatrix& u, const ColMatrix& v,
                         const ColMatrix& w);

// Same with the w factor replaced by 1.
double vstat_unconditional(const ColMatrix& u, const ColMatrix& v);

// Univariate normalized index: c0 * vstat core on (U, V, W).
StatisticValue rho_hat(const TransformedSample& ts);

// Unnormalized moment-estimator variant (univariate):
//   c0 { n^-2 sum_{i,j} e^(-|dU|-|dV|-|dW|) + 8e^-3
//        - 2 n^-1 sum_i (2-e^-U-e^(U-1))(...V)(...W) }.
StatisticValue rho0_hat(const TransformedSample& ts);

// Multivariate statistic; no normalizing constant is applied.
StatisticValue rho_hat_multi(const TransformedSample& ts);

// Unconditional variant used at PC depth zero.
StatisticValue rho_hat_unconditional(const ColMatrix& u, const ColMatrix& v);

}  // namespace cit
