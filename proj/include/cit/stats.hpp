#pragma once

#include <cstddef>
#include <vector>

#include "cit/common.hpp"

namespace cit {

double mean(const Column& x);

// Sample standard deviation (n-1 denominator).
double sample_sd(const Column& x);

double pearson_corr(const Column& x, const Column& y);

// Midranks in 1..n (ties share the average rank).
Column midranks(const Column& x);

double spearman_corr(const Column& x, const Column& y);

// One-sample Kolmogorov-Smirnov distance against the uniform(0,1) CDF.
double ks_uniform(const Column& sample);

// Two-sample Kolmogorov-Smirnov distance.
double ks_two_sample(const Column& a, const Column& b);

// Standard normal CDF.
double normal_cdf(double x);

// Standard normal quantile; p must lie in (0,1).
double normal_quantile(double p);

}  // namespace cit
