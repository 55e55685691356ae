#pragma once

#include <span>
#include <vector>

namespace pmdep {

// P(chi^2_1 > v) = erfc(sqrt(v/2)). Absolute error <= 1e-12.
double chi2_1_sf(double v);

// Upper-tail standard normal critical value: z with P(N(0,1) > z) = alpha.
// Absolute error <= 1e-10.
double normal_quantile(double alpha);

// Cauchy combination of p-values: mean of tan((0.5 - p)*pi), mapped back
// through atan. Entries are clamped to [1e-15, 1-1e-15] first.
double cauchy_combine(std::span<const double> pvalues);

// Quantile aggregation over a gamma grid: for each gamma in a 100-point grid
// from gamma_min to 1, Q(gamma) = min{1, ceil(gamma*B)-th order statistic of
// {p_b/gamma}}; returns min{1, (1 - log gamma_min) * min_gamma Q(gamma)}.
double quantile_combine(std::span<const double> pvalues, double gamma_min = 0.05);

} // namespace pmdep
