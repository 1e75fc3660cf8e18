#pragma once

#include <cstdint>

#include "aed/stats/tests.hpp"

namespace aed::stats {

double normal_quantile(double p);
double f_quantile(double p, double df1, double df2);

/// CDF of the range of k i.i.d. standard normals (studentized range with
/// infinite denominator degrees of freedom).
double studentized_range_cdf(double q, int k);
double studentized_range_quantile(double p, int k);

/// Uncorrected large-sample threshold a naive design would compare the
/// oriented statistic against: z quantiles for the t family, the F quantile
/// with (K-1, N-K) degrees of freedom for ANOVA, and the studentized range
/// quantile divided by sqrt(2) for the best-arm gaps.
double classical_threshold(const TestSpec& spec, int arms, std::int64_t total_draws, double alpha);

}  // namespace aed::stats
