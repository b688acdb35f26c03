#pragma once

#include <span>
#include <vector>

namespace tsphen::stats {

double sum(std::span<const double> x);
double mean(std::span<const double> x);

/// Unbiased sample variance (n-1 denominator), the single convention used
/// project-wide wherever a standard deviation is named. Requires n >= 2.
double sample_variance(std::span<const double> x);
double sample_stddev(std::span<const double> x);

/// k-th central moment with the n denominator (population convention), as
/// used by the skewness/kurtosis definitions.
double central_moment(std::span<const double> x, int k);

/// Linear-interpolation quantile between order statistics ("type 7"):
/// h = (n-1)p, result interpolates x_(floor h) and x_(floor h + 1).
/// `sorted` must be ascending and non-empty; p in [0, 1].
double quantile_sorted(std::span<const double> sorted, double p);

/// quantile_sorted on a sorting copy of x.
double quantile(std::span<const double> x, double p);
double median(std::span<const double> x);
double interquartile_range(std::span<const double> x);

bool all_finite(std::span<const double> x);

/// True when every value equals the first (bitwise comparison semantics of
/// operator==; a NaN anywhere makes the sequence non-constant).
bool is_constant(std::span<const double> x);

/// Ranks 1..n with tied values assigned the average of their rank range.
std::vector<double> ranks_average_ties(std::span<const double> x);

/// Pearson correlation; requires both inputs non-constant.
double pearson(std::span<const double> x, std::span<const double> y);

/// Spearman rank correlation with average tie handling.
double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace tsphen::stats
