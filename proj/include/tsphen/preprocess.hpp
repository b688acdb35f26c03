#pragma once

#include <optional>
#include <span>
#include <vector>

#include "tsphen/types.hpp"

namespace tsphen {

/// Centers and scales to sample mean 0 and sample (n-1 denominator)
/// standard deviation 1. Throws TooShortError for n < 2 and
/// DegenerateInputError when the input has no variation.
std::vector<double> zscore(std::span<const double> values);

struct ValidationReport {
    std::size_t length = 0;
    bool all_finite = true;
    bool constant = false;
};

/// Report-only inspection of a series; never mutates or throws.
ValidationReport validate(const TimeSeries& series);

enum class TrimReject {
    interior_missing,
    too_much_missing,
    multiple_blocks,
};

const char* to_string(TrimReject reason);

struct TrimResult {
    std::vector<double> values;   // populated only on acceptance
    std::optional<TrimReject> rejected;

    bool ok() const { return !rejected.has_value(); }
};

/// Removes a single contiguous block of missing markers (NaN) touching the
/// start or end of the series, provided the block is shorter than
/// max_fraction of the total length. Anything else is rejected with a
/// reason. The accepted output never contains a missing marker.
TrimResult trim_missing(std::span<const double> values, double max_fraction = 0.15);

}  // namespace tsphen
