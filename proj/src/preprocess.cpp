#include "tsphen/preprocess.hpp"

#include <cmath>
#include <stdexcept>

#include "tsphen/stats.hpp"

namespace tsphen {

std::vector<double> zscore(std::span<const double> values) {
    if (values.size() < 2) throw TooShortError("zscore: need at least 2 values");
    if (stats::is_constant(values))
        throw DegenerateInputError("zscore: zero standard deviation");
    const double mu = stats::mean(values);
    const double sd = stats::sample_stddev(values);
    if (sd == 0.0) throw DegenerateInputError("zscore: zero standard deviation");
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - mu) / sd;
    return out;
}

ValidationReport validate(const TimeSeries& series) {
    ValidationReport report;
    report.length = series.values.size();
    report.all_finite = stats::all_finite(series.values);
    report.constant = !series.values.empty() && stats::is_constant(series.values);
    return report;
}

const char* to_string(TrimReject reason) {
    switch (reason) {
        case TrimReject::interior_missing: return "interior_missing";
        case TrimReject::too_much_missing: return "too_much_missing";
        case TrimReject::multiple_blocks: return "multiple_blocks";
    }
    return "unknown";
}

TrimResult trim_missing(std::span<const double> values, double max_fraction) {
    if (max_fraction <= 0.0 || max_fraction >= 1.0)
        throw std::invalid_argument("trim_missing: max_fraction must lie in (0, 1)");

    const std::size_t n = values.size();
    std::vector<std::pair<std::size_t, std::size_t>> runs;  // [begin, end)
    for (std::size_t i = 0; i < n;) {
        if (std::isnan(values[i])) {
            std::size_t j = i;
            while (j < n && std::isnan(values[j])) ++j;
            runs.emplace_back(i, j);
            i = j;
        } else {
            ++i;
        }
    }

    TrimResult result;
    if (runs.empty()) {
        result.values.assign(values.begin(), values.end());
        return result;
    }
    if (runs.size() > 1) {
        result.rejected = TrimReject::multiple_blocks;
        return result;
    }
    const auto [begin, end] = runs.front();
    if (begin != 0 && end != n) {
        result.rejected = TrimReject::interior_missing;
        return result;
    }
    const double fraction = static_cast<double>(end - begin) / static_cast<double>(n);
    if (fraction >= max_fraction) {
        result.rejected = TrimReject::too_much_missing;
        return result;
    }
    if (begin == 0)
        result.values.assign(values.begin() + static_cast<std::ptrdiff_t>(end), values.end());
    else
        result.values.assign(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(begin));
    return result;
}

}  // namespace tsphen
