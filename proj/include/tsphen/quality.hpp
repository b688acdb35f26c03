#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tsphen/featlib.hpp"

namespace tsphen {

/// Why a feature column was removed before analysis.
enum class RemovalReason {
    HAS_SPECIAL,  // at least one cell has a non-OK quality code
    CONSTANT,     // sample std <= 1e-12 * max(1, |mean|)
    ZERO_IQR,     // interquartile range collapsed; sigmoid scale undefined
};

const char* to_string(RemovalReason reason);

/// Outcome of column filtration. `kept_feature_ids` preserves input column
/// order; every input column appears in exactly one of kept/removed.
struct FilterReport {
    std::vector<std::string> kept_feature_ids;
    std::vector<std::pair<std::string, RemovalReason>> removed;
};

/// Flags columns that are unusable for analysis: any special-valued cell, or
/// a column that is constant to within 1e-12 relative. Throws
/// EmptyResultError when nothing survives.
FilterReport filter_features(const FeatureMatrix& matrix);

/// Feature matrix after unit-interval normalization: same labels, every
/// value strictly inside (0, 1), no quality channel (only OK cells enter).
struct NormalizedMatrix {
    std::vector<std::string> series_ids;
    std::vector<std::string> feature_ids;
    std::vector<double> values;  // row-major rows x cols

    std::size_t rows() const { return series_ids.size(); }
    std::size_t cols() const { return feature_ids.size(); }
    double value(std::size_t row, std::size_t col) const { return values[row * cols() + col]; }
    std::vector<double> column(std::size_t col) const;
    std::vector<double> row(std::size_t r) const;
};

struct NormalizeResult {
    NormalizedMatrix matrix;
    /// Columns dropped because their interquartile range was zero.
    std::vector<std::string> zero_iqr_dropped;
};

/// Outlier-robust unit-interval normalization, column-independent:
///   f_hat = 1 / (1 + exp(-(f - m_f) / (1.35 * r_f)))
/// with m_f the column median and r_f its interquartile range
/// (linear-interpolation quantiles). Zero-IQR columns are dropped and
/// reported. Saturated outputs are nudged to the nearest representable
/// value inside (0, 1) so the open-interval invariant holds even for
/// extreme inputs.
///
/// `fit_rows`, when given, restricts the rows used to estimate m_f and r_f
/// (all rows are still transformed). This is the train-only fitting mode
/// for leakage-sensitive protocols; the default fits on all rows.
NormalizeResult normalize_sigmoid(
    const FeatureMatrix& matrix,
    std::optional<std::span<const std::size_t>> fit_rows = std::nullopt);

}  // namespace tsphen
