#include "tsphen/quality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tsphen/stats.hpp"

namespace tsphen {

const char* to_string(RemovalReason reason) {
    switch (reason) {
        case RemovalReason::HAS_SPECIAL: return "HAS_SPECIAL";
        case RemovalReason::CONSTANT: return "CONSTANT";
        case RemovalReason::ZERO_IQR: return "ZERO_IQR";
    }
    return "?";
}

FilterReport filter_features(const FeatureMatrix& matrix) {
    if (matrix.rows() == 0 || matrix.cols() == 0)
        throw std::invalid_argument("filter_features: empty matrix");

    FilterReport report;
    for (std::size_t c = 0; c < matrix.cols(); ++c) {
        const auto& id = matrix.feature_ids[c];
        if (!matrix.column_all_ok(c)) {
            report.removed.emplace_back(id, RemovalReason::HAS_SPECIAL);
            continue;
        }
        const auto column = matrix.column(c);
        const double sd = column.size() < 2 ? 0.0 : stats::sample_stddev(column);
        const double mu = stats::mean(column);
        if (sd <= 1e-12 * std::max(1.0, std::abs(mu))) {
            report.removed.emplace_back(id, RemovalReason::CONSTANT);
            continue;
        }
        report.kept_feature_ids.push_back(id);
    }
    if (report.kept_feature_ids.empty())
        throw EmptyResultError("filter_features: every column was removed");
    return report;
}

std::vector<double> NormalizedMatrix::column(std::size_t col) const {
    std::vector<double> out(rows());
    for (std::size_t r = 0; r < rows(); ++r) out[r] = value(r, col);
    return out;
}

std::vector<double> NormalizedMatrix::row(std::size_t r) const {
    return {values.begin() + static_cast<long>(r * cols()),
            values.begin() + static_cast<long>((r + 1) * cols())};
}

namespace {

// smallest step into the open interval; keeps the (0,1) invariant when the
// sigmoid saturates in double precision
double clamp_open_unit(double v) {
    if (v <= 0.0) return std::numeric_limits<double>::min();
    if (v >= 1.0) return std::nextafter(1.0, 0.0);
    return v;
}

}  // namespace

NormalizeResult normalize_sigmoid(const FeatureMatrix& matrix,
                                  std::optional<std::span<const std::size_t>> fit_rows) {
    if (matrix.rows() == 0 || matrix.cols() == 0)
        throw std::invalid_argument("normalize_sigmoid: empty matrix");
    for (std::size_t i = 0; i < matrix.quality.size(); ++i)
        if (matrix.quality[i] != QualityCode::OK)
            throw std::invalid_argument(
                "normalize_sigmoid: input must be restricted to all-OK columns");
    if (fit_rows) {
        if (fit_rows->empty())
            throw std::invalid_argument("normalize_sigmoid: fit_rows must be non-empty");
        for (const auto r : *fit_rows)
            if (r >= matrix.rows())
                throw std::invalid_argument("normalize_sigmoid: fit_rows out of range");
    }

    NormalizeResult result;
    result.matrix.series_ids = matrix.series_ids;

    std::vector<std::size_t> kept_cols;
    std::vector<std::pair<double, double>> center_scale;  // (m_f, 1.35 r_f)
    for (std::size_t c = 0; c < matrix.cols(); ++c) {
        std::vector<double> fit_values;
        if (fit_rows) {
            fit_values.reserve(fit_rows->size());
            for (const auto r : *fit_rows) fit_values.push_back(matrix.value(r, c));
        } else {
            fit_values = matrix.column(c);
        }
        std::sort(fit_values.begin(), fit_values.end());
        const double m_f = stats::quantile_sorted(fit_values, 0.5);
        const double r_f = stats::quantile_sorted(fit_values, 0.75) -
                           stats::quantile_sorted(fit_values, 0.25);
        if (r_f <= 0.0) {
            result.zero_iqr_dropped.push_back(matrix.feature_ids[c]);
            continue;
        }
        kept_cols.push_back(c);
        center_scale.emplace_back(m_f, 1.35 * r_f);
        result.matrix.feature_ids.push_back(matrix.feature_ids[c]);
    }
    if (kept_cols.empty())
        throw EmptyResultError("normalize_sigmoid: every column had zero IQR");

    result.matrix.values.resize(matrix.rows() * kept_cols.size());
    for (std::size_t r = 0; r < matrix.rows(); ++r) {
        for (std::size_t j = 0; j < kept_cols.size(); ++j) {
            const auto [m_f, scale] = center_scale[j];
            const double f = matrix.value(r, kept_cols[j]);
            const double v = 1.0 / (1.0 + std::exp(-(f - m_f) / scale));
            result.matrix.values[r * kept_cols.size() + j] = clamp_open_unit(v);
        }
    }
    return result;
}

}  // namespace tsphen
