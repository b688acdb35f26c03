#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tsphen/types.hpp"

namespace tsphen {

/// Methodological family a feature belongs to; doubles as the dispatch key
/// selecting the extractor that produces the feature's named output.
enum class Family {
    DIST,
    AUTOCORR,
    SPECTRAL,
    ENTROPY,
    SCALING,
    MODEL,
    FORECAST,
    STATIONARITY,
    INCREMENT,
    OUTLIER,
    WAVELET,
};

const char* to_string(Family family);
std::optional<Family> family_from_string(const std::string& name);

/// A feature value together with its quality code. The value is finite
/// exactly when quality is OK; failed cells carry NaN.
struct ScoredValue {
    double value;
    QualityCode quality = QualityCode::OK;

    bool ok() const { return quality == QualityCode::OK; }
};

ScoredValue scored(double value);
ScoredValue failed(QualityCode code);

/// Ordered (name, value) results of one extractor run.
using NamedOutputs = std::vector<std::pair<std::string, ScoredValue>>;

using ParamMap = std::map<std::string, double>;

// ---------------------------------------------------------------------------
// Extractors. Every extractor is a pure function: identical input yields
// bit-identical output. Data problems (too short, constant, no template
// matches, ...) are reported through quality codes, never thrown.
// ---------------------------------------------------------------------------

/// Value-distribution summaries: mean, std, skewness, excess_kurtosis,
/// median, iqr, outlier_range_ratio ((p99-p1)/(p75-p25)), frac_abs_z_gt2.
NamedOutputs feat_distribution(std::span<const double> x);

/// Autocorrelation structure with the biased (1/N) normalization:
/// acf_1..acf_max_lag, first_zero_lag, first_1e_lag, sum_sq_acf10.
/// The two first-crossing lags scan the full ACF and report N when the
/// threshold is never crossed.
NamedOutputs feat_autocorr(std::span<const double> x, int max_lag = 10);

/// Periodogram summaries of the z-scored series (rectangular window, DC bin
/// excluded): spectral_flatness, spectral_centroid, power_low_third,
/// power_mid_third, power_high_third, peak_freq_index_fraction.
NamedOutputs feat_spectral(std::span<const double> x);

/// Non-overlapping block means of `scale` consecutive points; a trailing
/// remainder shorter than `scale` is discarded. scale = 1 returns the input.
std::vector<double> coarse_grain(std::span<const double> x, int scale);

/// SampEn(m, r) with r = r_frac * sample std of x. Template pairs are
/// counted over i < j with Chebyshev distance <= r; both the length-m and
/// length-(m+1) counts use the first N-m templates so they share a basis.
/// Returns NO_CONVERGENCE when either count is zero.
ScoredValue sample_entropy(std::span<const double> x, int m = 2, double r_frac = 0.15);

/// SampEn(m, r_abs) with an absolute tolerance (used by the multiscale
/// variant, which fixes r from the original series).
ScoredValue sample_entropy_tolerance(std::span<const double> x, int m, double r_abs);

/// SampEn of the coarse-grained series at each scale, with the tolerance r
/// computed once from the std of the original series. Failures are
/// per-scale; one bad scale does not fail the rest.
NamedOutputs feat_multiscale_entropy(std::span<const double> x,
                                     const std::vector<int>& scales = {1, 2, 3, 4, 5},
                                     int m = 2, double r_frac = 0.15);

/// Detrended fluctuation analysis: dfa_alpha (log-log slope of the RMS
/// fluctuation of the mean-centered cumulative profile over a geometric
/// grid of ~10 window sizes in [4, N/4], order-1 detrending,
/// non-overlapping windows) and dfa_fit_residual (RMS residual of the
/// log-log fit).
NamedOutputs feat_dfa(std::span<const double> x);

/// One autoregressive fit: coefficients phi_1..phi_p of
/// x_t = phi_1 x_{t-1} + ... + phi_p x_{t-p} + e_t on the z-scored series,
/// plus the innovation/series variance ratio in (0, 1].
struct ArFit {
    std::vector<double> coeffs;
    double resid_var_ratio = 1.0;
};

/// Yule-Walker AR(p) fit (biased autocorrelation, Levinson-Durbin solve) of
/// the z-scored series. Returns nullopt when a reflection coefficient
/// reaches 1 in magnitude within 1e-12 (numerically singular system).
std::optional<ArFit> ar_yule_walker(std::span<const double> x, int order);

/// Autoregressive fits of the z-scored series by Yule-Walker equations
/// solved with the Levinson-Durbin recursion: ar2_coef1, ar2_coef2,
/// ar2_resid_var_ratio, ar_best_order_aic, ar_best_resid_var_ratio
/// (best order by minimum AIC = N ln(resid_var) + 2p over p = 1..max_order).
NamedOutputs feat_ar(std::span<const double> x, int max_order = 8);

/// Local-mean forecasting: predict x_t by the mean of the previous `l`
/// points; localmean_nmse_l{l} = mean squared error / series variance.
NamedOutputs feat_local_forecast(std::span<const double> x,
                                 const std::vector<int>& windows = {1, 3, 5});

/// Stationarity indices: statav5 (std of 5 segment means / global std) and
/// std-of-local-means / std-of-local-stds over non-overlapping windows of
/// length floor(N/10), each divided by the global std.
NamedOutputs feat_stationarity(std::span<const double> x);

/// Summaries of successive increments of the z-scored series: std_diff_z,
/// mean_abs_diff_z, diff_var_ratio.
NamedOutputs feat_increments(std::span<const double> x);

/// Timing of threshold-crossing events (|z| > threshold_z): n_events_frac,
/// mean_interevent, max_interevent. With fewer than two events both
/// intervals are set to N, the no-event ceiling, and quality stays OK.
NamedOutputs feat_outlier_timing(std::span<const double> x, double threshold_z = 2.0);

/// Orthonormal Haar wavelet energy fractions haar_energy_frac_level1..4,
/// computed on the series truncated (from the end) to a power-of-two length
/// and mean-removed. Level 1 is the finest detail scale.
NamedOutputs feat_wavelet(std::span<const double> x);

// ---------------------------------------------------------------------------
// Catalog and feature matrix
// ---------------------------------------------------------------------------

/// One catalog entry: a single scalar feature, identified by a stable id,
/// produced by the `family` extractor run with `params` and selected by
/// `output`.
struct FeatureSpec {
    std::string feature_id;
    Family family = Family::DIST;
    std::string output;
    ParamMap params;
    std::size_t min_length = 0;  // 0 = derive the family minimum on load
    std::string description;
};

/// Output names the family extractor produces for the given parameters.
std::vector<std::string> family_output_names(Family family, const ParamMap& params);

/// The family's minimum input length for the given parameters.
std::size_t family_min_length(Family family, const ParamMap& params);

/// Runs the family extractor with explicit parameters.
NamedOutputs run_family(Family family, const ParamMap& params, std::span<const double> x);

/// Ordered, validated registry of feature definitions. Catalog order fixes
/// feature-matrix column order.
class FeatureCatalog {
  public:
    FeatureCatalog() = default;

    /// Throws ConfigError on duplicate ids, unknown outputs, or bad params.
    explicit FeatureCatalog(std::vector<FeatureSpec> specs);

    /// The built-in 55-feature catalog covering every extractor output at
    /// its default parameters.
    static FeatureCatalog defaults();

    const std::vector<FeatureSpec>& specs() const { return specs_; }
    std::size_t size() const { return specs_.size(); }
    bool empty() const { return specs_.empty(); }
    std::vector<std::string> feature_ids() const;

  private:
    std::vector<FeatureSpec> specs_;
};

/// The series-by-feature table of extracted values plus one quality code
/// per cell. Rows follow dataset order, columns follow catalog order.
struct FeatureMatrix {
    std::vector<std::string> series_ids;
    std::vector<std::string> feature_ids;
    std::vector<double> values;        // row-major rows x cols
    std::vector<QualityCode> quality;  // same shape

    FeatureMatrix() = default;
    FeatureMatrix(std::vector<std::string> series, std::vector<std::string> features);

    std::size_t rows() const { return series_ids.size(); }
    std::size_t cols() const { return feature_ids.size(); }

    double value(std::size_t row, std::size_t col) const { return values[row * cols() + col]; }
    QualityCode quality_at(std::size_t row, std::size_t col) const {
        return quality[row * cols() + col];
    }
    void set(std::size_t row, std::size_t col, ScoredValue cell);

    std::vector<double> column(std::size_t col) const;
    bool column_all_ok(std::size_t col) const;

    /// Copy restricted to the named columns, in the given order.
    FeatureMatrix restrict_columns(const std::vector<std::string>& ids) const;

    bool operator==(const FeatureMatrix& other) const;
};

/// Fills every (series, feature) cell. Extractor failures become quality
/// codes; the batch never aborts. The result is bit-identical for any
/// thread count because each cell is a pure function of its inputs and is
/// written to a fixed slot.
FeatureMatrix extract_all(const Dataset& dataset, const FeatureCatalog& catalog,
                          int threads = 1);

}  // namespace tsphen
