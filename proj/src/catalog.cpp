#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "tsphen/featlib.hpp"
#include "tsphen/stats.hpp"

namespace tsphen {

namespace {

int param_int(const ParamMap& params, const std::string& key, int fallback) {
    auto it = params.find(key);
    if (it == params.end()) return fallback;
    const double v = it->second;
    if (!std::isfinite(v) || v != std::floor(v))
        throw ConfigError("parameter '" + key + "' must be an integer, got " +
                          std::to_string(v));
    return static_cast<int>(v);
}

double param_real(const ParamMap& params, const std::string& key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

}  // namespace

const char* to_string(Family family) {
    switch (family) {
        case Family::DIST: return "DIST";
        case Family::AUTOCORR: return "AUTOCORR";
        case Family::SPECTRAL: return "SPECTRAL";
        case Family::ENTROPY: return "ENTROPY";
        case Family::SCALING: return "SCALING";
        case Family::MODEL: return "MODEL";
        case Family::FORECAST: return "FORECAST";
        case Family::STATIONARITY: return "STATIONARITY";
        case Family::INCREMENT: return "INCREMENT";
        case Family::OUTLIER: return "OUTLIER";
        case Family::WAVELET: return "WAVELET";
    }
    return "?";
}

std::optional<Family> family_from_string(const std::string& name) {
    static const std::unordered_map<std::string, Family> table = {
        {"DIST", Family::DIST},
        {"AUTOCORR", Family::AUTOCORR},
        {"SPECTRAL", Family::SPECTRAL},
        {"ENTROPY", Family::ENTROPY},
        {"SCALING", Family::SCALING},
        {"MODEL", Family::MODEL},
        {"FORECAST", Family::FORECAST},
        {"STATIONARITY", Family::STATIONARITY},
        {"INCREMENT", Family::INCREMENT},
        {"OUTLIER", Family::OUTLIER},
        {"WAVELET", Family::WAVELET},
    };
    auto it = table.find(name);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

std::vector<std::string> family_output_names(Family family, const ParamMap& params) {
    switch (family) {
        case Family::DIST:
            return {"mean",  "std", "skewness",            "excess_kurtosis",
                    "median", "iqr", "outlier_range_ratio", "frac_abs_z_gt2"};
        case Family::AUTOCORR: {
            const int max_lag = param_int(params, "max_lag", 10);
            std::vector<std::string> names;
            for (int k = 1; k <= max_lag; ++k) names.push_back("acf_" + std::to_string(k));
            names.emplace_back("first_zero_lag");
            names.emplace_back("first_1e_lag");
            if (max_lag >= 10) names.emplace_back("sum_sq_acf10");
            return names;
        }
        case Family::SPECTRAL:
            return {"spectral_flatness", "spectral_centroid", "power_low_third",
                    "power_mid_third",   "power_high_third",  "peak_freq_index_fraction"};
        case Family::ENTROPY:
            return {"sampen_scale" + std::to_string(param_int(params, "scale", 1))};
        case Family::SCALING:
            return {"dfa_alpha", "dfa_fit_residual"};
        case Family::MODEL:
            return {"ar2_coef1", "ar2_coef2", "ar2_resid_var_ratio", "ar_best_order_aic",
                    "ar_best_resid_var_ratio"};
        case Family::FORECAST:
            return {"localmean_nmse_l" + std::to_string(param_int(params, "window", 1))};
        case Family::STATIONARITY:
            return {"statav5", "sliding_mean_std_ratio", "sliding_std_std_ratio"};
        case Family::INCREMENT:
            return {"std_diff_z", "mean_abs_diff_z", "diff_var_ratio"};
        case Family::OUTLIER:
            return {"n_events_frac", "mean_interevent", "max_interevent"};
        case Family::WAVELET:
            return {"haar_energy_frac_level1", "haar_energy_frac_level2",
                    "haar_energy_frac_level3", "haar_energy_frac_level4"};
    }
    return {};
}

std::size_t family_min_length(Family family, const ParamMap& params) {
    switch (family) {
        case Family::DIST: return 4;
        case Family::AUTOCORR:
            return static_cast<std::size_t>(param_int(params, "max_lag", 10)) + 2;
        case Family::SPECTRAL: return 16;
        case Family::ENTROPY: {
            const auto scale = static_cast<std::size_t>(param_int(params, "scale", 1));
            const auto m = static_cast<std::size_t>(param_int(params, "m", 2));
            return scale * (m + 2);
        }
        case Family::SCALING: return 64;
        case Family::MODEL: return 20;
        case Family::FORECAST: return 20;
        case Family::STATIONARITY: return 25;
        case Family::INCREMENT: return 3;
        case Family::OUTLIER: return 10;
        case Family::WAVELET: return 32;
    }
    return 1;
}

NamedOutputs run_family(Family family, const ParamMap& params, std::span<const double> x) {
    switch (family) {
        case Family::DIST:
            return feat_distribution(x);
        case Family::AUTOCORR:
            return feat_autocorr(x, param_int(params, "max_lag", 10));
        case Family::SPECTRAL:
            return feat_spectral(x);
        case Family::ENTROPY:
            return feat_multiscale_entropy(x, {param_int(params, "scale", 1)},
                                           param_int(params, "m", 2),
                                           param_real(params, "r_frac", 0.15));
        case Family::SCALING:
            return feat_dfa(x);
        case Family::MODEL:
            return feat_ar(x, param_int(params, "max_order", 8));
        case Family::FORECAST:
            return feat_local_forecast(x, {param_int(params, "window", 1)});
        case Family::STATIONARITY:
            return feat_stationarity(x);
        case Family::INCREMENT:
            return feat_increments(x);
        case Family::OUTLIER:
            return feat_outlier_timing(x, param_real(params, "threshold_z", 2.0));
        case Family::WAVELET:
            return feat_wavelet(x);
    }
    throw std::logic_error("run_family: unhandled family");
}

// ---------------------------------------------------------------------------
// FeatureCatalog
// ---------------------------------------------------------------------------

FeatureCatalog::FeatureCatalog(std::vector<FeatureSpec> specs) : specs_(std::move(specs)) {
    std::vector<std::string> seen;
    for (auto& spec : specs_) {
        if (spec.feature_id.empty()) throw ConfigError("catalog: empty feature_id");
        if (std::find(seen.begin(), seen.end(), spec.feature_id) != seen.end())
            throw ConfigError("catalog: duplicate feature_id '" + spec.feature_id + "'");
        seen.push_back(spec.feature_id);

        const auto names = family_output_names(spec.family, spec.params);
        if (std::find(names.begin(), names.end(), spec.output) == names.end())
            throw ConfigError("catalog: feature '" + spec.feature_id + "' selects output '" +
                              spec.output + "' which family " + to_string(spec.family) +
                              " does not produce");
        const std::size_t need = family_min_length(spec.family, spec.params);
        if (spec.min_length == 0) spec.min_length = need;
        if (spec.min_length < need)
            throw ConfigError("catalog: feature '" + spec.feature_id + "' min_length " +
                              std::to_string(spec.min_length) + " below family minimum " +
                              std::to_string(need));
    }
}

std::vector<std::string> FeatureCatalog::feature_ids() const {
    std::vector<std::string> ids;
    ids.reserve(specs_.size());
    for (const auto& spec : specs_) ids.push_back(spec.feature_id);
    return ids;
}

FeatureCatalog FeatureCatalog::defaults() {
    std::vector<FeatureSpec> specs;
    const auto add = [&specs](std::string id, Family family, std::string output,
                              ParamMap params, std::string description) {
        FeatureSpec spec;
        spec.feature_id = std::move(id);
        spec.family = family;
        spec.output = std::move(output);
        spec.params = std::move(params);
        spec.min_length = family_min_length(family, spec.params);
        spec.description = std::move(description);
        specs.push_back(std::move(spec));
    };

    add("dist.mean", Family::DIST, "mean", {}, "Arithmetic mean of the raw values");
    add("dist.std", Family::DIST, "std", {},
        "Sample standard deviation (n-1 denominator)");
    add("dist.skewness", Family::DIST, "skewness", {},
        "Moment skewness m3 / m2^1.5 of the value distribution");
    add("dist.excess_kurtosis", Family::DIST, "excess_kurtosis", {},
        "Moment kurtosis m4 / m2^2 minus 3");
    add("dist.median", Family::DIST, "median", {}, "Median of the raw values");
    add("dist.iqr", Family::DIST, "iqr", {}, "Interquartile range p75 - p25");
    add("dist.outlier_range_ratio", Family::DIST, "outlier_range_ratio", {},
        "(p99 - p1) / (p75 - p25), heaviness of tails relative to the bulk");
    add("dist.frac_abs_z_gt2", Family::DIST, "frac_abs_z_gt2", {},
        "Fraction of points more than 2 standard deviations from the mean");

    for (int k = 1; k <= 10; ++k)
        add("autocorr.acf_" + std::to_string(k), Family::AUTOCORR,
            "acf_" + std::to_string(k), {{"max_lag", 10}},
            "Autocorrelation at lag " + std::to_string(k) + " (biased normalization)");
    add("autocorr.first_zero_lag", Family::AUTOCORR, "first_zero_lag", {{"max_lag", 10}},
        "Smallest lag where the autocorrelation drops below zero (N if never)");
    add("autocorr.first_1e_lag", Family::AUTOCORR, "first_1e_lag", {{"max_lag", 10}},
        "Smallest lag where the autocorrelation drops below 1/e (N if never)");
    add("autocorr.sum_sq_acf10", Family::AUTOCORR, "sum_sq_acf10", {{"max_lag", 10}},
        "Sum of squared autocorrelations over lags 1..10");

    add("spectral.flatness", Family::SPECTRAL, "spectral_flatness", {},
        "Geometric / arithmetic mean of the periodogram (1 = white)");
    add("spectral.centroid", Family::SPECTRAL, "spectral_centroid", {},
        "Power-weighted mean frequency of the periodogram");
    add("spectral.power_low_third", Family::SPECTRAL, "power_low_third", {},
        "Fraction of spectral power in the lowest third of frequencies");
    add("spectral.power_mid_third", Family::SPECTRAL, "power_mid_third", {},
        "Fraction of spectral power in the middle third of frequencies");
    add("spectral.power_high_third", Family::SPECTRAL, "power_high_third", {},
        "Fraction of spectral power in the highest third of frequencies");
    add("spectral.peak_freq_index_fraction", Family::SPECTRAL, "peak_freq_index_fraction",
        {}, "Location of the periodogram maximum as a fraction of the band");

    for (int s = 1; s <= 5; ++s)
        add("entropy.sampen_m2_r015_scale" + std::to_string(s), Family::ENTROPY,
            "sampen_scale" + std::to_string(s),
            {{"m", 2}, {"r_frac", 0.15}, {"scale", static_cast<double>(s)}},
            "Sample entropy (m=2, r=0.15 std) of the scale-" + std::to_string(s) +
                " coarse-grained series");

    add("scaling.dfa_alpha", Family::SCALING, "dfa_alpha", {},
        "Detrended fluctuation analysis scaling exponent");
    add("scaling.dfa_fit_residual", Family::SCALING, "dfa_fit_residual", {},
        "RMS residual of the DFA log-log fit (goodness of the power law)");

    add("model.ar2_coef1", Family::MODEL, "ar2_coef1", {{"max_order", 8}},
        "First coefficient of the Yule-Walker AR(2) fit to the z-scored series");
    add("model.ar2_coef2", Family::MODEL, "ar2_coef2", {{"max_order", 8}},
        "Second coefficient of the Yule-Walker AR(2) fit to the z-scored series");
    add("model.ar2_resid_var_ratio", Family::MODEL, "ar2_resid_var_ratio",
        {{"max_order", 8}}, "AR(2) innovation variance over series variance");
    add("model.ar_best_order_aic", Family::MODEL, "ar_best_order_aic", {{"max_order", 8}},
        "AR order (1..8) minimizing AIC");
    add("model.ar_best_resid_var_ratio", Family::MODEL, "ar_best_resid_var_ratio",
        {{"max_order", 8}}, "Innovation variance ratio of the AIC-best AR order");

    for (int l : {1, 3, 5})
        add("forecast.localmean_nmse_l" + std::to_string(l), Family::FORECAST,
            "localmean_nmse_l" + std::to_string(l), {{"window", static_cast<double>(l)}},
            "Normalized MSE of predicting each point by the mean of the previous " +
                std::to_string(l) + " points");

    add("stationarity.statav5", Family::STATIONARITY, "statav5", {},
        "Std of the means of 5 equal segments, over the global std");
    add("stationarity.sliding_mean_std_ratio", Family::STATIONARITY,
        "sliding_mean_std_ratio", {},
        "Std of local window means over the global std (window = N/10)");
    add("stationarity.sliding_std_std_ratio", Family::STATIONARITY,
        "sliding_std_std_ratio", {},
        "Std of local window stds over the global std (window = N/10)");

    add("increment.std_diff_z", Family::INCREMENT, "std_diff_z", {},
        "Standard deviation of successive differences of the z-scored series");
    add("increment.mean_abs_diff_z", Family::INCREMENT, "mean_abs_diff_z", {},
        "Mean absolute successive difference of the z-scored series");
    add("increment.diff_var_ratio", Family::INCREMENT, "diff_var_ratio", {},
        "Variance of successive differences over the variance of the series");

    add("outlier.n_events_frac", Family::OUTLIER, "n_events_frac", {{"threshold_z", 2}},
        "Fraction of points beyond 2 standard deviations");
    add("outlier.mean_interevent", Family::OUTLIER, "mean_interevent", {{"threshold_z", 2}},
        "Mean interval between threshold-crossing events (N when < 2 events)");
    add("outlier.max_interevent", Family::OUTLIER, "max_interevent", {{"threshold_z", 2}},
        "Longest interval between threshold-crossing events (N when < 2 events)");

    for (int lvl = 1; lvl <= 4; ++lvl)
        add("wavelet.haar_energy_frac_level" + std::to_string(lvl), Family::WAVELET,
            "haar_energy_frac_level" + std::to_string(lvl), {},
            "Fraction of energy in Haar detail level " + std::to_string(lvl) +
                " (1 = finest)");

    return FeatureCatalog(std::move(specs));
}

// ---------------------------------------------------------------------------
// FeatureMatrix
// ---------------------------------------------------------------------------

FeatureMatrix::FeatureMatrix(std::vector<std::string> series, std::vector<std::string> features)
    : series_ids(std::move(series)),
      feature_ids(std::move(features)),
      values(series_ids.size() * feature_ids.size(),
             std::numeric_limits<double>::quiet_NaN()),
      quality(series_ids.size() * feature_ids.size(), QualityCode::NOT_FINITE) {}

void FeatureMatrix::set(std::size_t row, std::size_t col, ScoredValue cell) {
    values[row * cols() + col] = cell.value;
    quality[row * cols() + col] = cell.quality;
}

std::vector<double> FeatureMatrix::column(std::size_t col) const {
    std::vector<double> out(rows());
    for (std::size_t r = 0; r < rows(); ++r) out[r] = value(r, col);
    return out;
}

bool FeatureMatrix::column_all_ok(std::size_t col) const {
    for (std::size_t r = 0; r < rows(); ++r)
        if (quality_at(r, col) != QualityCode::OK) return false;
    return true;
}

FeatureMatrix FeatureMatrix::restrict_columns(const std::vector<std::string>& ids) const {
    FeatureMatrix out(series_ids, ids);
    for (std::size_t j = 0; j < ids.size(); ++j) {
        const auto it = std::find(feature_ids.begin(), feature_ids.end(), ids[j]);
        if (it == feature_ids.end())
            throw std::invalid_argument("restrict_columns: unknown feature id '" + ids[j] +
                                        "'");
        const auto src = static_cast<std::size_t>(it - feature_ids.begin());
        for (std::size_t r = 0; r < rows(); ++r)
            out.set(r, j, {value(r, src), quality_at(r, src)});
    }
    return out;
}

bool FeatureMatrix::operator==(const FeatureMatrix& other) const {
    if (series_ids != other.series_ids || feature_ids != other.feature_ids ||
        quality != other.quality)
        return false;
    // NaN-tolerant cellwise comparison: failed cells all carry NaN.
    for (std::size_t i = 0; i < values.size(); ++i) {
        const bool both_nan = std::isnan(values[i]) && std::isnan(other.values[i]);
        if (!both_nan && values[i] != other.values[i]) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Batch extraction
// ---------------------------------------------------------------------------

namespace {

// Catalog entries sharing (family, params) run their extractor once per
// series; each entry then picks its named output from the result.
struct ExtractorGroup {
    Family family;
    ParamMap params;
    // (output index within the extractor result, catalog column)
    std::vector<std::pair<std::size_t, std::size_t>> selections;
};

std::vector<ExtractorGroup> plan_groups(const FeatureCatalog& catalog) {
    std::vector<ExtractorGroup> groups;
    for (std::size_t col = 0; col < catalog.size(); ++col) {
        const auto& spec = catalog.specs()[col];
        auto it = std::find_if(groups.begin(), groups.end(), [&](const ExtractorGroup& g) {
            return g.family == spec.family && g.params == spec.params;
        });
        if (it == groups.end()) {
            groups.push_back({spec.family, spec.params, {}});
            it = std::prev(groups.end());
        }
        const auto names = family_output_names(spec.family, spec.params);
        const auto pos = std::find(names.begin(), names.end(), spec.output);
        it->selections.emplace_back(static_cast<std::size_t>(pos - names.begin()), col);
    }
    return groups;
}

}  // namespace

FeatureMatrix extract_all(const Dataset& dataset, const FeatureCatalog& catalog,
                          int threads) {
    if (dataset.series.empty()) throw std::invalid_argument("extract_all: empty dataset");
    if (catalog.empty()) throw std::invalid_argument("extract_all: empty catalog");
    if (threads < 1) threads = 1;

    std::vector<std::string> series_ids;
    series_ids.reserve(dataset.series.size());
    for (const auto& s : dataset.series) series_ids.push_back(s.id);
    FeatureMatrix matrix(std::move(series_ids), catalog.feature_ids());

    const auto groups = plan_groups(catalog);
    const std::size_t n_tasks = dataset.series.size() * groups.size();

    const auto run_task = [&](std::size_t task) {
        const std::size_t row = task / groups.size();
        const ExtractorGroup& group = groups[task % groups.size()];
        const auto& x = dataset.series[row].values;

        NamedOutputs outputs;
        if (x.size() < family_min_length(group.family, group.params)) {
            for (const auto& name : family_output_names(group.family, group.params))
                outputs.emplace_back(name, failed(QualityCode::TOO_SHORT));
        } else if (!stats::all_finite(x)) {
            for (const auto& name : family_output_names(group.family, group.params))
                outputs.emplace_back(name, failed(QualityCode::NOT_FINITE));
        } else {
            outputs = run_family(group.family, group.params, x);
        }
        for (const auto& [output_idx, col] : group.selections)
            matrix.set(row, col, outputs[output_idx].second);
    };

    if (threads == 1 || n_tasks < 2) {
        for (std::size_t t = 0; t < n_tasks; ++t) run_task(t);
        return matrix;
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const auto worker = [&] {
        for (std::size_t t = next.fetch_add(1); t < n_tasks; t = next.fetch_add(1))
            run_task(t);
    };
    const auto n_threads = std::min<std::size_t>(static_cast<std::size_t>(threads), n_tasks);
    pool.reserve(n_threads);
    for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return matrix;
}

}  // namespace tsphen
