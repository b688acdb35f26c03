#include "tsphen/featlib.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "tsphen/dft.hpp"
#include "tsphen/preprocess.hpp"
#include "tsphen/stats.hpp"

namespace tsphen {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ScoredValue guard_finite(double value) {
    if (!std::isfinite(value)) return failed(QualityCode::NOT_FINITE);
    return scored(value);
}

NamedOutputs all_failed(const std::vector<std::string>& names, QualityCode code) {
    NamedOutputs out;
    out.reserve(names.size());
    for (const auto& n : names) out.emplace_back(n, failed(code));
    return out;
}

// Degenerate for extraction purposes: literally constant, or so nearly so
// that the variance underflows to zero (z-scoring would divide by zero).
bool no_variation(std::span<const double> x) {
    return x.size() < 2 || stats::is_constant(x) || stats::sample_stddev(x) == 0.0;
}

}  // namespace

ScoredValue scored(double value) { return {value, QualityCode::OK}; }

ScoredValue failed(QualityCode code) { return {kNaN, code}; }

// ---------------------------------------------------------------------------
// Distribution
// ---------------------------------------------------------------------------

NamedOutputs feat_distribution(std::span<const double> x) {
    static const std::vector<std::string> names = {
        "mean", "std",  "skewness",           "excess_kurtosis",
        "median", "iqr", "outlier_range_ratio", "frac_abs_z_gt2"};
    if (x.size() < 4) return all_failed(names, QualityCode::TOO_SHORT);

    std::vector<double> sorted(x.begin(), x.end());
    std::sort(sorted.begin(), sorted.end());

    NamedOutputs out;
    out.emplace_back("mean", guard_finite(stats::mean(x)));
    out.emplace_back("std", guard_finite(stats::sample_stddev(x)));

    const bool constant = no_variation(x);
    if (constant) {
        out.emplace_back("skewness", failed(QualityCode::DEGENERATE_INPUT));
        out.emplace_back("excess_kurtosis", failed(QualityCode::DEGENERATE_INPUT));
    } else {
        const double m2 = stats::central_moment(x, 2);
        const double m3 = stats::central_moment(x, 3);
        const double m4 = stats::central_moment(x, 4);
        out.emplace_back("skewness", guard_finite(m3 / std::pow(m2, 1.5)));
        out.emplace_back("excess_kurtosis", guard_finite(m4 / (m2 * m2) - 3.0));
    }

    out.emplace_back("median", guard_finite(stats::quantile_sorted(sorted, 0.5)));
    const double iqr =
        stats::quantile_sorted(sorted, 0.75) - stats::quantile_sorted(sorted, 0.25);

    if (constant) {
        out.emplace_back("iqr", failed(QualityCode::DEGENERATE_INPUT));
        out.emplace_back("outlier_range_ratio", failed(QualityCode::DEGENERATE_INPUT));
        out.emplace_back("frac_abs_z_gt2", failed(QualityCode::DEGENERATE_INPUT));
    } else {
        out.emplace_back("iqr", guard_finite(iqr));
        const double spread99 =
            stats::quantile_sorted(sorted, 0.99) - stats::quantile_sorted(sorted, 0.01);
        out.emplace_back("outlier_range_ratio", guard_finite(spread99 / iqr));
        const auto z = zscore(x);
        const auto hits = std::count_if(z.begin(), z.end(),
                                        [](double v) { return std::abs(v) > 2.0; });
        out.emplace_back("frac_abs_z_gt2",
                         scored(static_cast<double>(hits) / static_cast<double>(x.size())));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Autocorrelation
// ---------------------------------------------------------------------------

namespace {

// Biased-normalization ACF at lag k: sum_{t} d_t d_{t+k} / sum_t d_t^2.
double acf_at(std::span<const double> x, double mu, double denom, std::size_t k) {
    double num = 0.0;
    for (std::size_t t = 0; t + k < x.size(); ++t)
        num += (x[t] - mu) * (x[t + k] - mu);
    return num / denom;
}

}  // namespace

NamedOutputs feat_autocorr(std::span<const double> x, int max_lag) {
    if (max_lag < 1) throw std::invalid_argument("feat_autocorr: max_lag must be >= 1");
    std::vector<std::string> names;
    for (int k = 1; k <= max_lag; ++k) names.push_back("acf_" + std::to_string(k));
    names.emplace_back("first_zero_lag");
    names.emplace_back("first_1e_lag");
    if (max_lag >= 10) names.emplace_back("sum_sq_acf10");

    const std::size_t n = x.size();
    if (n < static_cast<std::size_t>(max_lag) + 2)
        return all_failed(names, QualityCode::TOO_SHORT);
    if (no_variation(x)) return all_failed(names, QualityCode::DEGENERATE_INPUT);

    const double mu = stats::mean(x);
    double denom = 0.0;
    for (double v : x) denom += (v - mu) * (v - mu);

    std::vector<double> acf(static_cast<std::size_t>(max_lag) + 1, 1.0);
    for (int k = 1; k <= max_lag; ++k)
        acf[static_cast<std::size_t>(k)] = acf_at(x, mu, denom, static_cast<std::size_t>(k));

    const auto first_below = [&](double threshold) -> double {
        for (std::size_t k = 1; k < n; ++k) {
            const double value = k <= static_cast<std::size_t>(max_lag)
                                     ? acf[k]
                                     : acf_at(x, mu, denom, k);
            if (value < threshold) return static_cast<double>(k);
        }
        return static_cast<double>(n);
    };

    NamedOutputs out;
    for (int k = 1; k <= max_lag; ++k)
        out.emplace_back("acf_" + std::to_string(k),
                         guard_finite(acf[static_cast<std::size_t>(k)]));
    out.emplace_back("first_zero_lag", scored(first_below(0.0)));
    out.emplace_back("first_1e_lag", scored(first_below(std::exp(-1.0))));
    if (max_lag >= 10) {
        double ss = 0.0;
        for (int k = 1; k <= 10; ++k) ss += acf[static_cast<std::size_t>(k)] * acf[static_cast<std::size_t>(k)];
        out.emplace_back("sum_sq_acf10", guard_finite(ss));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Spectral
// ---------------------------------------------------------------------------

NamedOutputs feat_spectral(std::span<const double> x) {
    static const std::vector<std::string> names = {
        "spectral_flatness", "spectral_centroid",  "power_low_third",
        "power_mid_third",   "power_high_third",   "peak_freq_index_fraction"};
    const std::size_t n = x.size();
    if (n < 16) return all_failed(names, QualityCode::TOO_SHORT);
    if (no_variation(x)) return all_failed(names, QualityCode::DEGENERATE_INPUT);

    const auto z = zscore(x);
    const auto power = dft::periodogram_positive(z);
    const std::size_t nbins = power.size();

    double total = 0.0;
    double log_sum = 0.0;
    double centroid_num = 0.0;
    std::size_t peak = 0;
    for (std::size_t k = 0; k < nbins; ++k) {
        total += power[k];
        log_sum += std::log(power[k]);
        centroid_num += (static_cast<double>(k + 1) / static_cast<double>(n)) * power[k];
        if (power[k] > power[peak]) peak = k;
    }
    if (total <= 0.0) return all_failed(names, QualityCode::DEGENERATE_INPUT);

    const double flatness =
        std::exp(log_sum / static_cast<double>(nbins)) / (total / static_cast<double>(nbins));

    const std::size_t lo_end = nbins / 3;        // bins 1..lo_end
    const std::size_t mid_end = (2 * nbins) / 3; // bins lo_end+1..mid_end
    double low = 0.0, mid = 0.0, high = 0.0;
    for (std::size_t k = 0; k < nbins; ++k) {
        if (k + 1 <= lo_end)
            low += power[k];
        else if (k + 1 <= mid_end)
            mid += power[k];
        else
            high += power[k];
    }

    NamedOutputs out;
    out.emplace_back("spectral_flatness", guard_finite(flatness));
    out.emplace_back("spectral_centroid", guard_finite(centroid_num / total));
    out.emplace_back("power_low_third", guard_finite(low / total));
    out.emplace_back("power_mid_third", guard_finite(mid / total));
    out.emplace_back("power_high_third", guard_finite(high / total));
    out.emplace_back("peak_freq_index_fraction",
                     scored(static_cast<double>(peak + 1) / static_cast<double>(nbins)));
    return out;
}

// ---------------------------------------------------------------------------
// Entropy
// ---------------------------------------------------------------------------

std::vector<double> coarse_grain(std::span<const double> x, int scale) {
    if (scale < 1) throw std::invalid_argument("coarse_grain: scale must be >= 1");
    const auto s = static_cast<std::size_t>(scale);
    if (x.size() < s) throw TooShortError("coarse_grain: series shorter than scale");
    if (s == 1) return {x.begin(), x.end()};
    const std::size_t blocks = x.size() / s;
    std::vector<double> out(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
        double acc = 0.0;
        for (std::size_t i = 0; i < s; ++i) acc += x[b * s + i];
        out[b] = acc / static_cast<double>(s);
    }
    return out;
}

ScoredValue sample_entropy_tolerance(std::span<const double> x, int m, double r_abs) {
    if (m < 1) throw std::invalid_argument("sample_entropy: m must be >= 1");
    const std::size_t n = x.size();
    const auto mm = static_cast<std::size_t>(m);
    if (n < mm + 2) return failed(QualityCode::TOO_SHORT);

    const std::size_t n_templates = n - mm;  // shared basis for m and m+1
    std::uint64_t count_m = 0;
    std::uint64_t count_m1 = 0;
    for (std::size_t i = 0; i + 1 < n_templates; ++i) {
        for (std::size_t j = i + 1; j < n_templates; ++j) {
            bool match = true;
            for (std::size_t k = 0; k < mm; ++k) {
                if (std::abs(x[i + k] - x[j + k]) > r_abs) {
                    match = false;
                    break;
                }
            }
            if (!match) continue;
            ++count_m;
            if (std::abs(x[i + mm] - x[j + mm]) <= r_abs) ++count_m1;
        }
    }
    if (count_m == 0 || count_m1 == 0) return failed(QualityCode::NO_CONVERGENCE);
    return scored(-std::log(static_cast<double>(count_m1) / static_cast<double>(count_m)));
}

ScoredValue sample_entropy(std::span<const double> x, int m, double r_frac) {
    if (r_frac <= 0.0) throw std::invalid_argument("sample_entropy: r_frac must be > 0");
    if (x.size() < static_cast<std::size_t>(m) + 2) return failed(QualityCode::TOO_SHORT);
    if (no_variation(x)) return failed(QualityCode::DEGENERATE_INPUT);
    return sample_entropy_tolerance(x, m, r_frac * stats::sample_stddev(x));
}

NamedOutputs feat_multiscale_entropy(std::span<const double> x, const std::vector<int>& scales,
                                     int m, double r_frac) {
    NamedOutputs out;
    const std::size_t n = x.size();
    const auto need = [&](int scale) {
        return static_cast<std::size_t>(scale) * (static_cast<std::size_t>(m) + 2);
    };

    const bool constant = n > 1 && no_variation(x);
    double r_abs = 0.0;
    if (!constant && n >= 2) r_abs = r_frac * stats::sample_stddev(x);

    for (int scale : scales) {
        const std::string name = "sampen_scale" + std::to_string(scale);
        if (scale < 1 || n < need(scale)) {
            out.emplace_back(name, failed(QualityCode::TOO_SHORT));
        } else if (constant) {
            out.emplace_back(name, failed(QualityCode::DEGENERATE_INPUT));
        } else {
            out.emplace_back(name, sample_entropy_tolerance(coarse_grain(x, scale), m, r_abs));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Detrended fluctuation analysis
// ---------------------------------------------------------------------------

namespace {

// Geometric grid of `count` integer window sizes spanning [lo, hi],
// duplicates removed.
std::vector<std::size_t> geometric_sizes(std::size_t lo, std::size_t hi, int count) {
    std::vector<std::size_t> sizes;
    const double llo = std::log(static_cast<double>(lo));
    const double lhi = std::log(static_cast<double>(hi));
    for (int i = 0; i < count; ++i) {
        const double f = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
        auto s = static_cast<std::size_t>(std::llround(std::exp(llo + f * (lhi - llo))));
        s = std::clamp(s, lo, hi);
        if (sizes.empty() || s != sizes.back()) sizes.push_back(s);
    }
    return sizes;
}

// Sum of squared residuals of an order-1 least-squares fit to y over local
// abscissa t = 0..len-1.
double linear_detrend_rss(std::span<const double> y) {
    const auto n = static_cast<double>(y.size());
    double st = 0.0, stt = 0.0, sy = 0.0, sty = 0.0;
    for (std::size_t t = 0; t < y.size(); ++t) {
        const auto td = static_cast<double>(t);
        st += td;
        stt += td * td;
        sy += y[t];
        sty += td * y[t];
    }
    const double det = n * stt - st * st;
    const double slope = (n * sty - st * sy) / det;
    const double intercept = (sy - slope * st) / n;
    double rss = 0.0;
    for (std::size_t t = 0; t < y.size(); ++t) {
        const double r = y[t] - (intercept + slope * static_cast<double>(t));
        rss += r * r;
    }
    return rss;
}

}  // namespace

NamedOutputs feat_dfa(std::span<const double> x) {
    static const std::vector<std::string> names = {"dfa_alpha", "dfa_fit_residual"};
    const std::size_t n = x.size();
    if (n < 64) return all_failed(names, QualityCode::TOO_SHORT);
    if (no_variation(x)) return all_failed(names, QualityCode::DEGENERATE_INPUT);

    const double mu = stats::mean(x);
    std::vector<double> profile(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += x[i] - mu;
        profile[i] = acc;
    }

    std::vector<double> log_s, log_f;
    for (std::size_t s : geometric_sizes(4, n / 4, 10)) {
        const std::size_t windows = n / s;
        double rss = 0.0;
        for (std::size_t w = 0; w < windows; ++w)
            rss += linear_detrend_rss(std::span<const double>(profile).subspan(w * s, s));
        const double fluct = std::sqrt(rss / static_cast<double>(windows * s));
        if (fluct > 0.0 && std::isfinite(fluct)) {
            log_s.push_back(std::log(static_cast<double>(s)));
            log_f.push_back(std::log(fluct));
        }
    }
    if (log_s.size() < 2) return all_failed(names, QualityCode::NO_CONVERGENCE);

    const double ms = stats::mean(log_s);
    const double mf = stats::mean(log_f);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < log_s.size(); ++i) {
        sxx += (log_s[i] - ms) * (log_s[i] - ms);
        sxy += (log_s[i] - ms) * (log_f[i] - mf);
    }
    const double alpha = sxy / sxx;
    const double intercept = mf - alpha * ms;
    double rss = 0.0;
    for (std::size_t i = 0; i < log_s.size(); ++i) {
        const double r = log_f[i] - (intercept + alpha * log_s[i]);
        rss += r * r;
    }
    const double fit_residual = std::sqrt(rss / static_cast<double>(log_s.size()));

    NamedOutputs out;
    out.emplace_back("dfa_alpha", guard_finite(alpha));
    out.emplace_back("dfa_fit_residual", guard_finite(fit_residual));
    return out;
}

// ---------------------------------------------------------------------------
// Autoregressive model fitting
// ---------------------------------------------------------------------------

namespace {

// Levinson-Durbin on the normalized autocorrelation rho[0..p]; the
// innovation variance v_p is then directly the residual/series variance
// ratio. Returns fits for every order 1..p_max, or nothing when a
// reflection coefficient reaches unit magnitude.
std::optional<std::vector<ArFit>> levinson_all_orders(const std::vector<double>& rho,
                                                      std::size_t p_max) {
    std::vector<ArFit> fits;
    std::vector<double> coeffs(p_max + 1, 0.0);
    std::vector<double> prev(p_max + 1, 0.0);
    double v = 1.0;
    for (std::size_t p = 1; p <= p_max; ++p) {
        double k_num = rho[p];
        for (std::size_t j = 1; j < p; ++j) k_num -= prev[j] * rho[p - j];
        const double k = k_num / v;
        if (1.0 - std::abs(k) <= 1e-12) return std::nullopt;
        coeffs[p] = k;
        for (std::size_t j = 1; j < p; ++j) coeffs[j] = prev[j] - k * prev[p - j];
        v *= (1.0 - k * k);
        ArFit fit;
        fit.coeffs.assign(coeffs.begin() + 1, coeffs.begin() + static_cast<long>(p) + 1);
        fit.resid_var_ratio = v;
        fits.push_back(std::move(fit));
        prev = coeffs;
    }
    return fits;
}

std::optional<std::vector<ArFit>> ar_fits_through(std::span<const double> x,
                                                  std::size_t p_max) {
    const auto z = zscore(x);
    double denom = 0.0;
    for (double v : z) denom += v * v;
    std::vector<double> rho(p_max + 1, 1.0);
    for (std::size_t k = 1; k <= p_max; ++k) rho[k] = acf_at(z, 0.0, denom, k);
    return levinson_all_orders(rho, p_max);
}

}  // namespace

std::optional<ArFit> ar_yule_walker(std::span<const double> x, int order) {
    if (order < 1) throw std::invalid_argument("ar_yule_walker: order must be >= 1");
    auto fits = ar_fits_through(x, static_cast<std::size_t>(order));
    if (!fits) return std::nullopt;
    return std::move(fits->back());
}

NamedOutputs feat_ar(std::span<const double> x, int max_order) {
    if (max_order < 2) throw std::invalid_argument("feat_ar: max_order must be >= 2");
    static const std::vector<std::string> names = {
        "ar2_coef1", "ar2_coef2", "ar2_resid_var_ratio", "ar_best_order_aic",
        "ar_best_resid_var_ratio"};
    const std::size_t n = x.size();
    if (n < 20) return all_failed(names, QualityCode::TOO_SHORT);
    if (no_variation(x)) return all_failed(names, QualityCode::DEGENERATE_INPUT);

    const auto p_max = static_cast<std::size_t>(max_order);
    const auto fits = ar_fits_through(x, p_max);
    if (!fits) return all_failed(names, QualityCode::NO_CONVERGENCE);

    std::size_t best = 1;
    double best_aic = std::numeric_limits<double>::infinity();
    for (std::size_t p = 1; p <= p_max; ++p) {
        const double aic = static_cast<double>(n) * std::log((*fits)[p - 1].resid_var_ratio) +
                           2.0 * static_cast<double>(p);
        if (aic < best_aic) {
            best_aic = aic;
            best = p;
        }
    }
    const ArFit& ar2 = (*fits)[1];

    NamedOutputs out;
    out.emplace_back("ar2_coef1", guard_finite(ar2.coeffs[0]));
    out.emplace_back("ar2_coef2", guard_finite(ar2.coeffs[1]));
    out.emplace_back("ar2_resid_var_ratio", guard_finite(ar2.resid_var_ratio));
    out.emplace_back("ar_best_order_aic", scored(static_cast<double>(best)));
    out.emplace_back("ar_best_resid_var_ratio",
                     guard_finite((*fits)[best - 1].resid_var_ratio));
    return out;
}

// ---------------------------------------------------------------------------
// Local mean forecasting
// ---------------------------------------------------------------------------

NamedOutputs feat_local_forecast(std::span<const double> x, const std::vector<int>& windows) {
    std::vector<std::string> names;
    for (int l : windows) names.push_back("localmean_nmse_l" + std::to_string(l));
    const std::size_t n = x.size();
    if (n < 20) return all_failed(names, QualityCode::TOO_SHORT);
    if (no_variation(x)) return all_failed(names, QualityCode::DEGENERATE_INPUT);

    const double variance = stats::sample_variance(x);
    NamedOutputs out;
    for (std::size_t wi = 0; wi < windows.size(); ++wi) {
        const auto l = static_cast<std::size_t>(windows[wi]);
        if (windows[wi] < 1 || l + 1 > n) {
            out.emplace_back(names[wi], failed(QualityCode::TOO_SHORT));
            continue;
        }
        double sse = 0.0;
        std::size_t count = 0;
        for (std::size_t t = l; t < n; ++t) {
            double window_sum = 0.0;
            for (std::size_t k = t - l; k < t; ++k) window_sum += x[k];
            const double err = x[t] - window_sum / static_cast<double>(l);
            sse += err * err;
            ++count;
        }
        out.emplace_back(names[wi], guard_finite(sse / static_cast<double>(count) / variance));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Stationarity
// ---------------------------------------------------------------------------

NamedOutputs feat_stationarity(std::span<const double> x) {
    static const std::vector<std::string> names = {"statav5", "sliding_mean_std_ratio",
                                                   "sliding_std_std_ratio"};
    const std::size_t n = x.size();
    if (n < 25) return all_failed(names, QualityCode::TOO_SHORT);
    if (no_variation(x)) return all_failed(names, QualityCode::DEGENERATE_INPUT);

    const double global_sd = stats::sample_stddev(x);

    const std::size_t seg = n / 5;
    std::vector<double> seg_means(5);
    for (std::size_t i = 0; i < 5; ++i)
        seg_means[i] = stats::mean(x.subspan(i * seg, seg));
    const double statav5 = stats::sample_stddev(seg_means) / global_sd;

    const std::size_t w = n / 10;
    const std::size_t nw = n / w;
    std::vector<double> local_means(nw), local_sds(nw);
    for (std::size_t i = 0; i < nw; ++i) {
        const auto window = x.subspan(i * w, w);
        local_means[i] = stats::mean(window);
        local_sds[i] = stats::sample_stddev(window);
    }

    NamedOutputs out;
    out.emplace_back("statav5", guard_finite(statav5));
    out.emplace_back("sliding_mean_std_ratio",
                     guard_finite(stats::sample_stddev(local_means) / global_sd));
    out.emplace_back("sliding_std_std_ratio",
                     guard_finite(stats::sample_stddev(local_sds) / global_sd));
    return out;
}

// ---------------------------------------------------------------------------
// Increments
// ---------------------------------------------------------------------------

NamedOutputs feat_increments(std::span<const double> x) {
    static const std::vector<std::string> names = {"std_diff_z", "mean_abs_diff_z",
                                                   "diff_var_ratio"};
    if (x.size() < 3) return all_failed(names, QualityCode::TOO_SHORT);
    if (no_variation(x)) return all_failed(names, QualityCode::DEGENERATE_INPUT);

    const auto z = zscore(x);
    std::vector<double> diff(z.size() - 1);
    for (std::size_t i = 0; i + 1 < z.size(); ++i) diff[i] = z[i + 1] - z[i];

    double abs_sum = 0.0;
    for (double d : diff) abs_sum += std::abs(d);

    NamedOutputs out;
    out.emplace_back("std_diff_z", guard_finite(stats::sample_stddev(diff)));
    out.emplace_back("mean_abs_diff_z",
                     guard_finite(abs_sum / static_cast<double>(diff.size())));
    out.emplace_back("diff_var_ratio",
                     guard_finite(stats::sample_variance(diff) / stats::sample_variance(z)));
    return out;
}

// ---------------------------------------------------------------------------
// Outlier timing
// ---------------------------------------------------------------------------

NamedOutputs feat_outlier_timing(std::span<const double> x, double threshold_z) {
    static const std::vector<std::string> names = {"n_events_frac", "mean_interevent",
                                                   "max_interevent"};
    const std::size_t n = x.size();
    if (n < 10) return all_failed(names, QualityCode::TOO_SHORT);
    if (no_variation(x)) return all_failed(names, QualityCode::DEGENERATE_INPUT);

    const auto z = zscore(x);
    std::vector<std::size_t> events;
    for (std::size_t i = 0; i < z.size(); ++i)
        if (std::abs(z[i]) > threshold_z) events.push_back(i);

    NamedOutputs out;
    out.emplace_back("n_events_frac",
                     scored(static_cast<double>(events.size()) / static_cast<double>(n)));
    if (events.size() < 2) {
        // no-event ceiling
        out.emplace_back("mean_interevent", scored(static_cast<double>(n)));
        out.emplace_back("max_interevent", scored(static_cast<double>(n)));
        return out;
    }
    double gap_sum = 0.0;
    double gap_max = 0.0;
    for (std::size_t i = 1; i < events.size(); ++i) {
        const auto gap = static_cast<double>(events[i] - events[i - 1]);
        gap_sum += gap;
        gap_max = std::max(gap_max, gap);
    }
    out.emplace_back("mean_interevent",
                     scored(gap_sum / static_cast<double>(events.size() - 1)));
    out.emplace_back("max_interevent", scored(gap_max));
    return out;
}

// ---------------------------------------------------------------------------
// Haar wavelet energy
// ---------------------------------------------------------------------------

NamedOutputs feat_wavelet(std::span<const double> x) {
    static const std::vector<std::string> names = {
        "haar_energy_frac_level1", "haar_energy_frac_level2", "haar_energy_frac_level3",
        "haar_energy_frac_level4"};
    const std::size_t n = x.size();
    if (n < 32) return all_failed(names, QualityCode::TOO_SHORT);
    if (no_variation(x)) return all_failed(names, QualityCode::DEGENERATE_INPUT);

    std::size_t p = 1;
    while (p * 2 <= n) p *= 2;

    std::vector<double> approx(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(p));
    const double mu = stats::mean(approx);
    double total = 0.0;
    for (auto& v : approx) {
        v -= mu;
        total += v * v;
    }
    if (total <= 0.0) return all_failed(names, QualityCode::DEGENERATE_INPUT);

    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    NamedOutputs out;
    for (int level = 1; level <= 4; ++level) {
        const std::size_t half = approx.size() / 2;
        double detail_energy = 0.0;
        std::vector<double> next(half);
        for (std::size_t j = 0; j < half; ++j) {
            const double a = approx[2 * j];
            const double b = approx[2 * j + 1];
            const double d = (a - b) * inv_sqrt2;
            next[j] = (a + b) * inv_sqrt2;
            detail_energy += d * d;
        }
        out.emplace_back(names[static_cast<std::size_t>(level - 1)],
                         guard_finite(detail_energy / total));
        approx = std::move(next);
    }
    return out;
}

}  // namespace tsphen
