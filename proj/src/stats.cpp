#include "tsphen/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tsphen::stats {

double sum(std::span<const double> x) {
    return std::accumulate(x.begin(), x.end(), 0.0);
}

double mean(std::span<const double> x) {
    if (x.empty()) throw std::invalid_argument("mean: empty input");
    return sum(x) / static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 2) throw std::invalid_argument("sample_variance: need n >= 2");
    const double mu = mean(x);
    double ss = 0.0;
    for (double v : x) {
        const double d = v - mu;
        ss += d * d;
    }
    return ss / static_cast<double>(n - 1);
}

double sample_stddev(std::span<const double> x) {
    return std::sqrt(sample_variance(x));
}

double central_moment(std::span<const double> x, int k) {
    if (x.empty()) throw std::invalid_argument("central_moment: empty input");
    const double mu = mean(x);
    double acc = 0.0;
    for (double v : x) acc += std::pow(v - mu, k);
    return acc / static_cast<double>(x.size());
}

double quantile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty()) throw std::invalid_argument("quantile: empty input");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("quantile: p outside [0, 1]");
    const std::size_t n = sorted.size();
    const double h = static_cast<double>(n - 1) * p;
    const auto lo = static_cast<std::size_t>(h);
    const double frac = h - static_cast<double>(lo);
    if (lo + 1 >= n || frac == 0.0) return sorted[lo];
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double quantile(std::span<const double> x, double p) {
    std::vector<double> copy(x.begin(), x.end());
    std::sort(copy.begin(), copy.end());
    return quantile_sorted(copy, p);
}

double median(std::span<const double> x) {
    return quantile(x, 0.5);
}

double interquartile_range(std::span<const double> x) {
    std::vector<double> copy(x.begin(), x.end());
    std::sort(copy.begin(), copy.end());
    return quantile_sorted(copy, 0.75) - quantile_sorted(copy, 0.25);
}

bool all_finite(std::span<const double> x) {
    return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

bool is_constant(std::span<const double> x) {
    if (x.empty()) return true;
    return std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; });
}

std::vector<double> ranks_average_ties(std::span<const double> x) {
    const std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
        // positions i..j share the value; average rank is 1-based
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("pearson: size mismatch or too short");
    const double mx = mean(x);
    const double my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw std::invalid_argument("pearson: constant input");
    return sxy / std::sqrt(sxx * syy);
}

double spearman(std::span<const double> x, std::span<const double> y) {
    const auto rx = ranks_average_ties(x);
    const auto ry = ranks_average_ties(y);
    return pearson(rx, ry);
}

}  // namespace tsphen::stats
