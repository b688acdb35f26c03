#pragma once

#include <cstdint>
#include <vector>

#include "tsphen/rng.hpp"

namespace testutil {

inline std::vector<double> gaussian_noise(std::size_t n, std::uint64_t seed) {
    tsphen::rng::SplitMix64 gen(seed);
    std::vector<double> x(n);
    for (auto& v : x) v = gen.next_gaussian();
    return x;
}

inline std::vector<double> cumulative_sum(const std::vector<double>& x) {
    std::vector<double> out(x.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        acc += x[i];
        out[i] = acc;
    }
    return out;
}

inline std::vector<double> ramp(std::size_t n, double step = 1.0) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = step * static_cast<double>(i);
    return out;
}

/// AR(1) sample x_t = phi x_{t-1} + e_t with unit-variance innovations.
inline std::vector<double> ar1(std::size_t n, double phi, std::uint64_t seed) {
    tsphen::rng::SplitMix64 gen(seed);
    std::vector<double> x(n);
    double prev = 0.0;
    // burn-in so the start transient does not bias the fit
    for (int i = 0; i < 100; ++i) prev = phi * prev + gen.next_gaussian();
    for (std::size_t i = 0; i < n; ++i) {
        prev = phi * prev + gen.next_gaussian();
        x[i] = prev;
    }
    return x;
}

}  // namespace testutil
