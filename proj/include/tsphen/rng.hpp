#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>

namespace tsphen::rng {

/// Small counter-free generator (Steele et al.'s splitmix64 step). Used for
/// every randomized procedure in the library so that results are identical
/// across platforms and standard library versions; std:: distributions are
/// implementation-defined and would break frozen expected values.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    /// Unbiased uniform integer in [0, bound) via rejection sampling.
    std::uint64_t next_below(std::uint64_t bound);

    /// Standard normal via Box-Muller on two fresh uniforms.
    double next_gaussian();

  private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Hash-combines stream identifiers into one 64-bit seed, so independent
/// substreams can be derived per (seed, feature, permutation) and results
/// stay schedule-independent under parallel evaluation.
std::uint64_t mix(std::initializer_list<std::uint64_t> parts);

/// Fisher-Yates shuffle driven by the portable generator.
template <typename T>
void shuffle(std::span<T> items, SplitMix64& gen) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(gen.next_below(i));
        std::swap(items[i - 1], items[j]);
    }
}

}  // namespace tsphen::rng
