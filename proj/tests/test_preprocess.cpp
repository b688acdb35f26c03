#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "tsphen/preprocess.hpp"
#include "tsphen/stats.hpp"

using namespace tsphen;

namespace {
const double kNaN = std::numeric_limits<double>::quiet_NaN();
}

TEST_CASE("zscore reference values") {
    const std::vector<double> x = {2, 4, 4, 4, 5, 5, 7, 9};
    const auto z = zscore(x);
    const std::vector<double> want = {-1.403121520040228,   -0.46770717334674267,
                                      -0.46770717334674267, -0.46770717334674267,
                                      0.0,                  0.0,
                                      0.9354143466934853,   1.8708286933869707};
    REQUIRE(z.size() == want.size());
    for (std::size_t i = 0; i < z.size(); ++i)
        CHECK(z[i] == doctest::Approx(want[i]).epsilon(1e-13));
}

TEST_CASE("zscore output has mean 0 and sample std 1") {
    const auto x = testutil::gaussian_noise(501, 8);
    const auto z = zscore(x);
    CHECK(std::abs(stats::mean(z)) < 1e-12);
    CHECK(stats::sample_stddev(z) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("zscore affine invariance for positive scale") {
    const auto x = testutil::gaussian_noise(200, 9);
    auto y = x;
    for (auto& v : y) v = 3.7 * v - 11.0;
    const auto zx = zscore(x);
    const auto zy = zscore(y);
    for (std::size_t i = 0; i < zx.size(); ++i)
        CHECK(zy[i] == doctest::Approx(zx[i]).epsilon(1e-9));
}

TEST_CASE("zscore error conditions") {
    CHECK_THROWS_AS((void)zscore(std::vector<double>{1.0}), TooShortError);
    CHECK_THROWS_AS((void)zscore(std::vector<double>{2.0, 2.0, 2.0}), DegenerateInputError);
}

TEST_CASE("validate reports, never throws") {
    TimeSeries flat{"flat", {1, 1, 1}, std::nullopt, std::nullopt};
    const auto r1 = validate(flat);
    CHECK(r1.length == 3);
    CHECK(r1.constant);
    CHECK(r1.all_finite);

    TimeSeries gappy{"gappy", {1, kNaN, 3}, std::nullopt, std::nullopt};
    const auto r2 = validate(gappy);
    CHECK(!r2.all_finite);
    CHECK(!r2.constant);

    TimeSeries empty{"empty", {}, std::nullopt, std::nullopt};
    CHECK(validate(empty).length == 0);
}

TEST_CASE("trim accepts a short leading gap") {
    std::vector<double> x = {kNaN, kNaN, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16,
                             17,   18,   19, 20};
    const auto r = trim_missing(x, 0.15);
    REQUIRE(r.ok());
    CHECK(r.values.size() == 18);
    CHECK(r.values.front() == 3);
    CHECK(r.values.back() == 20);
}

TEST_CASE("trim accepts a short trailing gap") {
    std::vector<double> x(20, 1.0);
    for (std::size_t i = 0; i < 18; ++i) x[i] = static_cast<double>(i);
    x[18] = kNaN;
    x[19] = kNaN;
    const auto r = trim_missing(x);
    REQUIRE(r.ok());
    CHECK(r.values.size() == 18);
    CHECK(r.values.back() == 17.0);
}

TEST_CASE("trim passes through complete series unchanged") {
    const std::vector<double> x = {1, 2, 3};
    const auto r = trim_missing(x);
    REQUIRE(r.ok());
    CHECK(r.values == x);
}

TEST_CASE("trim rejects interior gaps") {
    std::vector<double> x(40, 1.0);
    x[20] = kNaN;
    const auto r = trim_missing(x);
    REQUIRE(!r.ok());
    CHECK(*r.rejected == TrimReject::interior_missing);
}

TEST_CASE("trim rejects two gap blocks even when both touch ends") {
    std::vector<double> x(40, 1.0);
    x[0] = kNaN;
    x[39] = kNaN;
    const auto r = trim_missing(x);
    REQUIRE(!r.ok());
    CHECK(*r.rejected == TrimReject::multiple_blocks);
}

TEST_CASE("trim rejects gaps at or above the fraction limit") {
    // 3 of 20 missing = 15%, not strictly below the 0.15 limit
    std::vector<double> x(20, 1.0);
    x[0] = x[1] = x[2] = kNaN;
    const auto r = trim_missing(x, 0.15);
    REQUIRE(!r.ok());
    CHECK(*r.rejected == TrimReject::too_much_missing);

    // 2 of 20 = 10% passes
    std::vector<double> y(20, 1.0);
    y[0] = y[1] = kNaN;
    CHECK(trim_missing(y, 0.15).ok());
}

TEST_CASE("trim validates max_fraction") {
    const std::vector<double> x = {1, 2, 3};
    CHECK_THROWS_AS((void)trim_missing(x, 0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)trim_missing(x, 1.0), std::invalid_argument);
}
