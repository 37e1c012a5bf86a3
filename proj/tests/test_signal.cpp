#include "fsosnr/error.hpp"
#include "fsosnr/signal.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <numbers>
#include <random>

using namespace fsosnr;

TEST_CASE("average_power")
{
    const double a = (std::numbers::sqrt2 / 2.0);
    CHECK(average_power(std::vector<Complex>(8, {a, a})) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(average_power(std::vector<Complex>(8, Complex{})) == 0.0);
    const std::vector<Complex> cross{2.0, {0.0, 2.0}, -2.0, {0.0, -2.0}};
    CHECK(average_power(cross) == 4.0);
    CHECK_THROWS_WITH_AS(average_power(std::vector<Complex>{}), "empty input", Error);
}

TEST_CASE("dB conversions")
{
    CHECK(db_to_linear(0.0) == 1.0);
    CHECK(db_to_linear(10.0) == doctest::Approx(10.0).epsilon(1e-15));
    CHECK(std::abs(linear_to_db(db_to_linear(7.3)) - 7.3) <= 1e-12 * 7.3);
    CHECK_THROWS_WITH_AS(linear_to_db(0.0), "non-positive power", Error);
    CHECK_THROWS_WITH_AS(linear_to_db(-1.0), "non-positive power", Error);
}

TEST_CASE("average_power is invariant to per-sample rotation and quadratic in gain")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);
    std::uniform_real_distribution<double> gain(0.01, 100.0);
    for (int trial = 0; trial < 50; ++trial) {
        auto x = test::gaussian(1000 + static_cast<std::size_t>(trial) * 37, 1.0 + trial, 100 + trial);
        const double p = average_power(x);

        auto rotated = x;
        for (auto& s : rotated) s *= std::polar(1.0, phase(rng));
        CHECK(average_power(rotated) == doctest::Approx(p).epsilon(1e-12));

        const double g = gain(rng);
        auto scaled = x;
        for (auto& s : scaled) s *= g;
        CHECK(average_power(scaled) == doctest::Approx(g * g * p).epsilon(1e-12));
    }
}

TEST_CASE("validate rejects broken streams")
{
    CHECK_THROWS_AS(validate(IqStream{{1.0}, 0.0}), Error);
    CHECK_THROWS_AS(validate(IqStream{{}, 1.0}), Error);
    CHECK_THROWS_AS(validate(SymbolBlock{{Complex(std::nan(""), 0.0)}, 1.0}), Error);
    CHECK_NOTHROW(validate(SymbolBlock{{1.0}, 4e9}));
}
