#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "ssk/errors.hpp"
#include "ssk/stats.hpp"

using namespace ssk::stats;

TEST_CASE("median of odd and even samples") {
    CHECK(median({3.0, 1.0, 2.0}) == 2.0);
    CHECK(median({4.0, 1.0, 3.0, 2.0}) == 2.5);
    CHECK_THROWS_AS(median({}), ssk::UsageError);
}

TEST_CASE("Wilson interval matches the textbook value") {
    // 50 of 100 at 95%: centre 0.5, half-width 1.96 * sqrt(.25/100 + 1.96^2/40000) / (1 + 1.96^2/100)
    const auto ci = wilson(50, 100);
    CHECK(ci.lo == doctest::Approx(0.40383).epsilon(1e-4));
    CHECK(ci.hi == doctest::Approx(0.59617).epsilon(1e-4));
    const auto all = wilson(10, 10);
    CHECK(all.hi == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(all.lo < 1.0);
    CHECK_THROWS_AS(wilson(3, 2), ssk::UsageError);
}

TEST_CASE("regression slope recovers an exact line") {
    CHECK(regression_slope({1, 2, 3, 4}, {1, 3, 5, 7}) == doctest::Approx(2.0));
    CHECK(regression_slope({0, 1, 2}, {5, 5, 5}) == doctest::Approx(0.0));
}

TEST_CASE("spearman on monotone, reversed and tied data") {
    CHECK(spearman({1, 2, 3, 4}, {10, 20, 25, 100}) == doctest::Approx(1.0));
    CHECK(spearman({1, 2, 3, 4}, {4, 3, 2, 1}) == doctest::Approx(-1.0));
    CHECK(spearman({1, 2, 3, 4}, {1, 3, 2, 4}) == doctest::Approx(0.8));
    CHECK(std::abs(spearman({1, 2, 3}, {1, 1, 1})) >= 0.0);  // defined or NaN, never throws
}

TEST_CASE("KS one-sample accepts uniform data and rejects shifted data") {
    std::mt19937_64 eng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> xs(2000);
    for (auto& x : xs) x = u(eng);
    auto cdf = [](double x) { return std::clamp(x, 0.0, 1.0); };
    CHECK(ks_one_sample(xs, cdf).p_value > 0.01);
    for (auto& x : xs) x = 0.9 * x;
    CHECK(ks_one_sample(xs, cdf).p_value < 1e-6);
}

TEST_CASE("KS statistic for a tiny sample by hand") {
    // Sample {0.5} against U(0,1): D = max(1 - 0.5, 0.5 - 0) = 0.5.
    CHECK(ks_one_sample({0.5}, [](double x) { return x; }).statistic == doctest::Approx(0.5));
    CHECK(ks_two_sample({1, 2, 3}, {1, 2, 3}).statistic == 0.0);
    CHECK(ks_two_sample({1, 2}, {3, 4}).statistic == doctest::Approx(1.0));
}

TEST_CASE("Kolmogorov survival function reference values") {
    CHECK(kolmogorov_survival(1.36) == doctest::Approx(0.0494).epsilon(2e-3));
    CHECK(kolmogorov_survival(0.0) == 1.0);
    CHECK(kolmogorov_survival(3.0) < 1e-6);
}
