#include <vector>
#include <cmath>

#include "doctest.h"
#include "ssk/disorder.hpp"
#include "ssk/errors.hpp"

using namespace ssk;

TEST_CASE("resolvent sums by hand") {
    const auto s = make_synthetic({2.0, 1.0, 0.0}, {1.0, 2.0, 3.0});
    CHECK(resolvent_sum(s, 1, false) == doctest::Approx((1.0 + 0.5) / 3.0));
    CHECK(resolvent_sum(s, 1, true) == doctest::Approx((4.0 + 4.5) / 3.0));
    const double e = std::pow(3.0, 2.0 / 3.0);
    CHECK(resolvent_sum(s, 2, false) == doctest::Approx(1.0 / (e * e) + 1.0 / (4.0 * e * e)));
    CHECK(resolvent_sum(s, 3, true) == doctest::Approx(4.0 / (e * e * e) + 9.0 / (8.0 * e * e * e)));
    CHECK(xi_statistic(s) == doctest::Approx(std::cbrt(3.0) * (0.5 - 1.0)));
}

TEST_CASE("resolvent sums reject unusable samples") {
    CHECK_THROWS_AS(resolvent_sum(make_synthetic({1.0}, {1.0}), 1, false), UsageError);
    CHECK_THROWS_AS(resolvent_sum(make_synthetic({1.0, 1.0}, {1.0, 1.0}), 1, false), NumericalError);
    CHECK_THROWS_AS(resolvent_sum(make_synthetic({1.0, 0.0}, {1.0, 1.0}), 0, false), UsageError);
}

TEST_CASE("event report is the conjunction of its clauses") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto r = check_event(sample_spectrum_fast(300, seed), 0.3);
        bool all = true;
        for (bool c : r.clauses()) all = all && c;
        CHECK(r.member == all);
    }
}

TEST_CASE("event clauses widen with epsilon") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto s = sample_spectrum_fast(300, seed);
        const auto lo = check_event(s, 0.2), hi = check_event(s, 0.4);
        const auto a = lo.clauses(), b = hi.clauses();
        for (std::size_t c = 0; c < a.size(); ++c) CHECK((!a[c] || b[c]));
        CHECK((!lo.member || hi.member));
    }
}

TEST_CASE("n1 clause window") {
    // N = 100, eps = 0.5: 0.1 < n1^2 < 0.5 log 100 = 2.30
    const auto in = check_event(make_synthetic({2.0, 0.0}, {1.0, 0.0}), 0.5);
    CHECK(in.values.n1_sq == 1.0);
    auto n100 = [](double n1) {
        std::vector<double> l(100), p(100, 1.0);
        for (int i = 0; i < 100; ++i) l[static_cast<std::size_t>(i)] = 2.0 - 0.04 * i;
        p[0] = n1;
        return check_event(make_synthetic(l, p), 0.5).clause_n1;
    };
    CHECK(n100(1.0));
    CHECK_FALSE(n100(0.3));
    CHECK_FALSE(n100(1.6));
}

TEST_CASE("check_event argument validation") {
    const auto s = sample_spectrum_fast(50, 1);
    CHECK_THROWS_AS(check_event(s, 0.0), UsageError);
    CHECK_THROWS_AS(check_event(s, 1.0), UsageError);
    CHECK_THROWS_AS(check_event(s, 0.3, 0.0), UsageError);
}
