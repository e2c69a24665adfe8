#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"
#include "ssk/quadrature.hpp"

using ssk::quad::cplx;

TEST_CASE("Gauss-Legendre weights sum to the interval length") {
    for (int n : {1, 2, 7, 16, 64}) {
        const ssk::quad::GaussLegendre rule(n);
        double s = 0.0;
        for (double w : rule.weights()) s += w;
        CHECK(s == doctest::Approx(2.0).epsilon(1e-14));
    }
}

TEST_CASE("Gauss-Legendre is exact for polynomials of degree 2n-1") {
    for (int n : {3, 8, 20}) {
        const ssk::quad::GaussLegendre rule(n);
        for (int k = 0; k <= 2 * n - 1; ++k) {
            const auto v = rule.integrate([k](double x) { return std::pow(x, k); }, 0.0, 1.0);
            CHECK(v.real() == doctest::Approx(1.0 / (k + 1)).epsilon(1e-13));
        }
    }
}

TEST_CASE("Gauss-Legendre nodes are ascending and symmetric") {
    const ssk::quad::GaussLegendre rule(11);
    const auto& x = rule.nodes();
    for (std::size_t i = 1; i < x.size(); ++i) CHECK(x[i] > x[i - 1]);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(x[i] == doctest::Approx(-x[x.size() - 1 - i]).epsilon(1e-15));
}

TEST_CASE("one Kronrod panel suffices where the embedded Gauss rule is exact") {
    const auto r = ssk::quad::adaptive([](double x) { return std::pow(x, 19); }, 0.0, 1.0, 1e-14, 0.0);
    CHECK(r.intervals == 1);
    CHECK(r.value.real() == doctest::Approx(1.0 / 20.0).epsilon(1e-14));
    auto p30 = [](double x) { return std::pow(x, 30); };
    const auto k = ssk::quad::detail::gk21(p30, 0.0, 1.0);
    CHECK(k.value.real() == doctest::Approx(1.0 / 31.0).epsilon(1e-14));
}

TEST_CASE("adaptive quadrature handles smooth, oscillatory and endpoint-singular integrands") {
    const double pi = std::numbers::pi;
    auto r1 = ssk::quad::adaptive([](double x) { return std::sin(x); }, 0.0, pi, 1e-13, 0.0);
    CHECK(r1.converged);
    CHECK(r1.value.real() == doctest::Approx(2.0).epsilon(1e-13));

    auto r2 = ssk::quad::adaptive([](double x) { return std::exp(cplx(0.0, x)); }, 0.0, 2.0 * pi, 1e-13, 0.0);
    CHECK(std::abs(r2.value) < 1e-12);

    auto r3 = ssk::quad::adaptive([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-11, 0.0);
    CHECK(r3.converged);
    CHECK(r3.value.real() == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
    CHECK(r3.error >= std::abs(r3.value.real() - 2.0 / 3.0) * 0.1);
}

TEST_CASE("adaptive quadrature is deterministic") {
    auto f = [](double x) { return std::exp(cplx(-x, 3.0 * x)) / (1.0 + x * x); };
    const auto a = ssk::quad::adaptive(f, 0.0, 20.0, 1e-12, 0.0);
    const auto b = ssk::quad::adaptive(f, 0.0, 20.0, 1e-12, 0.0);
    CHECK(a.value == b.value);
    CHECK(a.evaluations == b.evaluations);
}
