#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "ssk/contour.hpp"
#include "ssk/disorder.hpp"
#include "ssk/errors.hpp"
#include "ssk/quadrature.hpp"
#include "ssk/asymptotics.hpp"
#include "ssk/saddle.hpp"

using namespace ssk;

namespace {

DisorderSample synthetic8() {
    return make_synthetic({0.9, 0.5, 0.2, -0.1, -0.4, -0.8, -1.3, -1.9}, {1.1, -0.4, 0.8, 1.3, -0.2, 0.6, -1.0, 0.5});
}

DisorderSample first_on_event(std::size_t n, double eps, std::uint64_t start = 0) {
    for (std::uint64_t seed = start;; ++seed) {
        auto s = sample_spectrum_fast(n, seed);
        if (check_event(s, eps).member) return s;
    }
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("ContourSpec validation") {
    ContourSpec s;
    CHECK_NOTHROW(s.validate());
    s.e_hat = 1.0 / 6.0;
    CHECK_THROWS_AS(s.validate(), UsageError);
    s = {};
    s.delta = 0.34;
    CHECK_THROWS_AS(s.validate(), UsageError);
    s = {};
    s.t_max_scale = 3.0;
    CHECK_THROWS_AS(s.validate(), UsageError);
    s = {};
    s.quad_tol = 0.0;
    CHECK_THROWS_AS(s.validate(), UsageError);
}

TEST_CASE("contour geometry") {
    const auto s = sample_spectrum_fast(100, 3);
    const ModelParams params{100, 2.0, 1.0, 0.5};
    const auto cp = solve_critical(s, params);
    const auto c = build_contour(s, cp, ContourSpec{});
    CHECK(c.arc_radius == cp.p_m);
    CHECK(std::abs(c.to_z(c.arc(0.0)) - cp.gamma_m) < 1e-15);
    CHECK(c.f(0.0) == 0.0);
    CHECK(std::abs(c.tail(0.0, true) - c.leg(c.window, true)) == 0.0);
    CHECK(std::abs(c.arc(std::numbers::pi / 2) - c.leg(c.arc_radius, true)) < 1e-13);
    CHECK(c.window >= std::pow(100.0, ContourSpec{}.e_hat));
    CHECK(c.window >= 2.0 * c.arc_radius);
    for (double t : {0.0, 0.5, 10.0, 1e4}) {
        CHECK(c.tail(t, false) == std::conj(c.tail(t, true)));
        CHECK(c.tail(t, true).imag() > 0.0);
    }
    for (double th : {-1.2, -0.3, 0.4, 1.5}) CHECK(c.arc(-th) == std::conj(c.arc(th)));
    CHECK(c.t_max >= c.t_base);
}

TEST_CASE("fixed window rejects an arc that swallows the legs") {
    const auto s = make_synthetic({0.0}, {1.0});
    ContourSpec spec;
    spec.adaptive_window = false;
    CHECK_THROWS_AS(build_contour(s, 5.0, spec), NumericalError);
    spec.adaptive_window = true;
    CHECK_NOTHROW(build_contour(s, 5.0, spec));
}

TEST_CASE("shifted integral is imaginary") {
    const auto s = sample_spectrum_fast(50, 11);
    ModelParams params{50, 2.0, 1.0, 0.5};
    const auto cp = solve_critical(s, params);
    const auto r = integrate_shifted(s, params, 0.5 / std::sqrt(50.0), cp, ContourSpec{});
    CHECK(r.value.imag() > 0.0);
    CHECK(std::abs(r.value.real()) / std::abs(r.value.imag()) <= 1e-6);
    CHECK(r.abs_error < 1e-8 * std::abs(r.value));
}

TEST_CASE("integral agrees with a plain vertical line (Cauchy)") {
    const auto s = synthetic8();
    const ModelParams params{8, 2.0, 1.0, 0.0};
    const auto cp = solve_critical(s, params);
    const auto r = integrate_shifted(s, params, 0.0, cp, ContourSpec{});
    const ShiftedIntegrand g(s, params.beta, params.big_h, cp.p);
    const double c = cp.p + 8.0;
    // y = x / (1 - x^2) maps (-1, 1) onto the whole line.
    auto f = [&](double x) {
        const double y = x / (1.0 - x * x);
        const double jac = (1.0 + x * x) / ((1.0 - x * x) * (1.0 - x * x));
        return g(cplx(c, y)) * cplx(0.0, jac);
    };
    const auto line = quad::adaptive(f, -1.0, 1.0, 1e-13, 1e-12, 200000);
    REQUIRE(line.converged);
    const cplx z_units = line.value / 8.0;
    CHECK(std::abs(z_units - r.value) <= 1e-8 * std::abs(r.value));
}

TEST_CASE("mgf at xi = 0 is exactly one") {
    const auto s = sample_spectrum_fast(40, 2);
    const auto r = mgf_exact(s, ModelParams{40, 2.0, 1.0, 0.0});
    CHECK(r.value == 1.0);
    CHECK(r.method == MgfMethod::ContourExact);
    const auto grid = mgf_exact_grid(s, ModelParams{40, 2.0, 1.0, 0.0}, {0.0, 0.5});
    CHECK(grid[0].value == 1.0);
    CHECK(grid[1].value == mgf_exact(s, ModelParams{40, 2.0, 1.0, 0.5}).value);
}

TEST_CASE("mgf is independent of the contour shape") {
    const auto s = sample_spectrum_fast(100, 5);
    const ModelParams params{100, 2.0, 1.0, 0.5};
    const double ref = mgf_exact(s, params).value;
    for (double e : {0.05, 0.1, 0.15}) {
        for (double d : {0.15, 0.25, 0.3}) {
            ContourSpec spec;
            spec.e_hat = e;
            spec.delta = d;
            CHECK(rel(mgf_exact(s, params, spec).value, ref) <= 1e-6);
        }
    }
}

TEST_CASE("mgf diagnostics and the doubled tail") {
    const auto s = sample_spectrum_fast(120, 8);
    const ModelParams params{120, 2.0, 1.0, 1.0};
    const auto r = mgf_exact(s, params);
    CHECK(r.diagnostics.at("imag_residue") <= 1e-6);
    CHECK(r.diagnostics.at("p_m") > r.diagnostics.at("p"));
    ContourSpec twice;
    twice.t_max_scale = 2.0;
    CHECK(r.diagnostics.at("value_doubled_t_max") == mgf_exact(s, params, twice).value);
    CHECK(r.diagnostics.at("doubling_change") <= r.diagnostics.at("tail_bound") + 1e-9 * r.value);
}

TEST_CASE("integrand modulus decays monotonically along the tail after its peak") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto s = sample_spectrum_fast(200, seed);
        const ModelParams params{200, 2.0, 1.0, 0.5};
        const auto cp = solve_critical(s, params);
        const auto pts = sample_contour(s, params, 0.5 / std::sqrt(200.0), cp.p_m, ContourSpec{}, 400);
        std::vector<double> lm;
        for (const auto& pt : pts)
            if (pt.segment == "upper_tail") lm.push_back(pt.log_modulus);
        REQUIRE(lm.size() == 400);
        std::size_t peak = 0;
        while (peak + 1 < lm.size() && lm[peak + 1] >= lm[peak]) ++peak;
        for (std::size_t k = peak + 1; k < lm.size(); ++k) CHECK(lm[k] <= lm[k - 1] + 1e-12);
    }
}

TEST_CASE("tail majorant dominates the integrand along the tail") {
    const auto s = sample_spectrum_fast(80, 4);
    const ModelParams params{80, 2.0, 1.0, 0.0};
    const auto cp = solve_critical(s, params);
    const auto c = build_contour(s, cp.p, ContourSpec{});
    const ShiftedIntegrand g(s, 2.0, 1.0, cp.p);
    double prev = g.log_tail_majorant(0.0, c);
    for (double t = 0.25; t < 1e7; t *= 1.7) {
        const double m = g.log_tail_majorant(t, c);
        CHECK(m <= prev + 1e-12);
        const double actual = g.log_modulus(c.tail(t, true)) + std::log(std::abs(c.tail_velocity(t, true)));
        CHECK(actual <= m + 1e-10);
        prev = m;
    }
}

TEST_CASE("tail estimate order and scaling") {
    const auto s = first_on_event(1000, 0.3);
    const ModelParams params{1000, 2.0, 1.0, 0.5};
    const auto cp = solve_critical(s, params);
    const ContourSpec spec;
    const double est = tail_estimate(s, params, cp, spec);
    CHECK(est >= 0.0);
    CHECK(est <= std::pow(1000.0, -spec.e_hat / 3.0));
    const auto c = build_contour(s, cp, spec);
    const auto te = estimate_tail(s, params, 0.5 / std::sqrt(1000.0), cp.p_m, c);
    CHECK(te.fitted_decay > 0.0);
    CHECK(te.c4_mass > 0.0);
    CHECK(std::isfinite(te.log_truncation_bound));
    CHECK(std::exp(te.log_truncation_bound) == doctest::Approx(est).epsilon(1e-9));
    CHECK(te.log_decade_mass > te.log_far_bound - 50.0);
}

TEST_CASE("shifted integral against the leading-order constant at N = 2000") {
    const std::size_t n = 2000;
    const auto s = first_on_event(n, 0.3);
    const double beta = 2.0, big_h = 1.0, xi = 0.5;
    const ModelParams params{n, beta, big_h, xi};
    const auto cp = solve_critical(s, params);
    const auto r = integrate_shifted(s, params, xi / std::sqrt(double(n)), cp, ContourSpec{});
    const double sm = cp.p_m;
    const double lead = 2.0 * std::sqrt(2.0 * std::numbers::pi * sm) * std::exp(-(beta - 1.0) * sm + 0.5) /
                        (double(n) * std::sqrt(beta - 1.0)) *
                        std::cosh((big_h + xi) * std::abs(s.projections[0]) * std::sqrt(beta * (beta - 1.0)));
    const double ratio = r.value.imag() / lead;
    MESSAGE("ratio = " << ratio);
    CHECK(std::abs(ratio - 1.0) <= 0.15);
}

TEST_CASE("exact prefactor exponent stays close to the reduced form") {
    const std::size_t n = 2000;
    const auto s = first_on_event(n, 0.3);
    const ModelParams params{n, 2.0, 1.0, 0.5};
    const auto cp = solve_critical(s, params);
    const double exact = exact_prefactor_exponent(s, 2.0, 1.0, cp.p, 1.5, cp.p_m);
    const double reduced = prefactor_exponent(cp.p, cp.p_m, params);
    MESSAGE("exact " << exact << " reduced " << reduced);
    CHECK(std::abs(exact - reduced) <= 1.0);
    CHECK(exact_prefactor_exponent(s, 2.0, 1.0, cp.p, 1.0, cp.p) == 0.0);
}

TEST_CASE("Bessel identity") {
    ContourSpec spec;
    spec.quad_tol = 1e-11;
    auto b = bessel_identity(0.5, 0.0, spec);
    CHECK(std::abs(b.quadrature - cplx(0.0, 2.0 * std::sqrt(2.0 * std::numbers::pi))) < 1e-8 * 5.01326);
    CHECK(b.closed_form.imag() == doctest::Approx(5.01326).epsilon(1e-6));
    b = bessel_identity(1.0, 1.0, spec);
    CHECK(b.closed_form.imag() == doctest::Approx(2.0 * std::sqrt(std::numbers::pi) * std::cosh(2.0)).epsilon(1e-14));
    CHECK(b.closed_form.imag() == doctest::Approx(13.3366).epsilon(1e-5));
    CHECK(b.rel_error <= 1e-8);
    for (double a : {0.1, 0.7, 3.0, 10.0}) {
        const auto r = bessel_identity(a, 0.0, spec);
        CHECK(std::abs(r.quadrature - cplx(0.0, 2.0 * std::sqrt(std::numbers::pi / a))) <=
              1e-8 * std::abs(r.closed_form));
    }
    CHECK(bessel_identity(cplx(2.0, 1.0), cplx(1.0, -0.5), spec).rel_error <= 1e-8);
    CHECK_THROWS_AS(bessel_identity(cplx(0.0, 1.0), 1.0, spec), UsageError);
    CHECK_THROWS_AS(bessel_identity(-1.0, 1.0, spec), UsageError);
}

TEST_CASE("log partition at N = 1 matches enumeration") {
    for (double g : {0.3, 1.0, 1.7}) {
        const auto s = make_synthetic({0.0}, {g});
        const double lz = log_partition(s, ModelParams{1, 1.0, 1.0, 0.0});
        CHECK(std::abs(lz - std::log(std::cosh(g))) <= 1e-6);
    }
}

TEST_CASE("log partition: lambda shift and high temperature") {
    const auto s = sample_spectrum_fast(30, 6);
    const ModelParams params{30, 1.5, 0.8, 0.0};
    const double c = 0.37;
    auto shifted = s;
    for (auto& l : shifted.lambdas) l += c;
    const double diff = log_partition(shifted, params) - log_partition(s, params);
    CHECK(diff == doctest::Approx(30.0 * 1.5 * c / 2.0).epsilon(1e-8));

    // First order in beta: log Z = beta E[-H] = (beta/2) sum lambda_i.
    double sum = 0.0;
    for (double l : s.lambdas) sum += l;
    for (double beta : {1e-2, 1e-3}) {
        const double lz = log_partition(s, ModelParams{30, beta, 0.0, 0.0});
        CHECK(std::abs(lz - 0.5 * beta * sum) <= 50.0 * beta * beta);
    }
}
