#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "ssk/errors.hpp"
#include "ssk/quadrature.hpp"
#include "ssk/rmt.hpp"
#include "ssk/stats.hpp"

using namespace ssk;

TEST_CASE("synthetic samples are validated") {
    CHECK_NOTHROW(make_synthetic({2.0, 1.0, 1.0}, {0.1, 0.2, 0.3}));
    CHECK_THROWS_AS(make_synthetic({1.0, 2.0}, {0.1, 0.2}), UsageError);
    CHECK_THROWS_AS(make_synthetic({1.0}, {0.1, 0.2}), UsageError);
    CHECK_THROWS_AS(make_synthetic({}, {}), UsageError);
    CHECK_THROWS_AS(make_synthetic({NAN}, {1.0}), UsageError);
}

TEST_CASE("provenance names round-trip") {
    for (auto p : {Provenance::DenseGoe, Provenance::FastSpectral, Provenance::Synthetic})
        CHECK(provenance_from_string(to_string(p)) == p);
    CHECK_THROWS_AS(provenance_from_string("other"), UsageError);
}

TEST_CASE("semicircle density integrates to its CDF") {
    CHECK(semicircle_cdf(-2.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(semicircle_cdf(0.0) == doctest::Approx(0.5));
    CHECK(semicircle_cdf(2.0) == doctest::Approx(1.0));
    CHECK(semicircle_density(0.0) == doctest::Approx(1.0 / std::numbers::pi));
    CHECK(semicircle_density(2.5) == 0.0);
    const auto r = quad::adaptive([](double x) { return semicircle_density(x); }, -2.0, 0.7, 1e-12, 0.0);
    CHECK(r.value.real() == doctest::Approx(semicircle_cdf(0.7)).epsilon(1e-9));
}

TEST_CASE("classical locations invert the semicircle CDF") {
    const std::size_t n = 200;
    const auto loc = classical_locations(n);
    REQUIRE(loc.size() == n);
    CHECK(loc.back() == doctest::Approx(-2.0));
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(1.0 - semicircle_cdf(loc[i]) == doctest::Approx((i + 1.0) / n).epsilon(1e-10));
        if (i) CHECK(loc[i] < loc[i - 1]);
    }
}

TEST_CASE("Airy reference locations") {
    CHECK(airy_reference(1) == doctest::Approx(-std::pow(1.5 * std::numbers::pi, 2.0 / 3.0)));
    CHECK(airy_reference(2) < airy_reference(1));
}

TEST_CASE("dense GOE draw: eigenpairs and projections are consistent") {
    const auto d = draw_goe_dense(30, 11);
    const auto& s = d.sample;
    CHECK(s.provenance == Provenance::DenseGoe);
    CHECK((d.matrix - d.matrix.transpose()).norm() == 0.0);
    for (std::size_t i = 0; i < s.dim; ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        const Eigen::VectorXd u = d.eigenvectors.col(k);
        CHECK((d.matrix * u - s.lambdas[i] * u).norm() < 1e-10);
        CHECK(u.dot(d.field) == doctest::Approx(s.projections[i]).epsilon(1e-12));
        if (i) CHECK(s.lambdas[i] <= s.lambdas[i - 1]);
    }
}

TEST_CASE("samplers are deterministic in the seed") {
    const auto a = sample_spectrum_fast(100, 3), b = sample_spectrum_fast(100, 3), c = sample_spectrum_fast(100, 4);
    CHECK(a.lambdas == b.lambdas);
    CHECK(a.projections == b.projections);
    CHECK(a.lambdas != c.lambdas);
    CHECK(sample_goe_dense(20, 9).lambdas == sample_goe_dense(20, 9).lambdas);
}

TEST_CASE("empirical spectrum follows the semicircle") {
    const auto s = sample_spectrum_fast(1000, 21);
    const auto ks = stats::ks_one_sample(s.lambdas, semicircle_cdf);
    CHECK(ks.statistic < 0.02);
    CHECK(s.top() == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("fast and dense samplers agree in law at the edge") {
    std::vector<double> fast, dense;
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        fast.push_back(edge_profile(sample_spectrum_fast(40, seed)).a.front());
        dense.push_back(edge_profile(sample_goe_dense(40, 1000 + seed)).a.front());
    }
    CHECK(stats::ks_two_sample(fast, dense).p_value > 1e-3);
}

TEST_CASE("fast-sampler projections are standard Gaussian") {
    const auto s = sample_spectrum_fast(3000, 8);
    const auto ks = stats::ks_one_sample(s.projections, [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); });
    CHECK(ks.p_value > 1e-3);
}

TEST_CASE("edge profile and gap condition") {
    const auto s = make_synthetic({2.0, 1.9, 1.5, 0.0}, {1, 1, 1, 1});
    const auto p = edge_profile(s);
    const double scale = std::pow(4.0, 2.0 / 3.0);
    CHECK(p.a.front() == doctest::Approx(0.0));
    CHECK(p.gaps[0] == doctest::Approx(0.1 * scale));
    CHECK(edge_gap_condition(p, 0.0, 2));
    // N = 4 leaves no j in [2, N^{2/5}], so the condition holds vacuously.
    CHECK(edge_gap_condition(p, 10.0, 1));
    std::vector<double> l(40);
    for (std::size_t i = 0; i < l.size(); ++i) l[i] = 2.0 - 0.001 * double(i);
    const auto q = edge_profile(make_synthetic(l, std::vector<double>(40, 1.0)));
    CHECK_FALSE(edge_gap_condition(q, 10.0, 2));
    CHECK(edge_gap_condition(q, 0.001, 2));
}
