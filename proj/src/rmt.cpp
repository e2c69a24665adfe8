#include "ssk/rmt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "ssk/errors.hpp"
#include "ssk/rng.hpp"

namespace ssk {

std::string_view to_string(Provenance p) {
    switch (p) {
        case Provenance::DenseGoe: return "dense-goe";
        case Provenance::FastSpectral: return "fast-spectral";
        case Provenance::Synthetic: return "synthetic";
    }
    return "synthetic";
}

Provenance provenance_from_string(std::string_view s) {
    if (s == "dense-goe") return Provenance::DenseGoe;
    if (s == "fast-spectral") return Provenance::FastSpectral;
    if (s == "synthetic") return Provenance::Synthetic;
    throw UsageError("unknown provenance '" + std::string(s) + "'");
}

void DisorderSample::validate() const {
    if (dim == 0) throw UsageError("disorder sample must have dim >= 1");
    if (lambdas.size() != dim || projections.size() != dim)
        throw UsageError("disorder sample arrays must have length dim");
    for (std::size_t i = 0; i < dim; ++i) {
        if (!std::isfinite(lambdas[i]) || !std::isfinite(projections[i]))
            throw UsageError("disorder sample contains non-finite values");
        if (i > 0 && lambdas[i] > lambdas[i - 1])
            throw UsageError("eigenvalues must be sorted in non-increasing order");
    }
}

DisorderSample make_synthetic(std::vector<double> lambdas, std::vector<double> projections) {
    DisorderSample s;
    s.dim = lambdas.size();
    s.lambdas = std::move(lambdas);
    s.projections = std::move(projections);
    s.provenance = Provenance::Synthetic;
    s.validate();
    return s;
}

namespace {

bool has_ties(const std::vector<double>& sorted_desc) {
    return std::adjacent_find(sorted_desc.begin(), sorted_desc.end()) != sorted_desc.end();
}

constexpr int kMaxTieResamples = 64;

}  // namespace

GoeDraw draw_goe_dense(std::size_t n, std::uint64_t seed) {
    if (n == 0) throw UsageError("N must be >= 1");
    const double off_sd = 1.0 / std::sqrt(static_cast<double>(n));
    const double diag_sd = std::sqrt(2.0) * off_sd;

    for (int attempt = 0; attempt < kMaxTieResamples; ++attempt) {
        Engine eng = make_engine(seed, static_cast<std::uint64_t>(attempt));
        std::normal_distribution<double> normal(0.0, 1.0);

        GoeDraw d;
        const auto ni = static_cast<Eigen::Index>(n);
        d.matrix.resize(ni, ni);
        for (Eigen::Index i = 0; i < ni; ++i) {
            d.matrix(i, i) = diag_sd * normal(eng);
            for (Eigen::Index j = i + 1; j < ni; ++j) {
                const double v = off_sd * normal(eng);
                d.matrix(i, j) = v;
                d.matrix(j, i) = v;
            }
        }
        d.field.resize(ni);
        for (Eigen::Index i = 0; i < ni; ++i) d.field(i) = normal(eng);

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(d.matrix);
        if (solver.info() != Eigen::Success) throw NumericalError("symmetric eigen-solve did not converge");

        // Eigen returns ascending order.
        d.eigenvectors = solver.eigenvectors().rowwise().reverse();
        d.sample.dim = n;
        d.sample.seed = seed;
        d.sample.provenance = Provenance::DenseGoe;
        d.sample.lambdas.resize(n);
        d.sample.projections.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto col = static_cast<Eigen::Index>(i);
            d.sample.lambdas[i] = solver.eigenvalues()(ni - 1 - col);
            d.sample.projections[i] = d.eigenvectors.col(col).dot(d.field);
        }
        if (!has_ties(d.sample.lambdas)) return d;
    }
    throw NumericalError("repeated eigenvalue ties in dense GOE draw");
}

DisorderSample sample_goe_dense(std::size_t n, std::uint64_t seed) {
    return draw_goe_dense(n, seed).sample;
}

DisorderSample sample_spectrum_fast(std::size_t n, std::uint64_t seed) {
    if (n == 0) throw UsageError("N must be >= 1");
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));

    for (int attempt = 0; attempt < kMaxTieResamples; ++attempt) {
        Engine eng = make_engine(seed, 0x5eedfa57ULL + static_cast<std::uint64_t>(attempt));
        std::normal_distribution<double> normal(0.0, 1.0);

        const auto ni = static_cast<Eigen::Index>(n);
        Eigen::VectorXd diag(ni);
        Eigen::VectorXd sub(std::max<Eigen::Index>(ni - 1, 0));
        // Householder tridiagonalisation of a GOE matrix: N(0,2) diagonal and
        // chi_{N-k} off-diagonal (entries in units of the unscaled matrix).
        for (Eigen::Index i = 0; i < ni; ++i) diag(i) = std::sqrt(2.0) * normal(eng) * scale;
        for (Eigen::Index k = 1; k < ni; ++k) {
            std::chi_squared_distribution<double> chi2(static_cast<double>(ni - k));
            sub(k - 1) = std::sqrt(chi2(eng)) * scale;
        }

        DisorderSample s;
        s.dim = n;
        s.seed = seed;
        s.provenance = Provenance::FastSpectral;
        s.lambdas.resize(n);
        s.projections.resize(n);
        if (n == 1) {
            s.lambdas[0] = diag(0);
        } else {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
            solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
            if (solver.info() != Eigen::Success) throw NumericalError("tridiagonal eigen-solve did not converge");
            for (std::size_t i = 0; i < n; ++i) s.lambdas[i] = solver.eigenvalues()(ni - 1 - static_cast<Eigen::Index>(i));
        }
        for (std::size_t i = 0; i < n; ++i) s.projections[i] = normal(eng);
        if (!has_ties(s.lambdas)) return s;
    }
    throw NumericalError("repeated eigenvalue ties in tridiagonal draw");
}

double semicircle_density(double x) {
    if (x <= -2.0 || x >= 2.0) return 0.0;
    return std::sqrt(4.0 - x * x) / (2.0 * std::numbers::pi);
}

double semicircle_cdf(double x) {
    if (x <= -2.0) return 0.0;
    if (x >= 2.0) return 1.0;
    return 0.5 + x * std::sqrt(4.0 - x * x) / (4.0 * std::numbers::pi) + std::asin(x / 2.0) / std::numbers::pi;
}

std::vector<double> classical_locations(std::size_t n) {
    if (n == 0) throw UsageError("N must be >= 1");
    std::vector<double> out(n);
    const double nd = static_cast<double>(n);
    for (std::size_t i = 1; i <= n; ++i) {
        if (i == n) {
            out[i - 1] = -2.0;
            continue;
        }
        // Bisection: the density vanishes at the edges, so Newton is avoided.
        const double target = 1.0 - static_cast<double>(i) / nd;
        double lo = -2.0, hi = 2.0;
        for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
            const double mid = 0.5 * (lo + hi);
            (semicircle_cdf(mid) < target ? lo : hi) = mid;
        }
        out[i - 1] = 0.5 * (lo + hi);
    }
    return out;
}

double airy_reference(std::size_t i) {
    return -std::pow(1.5 * std::numbers::pi * static_cast<double>(i), 2.0 / 3.0);
}

EdgeProfile edge_profile(const DisorderSample& sample) {
    sample.validate();
    const std::size_t n = sample.dim;
    const double scale = std::pow(static_cast<double>(n), 2.0 / 3.0);
    EdgeProfile e;
    e.a.resize(n);
    for (std::size_t i = 0; i < n; ++i) e.a[i] = scale * (sample.lambdas[i] - 2.0);
    e.gaps.reserve(n - 1);
    for (std::size_t j = 1; j < n; ++j) e.gaps.push_back(scale * (sample.lambdas[0] - sample.lambdas[j]));
    e.classical = classical_locations(n);
    e.reference.resize(n);
    for (std::size_t i = 0; i < n; ++i) e.reference[i] = airy_reference(i + 1);
    return e;
}

bool edge_gap_condition(const EdgeProfile& profile, double c, std::size_t j_min) {
    const std::size_t n = profile.a.size();
    const auto j_max = static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(n), 0.4)));
    for (std::size_t j = std::max<std::size_t>(j_min, 2); j <= std::min(j_max, n); ++j) {
        if (profile.gaps[j - 2] < c * std::pow(static_cast<double>(j), 2.0 / 3.0)) return false;
    }
    return true;
}

}  // namespace ssk
