#include "ssk/saddle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ssk/errors.hpp"

namespace ssk {

void ModelParams::validate() const {
    if (dim == 0) throw UsageError("N must be >= 1");
    if (!(beta > 0.0) || !std::isfinite(beta)) throw UsageError("beta must be positive");
    if (!(big_h >= 0.0) || !std::isfinite(big_h)) throw UsageError("H must be non-negative");
    if (!std::isfinite(xi)) throw UsageError("xi must be finite");
}

ModelParams params_from_temperature(std::size_t n, double t, double big_h, double xi) {
    if (!(t > 0.0)) throw UsageError("temperature must be positive");
    ModelParams p{n, 1.0 / t, big_h, xi};
    p.validate();
    return p;
}

namespace {

void check_point(std::complex<double> z, const DisorderSample& sample) {
    if (z.imag() == 0.0 && z.real() < sample.lambdas.front())
        throw UsageError("G evaluated on a branch cut (real z left of lambda_1)");
    for (double l : sample.lambdas) {
        if (std::abs(z - l) <= 1e-14 * std::max(1.0, std::abs(l)))
            throw NumericalError("G evaluated at a pole");
    }
}

}  // namespace

std::complex<double> eval_G(std::complex<double> z, const DisorderSample& sample, const ModelParams& params,
                            double field_shift) {
    sample.validate();
    check_point(z, sample);
    const double n = static_cast<double>(sample.dim);
    const double ht = params.h() + field_shift;
    std::complex<double> logs = 0.0, rational = 0.0;
    for (std::size_t i = 0; i < sample.dim; ++i) {
        const std::complex<double> w = z - sample.lambdas[i];
        logs += std::log(w);
        rational += sample.projections[i] * sample.projections[i] / w;
    }
    return params.beta * z - logs / n + ht * ht * params.beta / n * rational;
}

std::pair<std::complex<double>, std::complex<double>> eval_G_derivatives(std::complex<double> z,
                                                                         const DisorderSample& sample,
                                                                         const ModelParams& params,
                                                                         double field_shift) {
    sample.validate();
    check_point(z, sample);
    const double n = static_cast<double>(sample.dim);
    const double ht = params.h() + field_shift;
    const double c = ht * ht * params.beta / n;
    std::complex<double> d1 = params.beta, d2 = 0.0;
    for (std::size_t i = 0; i < sample.dim; ++i) {
        const std::complex<double> inv = 1.0 / (z - sample.lambdas[i]);
        const double w = sample.projections[i] * sample.projections[i];
        d1 -= inv / n + c * w * inv * inv;
        d2 += inv * inv / n + 2.0 * c * w * inv * inv * inv;
    }
    return {d1, d2};
}

std::vector<double> scaled_offsets(const DisorderSample& sample) {
    const double n = static_cast<double>(sample.dim);
    std::vector<double> d(sample.dim);
    for (std::size_t i = 0; i < sample.dim; ++i) d[i] = n * (sample.lambdas[0] - sample.lambdas[i]);
    return d;
}

double critical_tolerance(double beta) { return 1e-12 * std::max(1.0, beta); }

namespace {

struct OffsetDerivative {
    const std::vector<double>& d;
    const std::vector<double>& w;
    double beta;
    double a;  // beta * H_tot^2

    // (G'(p), dG'/dp) in the offset variable.
    std::pair<double, double> operator()(double p) const {
        double s1 = 0.0, s2 = 0.0, r2 = 0.0, r3 = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i) {
            const double inv = 1.0 / (p + d[i]);
            const double inv2 = inv * inv;
            s1 += inv;
            s2 += inv2;
            r2 += w[i] * inv2;
            r3 += w[i] * inv2 * inv;
        }
        return {beta - s1 - a * r2, s2 + 2.0 * a * r3};
    }
};

}  // namespace

CriticalPoint solve_critical_point(const DisorderSample& sample, double beta, double big_h_total) {
    sample.validate();
    if (!(beta > 0.0)) throw UsageError("beta must be positive");
    const auto d = scaled_offsets(sample);
    std::vector<double> w(sample.dim);
    for (std::size_t i = 0; i < sample.dim; ++i) w[i] = sample.projections[i] * sample.projections[i];
    const OffsetDerivative gp{d, w, beta, beta * big_h_total * big_h_total};
    const double tol = critical_tolerance(beta);

    // G'(p) <= beta - 1/p, so anything below 1/beta is left of the root.
    double lo = 0.5 / beta;
    double hi = std::max(10.0, 2.0 / beta);
    int expansions = 0;
    while (gp(hi).first <= 0.0) {
        lo = hi;
        hi *= 2.0;
        if (++expansions > 200) throw NumericalError("no critical point right of lambda_1");
    }

    CriticalPoint out;
    // Coarse bisection, then safeguarded Newton inside the bracket.
    while (hi - lo > 1e-3 * hi) {
        const double mid = 0.5 * (lo + hi);
        (gp(mid).first < 0.0 ? lo : hi) = mid;
        ++out.iterations;
    }
    double p = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        ++out.iterations;
        const auto [g1, g2] = gp(p);
        if (std::abs(g1) <= 0.01 * tol) break;
        (g1 < 0.0 ? lo : hi) = p;
        double next = p - g1 / g2;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == p || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
        p = next;
    }
    out.p = p;
    out.gamma = sample.lambdas[0] + p / static_cast<double>(sample.dim);
    out.residual = std::abs(gp(p).first);
    return out;
}

CriticalPoints solve_critical(const DisorderSample& sample, const ModelParams& params) {
    params.validate();
    if (params.dim != sample.dim) throw UsageError("params.dim does not match the sample dimension");
    const auto base = solve_critical_point(sample, params.beta, params.big_h);
    CriticalPoints cp;
    cp.gamma = base.gamma;
    cp.p = base.p;
    cp.residual_g = base.residual;
    if (params.xi == 0.0) {
        cp.gamma_m = cp.gamma;
        cp.p_m = cp.p;
        cp.residual_gm = cp.residual_g;
        return cp;
    }
    const auto shifted = solve_critical_point(sample, params.beta, params.big_h + params.xi);
    cp.gamma_m = shifted.gamma;
    cp.p_m = shifted.p;
    cp.residual_gm = shifted.residual;
    return cp;
}

double reduced_critical(const ModelParams& params, double n1_abs, bool with_xi) {
    if (!(params.beta > 1.0)) throw UsageError("reduced critical equation needs beta > 1");
    const double amp = with_xi ? params.big_h + params.xi : params.big_h;
    const double a = amp * amp * params.beta * n1_abs * n1_abs;
    const double b1 = params.beta - 1.0;
    const double root = std::sqrt(1.0 + 4.0 * b1 * a);
    return (1.0 + root) / (2.0 * b1);
}

}  // namespace ssk
