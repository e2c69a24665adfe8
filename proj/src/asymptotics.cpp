#include "ssk/asymptotics.hpp"

#include <cmath>

#include "ssk/errors.hpp"

namespace ssk {

namespace {

void check_regime(const ModelParams& params, double n1_abs) {
    params.validate();
    if (!(params.beta > 1.0)) throw UsageError("closed forms need T < 1 (beta > 1)");
    if (!(n1_abs >= 0.0) || !std::isfinite(n1_abs)) throw UsageError("|n1| must be non-negative");
}

double log_cosh(double x) {
    const double a = std::abs(x);
    return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

// H |n1| sqrt(1-T) / T and |n1| sqrt(1-T).
struct Scales {
    double t, k, x;
};

Scales scales(const ModelParams& params, double n1_abs) {
    const double t = params.temperature();
    const double k = n1_abs * std::sqrt(1.0 - t);
    return {t, k, params.big_h * k / t};
}

}  // namespace

std::string_view to_string(OverlapKind k) {
    return k == OverlapKind::FieldOverlap ? "field-overlap" : "replica-overlap";
}

double mgf_theorem(const ModelParams& params, double n1_abs) {
    check_regime(params, n1_abs);
    if (params.xi == 0.0) return 1.0;
    const auto [t, k, x] = scales(params, n1_abs);
    const double h = params.big_h, xi = params.xi;
    return std::exp(h * xi + 0.5 * t * xi * xi + log_cosh((h + t * xi) * k / t) - log_cosh(x));
}

double mgf_theorem_beta(const ModelParams& params, double n1_abs) {
    ModelParams q = params;
    q.xi = params.beta * params.xi;
    return mgf_theorem(q, n1_abs);
}

OverlapMoments overlap_moments(const ModelParams& params, double n1_abs) {
    check_regime(params, n1_abs);
    const auto [t, k, x] = scales(params, n1_abs);
    const double th = std::tanh(x);
    OverlapMoments m;
    m.mean = params.big_h + k * th;
    m.variance = t + k * k * (1.0 - th * th);
    m.susceptibility = params.big_h > 0.0 ? 1.0 + k / params.big_h * th : 1.0 + n1_abs * n1_abs * (1.0 - t) / t;
    return m;
}

double OverlapLaw::mgf(double xi) const {
    return std::exp(gauss_mean * xi + 0.5 * gauss_var * xi * xi) *
           (p_plus * std::exp(atom * xi) + (1.0 - p_plus) * std::exp(-atom * xi));
}

OverlapLaw bernoulli_gauss_decomposition(const ModelParams& params, double n1_abs) {
    check_regime(params, n1_abs);
    const auto [t, k, x] = scales(params, n1_abs);
    OverlapLaw law;
    law.gauss_mean = params.big_h;
    law.gauss_var = t;
    law.atom = k;
    law.p_plus = 1.0 / (1.0 + std::exp(-2.0 * x));
    law.kind = OverlapKind::FieldOverlap;
    return law;
}

double prefactor_exponent(double p, double p_m, const ModelParams& params) {
    params.validate();
    if (!(p > 0.0) || !(p_m > 0.0)) throw UsageError("critical offsets must be positive");
    if (!(params.beta > 1.0)) throw UsageError("prefactor exponent needs beta > 1");
    const double b = params.beta, h = params.big_h, xi = params.xi;
    return -std::log(p_m / p) + 2.0 * (b - 1.0) * (p_m - p) + (2.0 * h * xi + xi * xi) * b;
}

double replica_p(const ModelParams& params, double n1_abs) {
    check_regime(params, n1_abs);
    const auto s = scales(params, n1_abs);
    const double c = 2.0 * s.x;
    // cosh c / (cosh c + 1) = 1 / (1 + sech c)
    return 1.0 / (1.0 + 1.0 / std::cosh(c));
}

double replica_mgf_theorem(const ModelParams& params, double n1_abs) {
    const double p = replica_p(params, n1_abs);
    if (params.xi == 0.0) return 1.0;
    return p * std::exp(params.xi) + (1.0 - p) * std::exp(-params.xi);
}

OverlapLaw replica_overlap_law(const ModelParams& params, double n1_abs) {
    OverlapLaw law;
    law.atom = 1.0;
    law.p_plus = replica_p(params, n1_abs);
    law.kind = OverlapKind::ReplicaOverlap;
    return law;
}

}  // namespace ssk
