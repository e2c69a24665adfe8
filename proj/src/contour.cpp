#include "ssk/contour.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "ssk/errors.hpp"
#include "ssk/quadrature.hpp"

namespace ssk {

std::string_view to_string(MgfMethod m) {
    switch (m) {
        case MgfMethod::ContourExact: return "contour";
        case MgfMethod::ClosedForm: return "theorem";
        case MgfMethod::MonteCarlo: return "mc";
    }
    return "unknown";
}

void ContourSpec::validate() const {
    if (!(e_hat > 0.0 && e_hat < 1.0 / 6.0)) throw UsageError("e_hat must lie in (0, 1/6)");
    if (!(delta > 0.0 && delta < 1.0 / 3.0)) throw UsageError("delta must lie in (0, 1/3)");
    if (!std::isfinite(t_max)) throw UsageError("t_max must be finite");
    if (!(t_max_scale >= 1.0) || std::exp2(std::round(std::log2(t_max_scale))) != t_max_scale)
        throw UsageError("t_max_scale must be a power of two >= 1");
    if (!(quad_tol > 0.0 && quad_tol <= 1e-2)) throw UsageError("quad_tol must lie in (0, 1e-2]");
    if (arc_points < 8 || arc_points > 4096) throw UsageError("arc_points must lie in [8, 4096]");
}

double Contour::f(double t) const { return std::expm1(delta * std::log1p(t)); }

double Contour::fprime(double t) const { return delta * std::exp((delta - 1.0) * std::log1p(t)); }

cplx Contour::arc(double theta) const { return std::polar(arc_radius, theta); }

cplx Contour::leg(double y, bool upper) const { return {0.0, upper ? y : -y}; }

cplx Contour::tail(double t, bool upper) const { return {-f(t), upper ? window + t : -(window + t)}; }

cplx Contour::tail_velocity(double t, bool upper) const { return {upper ? -fprime(t) : fprime(t), 1.0}; }

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(-std::abs(a - b)));
}

const quad::GaussLegendre& gl16() {
    static const quad::GaussLegendre rule(16);
    return rule;
}

const quad::GaussLegendre& gl32() {
    static const quad::GaussLegendre rule(32);
    return rule;
}

// log int_a^b exp(L(t)) dt for smooth L, evaluated relative to the largest
// sampled value so nothing under- or overflows.
template <class L>
double log_block_integral(const L& logf, double a, double b, const quad::GaussLegendre& rule) {
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    std::vector<double> vals(rule.size());
    double ref = kNegInf;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        vals[i] = logf(mid + half * rule.nodes()[i]);
        ref = std::max(ref, vals[i]);
    }
    if (ref == kNegInf) return kNegInf;
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) acc += rule.weights()[i] * std::exp(vals[i] - ref);
    return ref + std::log(half * acc);
}

// log int_T^inf exp(L(t)) dt for non-increasing L, over doubling blocks.
template <class L>
double log_tail_integral(const L& logf, double t0) {
    double acc = kNegInf;
    double a = t0;
    for (int k = 0; k < 2000; ++k) {
        const double b = a > 0.0 ? 2.0 * a : 1.0;
        if (!std::isfinite(b)) break;
        const double block = log_block_integral(logf, a, b, gl16());
        acc = log_add(acc, block);
        if (k >= 4 && block < acc - 40.0) break;
        a = b;
    }
    return acc;
}

double log_sum(double acc, double lf) { return log_add(acc, lf); }

// Logarithm of 1 + z, accurate near z = 0.
cplx clog1p(cplx z) {
    const double n2 = std::norm(z);
    if (n2 < 1e-6) {
        const cplx z2 = z * z;
        return z - z2 * (0.5 - z * (1.0 / 3.0 - z * (0.25 - z * 0.2)));
    }
    if (n2 > 0.25) return std::log(1.0 + z);
    return {0.5 * std::log1p(2.0 * z.real() + n2), std::atan2(z.imag(), 1.0 + z.real())};
}

double re_log1p(cplx z) {
    const double n2 = std::norm(z);
    if (n2 > 0.25) return std::log(std::abs(1.0 + z));
    return 0.5 * std::log1p(2.0 * z.real() + n2);
}

struct PathPieces {
    cplx lower_tail{}, lower_leg{}, arc{}, upper_leg{}, upper_tail{}, extension{};
    cplx total{};
    cplx total_half{};  // the same sum stopped at t_max / 2 (equal to total when t_max = t_base)
    double error = 0.0;
    std::size_t evaluations = 0;
};

// Arc value and automatic tail extent; shared by integration and tail estimates.
template <class G, class M>
cplx prepare_path(const G& g, const M& log_majorant, Contour& c, double tol, bool auto_extend, double scale,
                  double* arc_error, std::size_t* evals) {
    // Composite rule on the two half-arcs; the single full-arc rule gives the error estimate.
    const quad::GaussLegendre rule(c.arc_points);
    auto on_arc = [&](double th) {
        const cplx u = c.arc(th);
        return g(u) * cplx(0.0, 1.0) * u;
    };
    const cplx whole = rule.integrate(on_arc, -0.5 * kPi, 0.5 * kPi);
    const cplx value = rule.integrate(on_arc, -0.5 * kPi, 0.0) + rule.integrate(on_arc, 0.0, 0.5 * kPi);
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag()) || std::abs(value) == 0.0)
        throw NumericalError("arc integral is not finite");
    if (arc_error) *arc_error = std::abs(value - whole);
    if (evals) *evals += 3 * rule.size();

    if (auto_extend) {
        const double log_target = std::log(tol * std::abs(value)) - std::log(2.0);
        for (int k = 0; k < 200; ++k) {
            if (log_tail_integral([&](double t) { return log_majorant(t, c); }, c.t_base) <= log_target) break;
            c.t_base *= 2.0;
        }
    }
    c.t_max = c.t_base * scale;
    return value;
}

// Integrates g(u) du along the whole path; `period` is the oscillation period in
// t along the tails, which caps the block length.
template <class G, class M>
PathPieces integrate_path(const G& g, const M& log_majorant, Contour& c, double tol, double period,
                          bool auto_extend, double scale) {
    PathPieces out;
    double arc_err = 0.0;
    out.arc = prepare_path(g, log_majorant, c, tol, auto_extend, scale, &arc_err, &out.evaluations);
    out.error = arc_err;
    const double abs_tol = tol * std::abs(out.arc);
    const cplx I(0.0, 1.0);

    for (bool upper : {false, true}) {
        auto on_leg = [&](double y) { return g(c.leg(y, upper)) * I; };
        const auto r = quad::adaptive(on_leg, c.arc_radius, c.window, 0.25 * abs_tol, tol);
        if (!r.converged) throw NumericalError("leg quadrature did not converge");
        (upper ? out.upper_leg : out.lower_leg) = r.value;
        out.error += r.error;
        out.evaluations += r.evaluations;
    }

    const double cap = 32.0 * period;
    auto blocks_between = [&](double from, double to, std::vector<std::pair<double, double>>& blocks) {
        double a = from;
        while (a < to) {
            double b = std::min({a > 0.0 ? 2.0 * a : 1.0, a + cap, to});
            if (to - b < 1e-12 * to) b = to;
            blocks.emplace_back(a, b);
            a = b;
        }
    };
    std::vector<std::pair<double, double>> base_blocks, ext_blocks, last_blocks;
    blocks_between(0.0, c.t_base, base_blocks);
    for (double a = c.t_base; a < c.t_max; a *= 2.0)
        blocks_between(a, std::min(2.0 * a, c.t_max), 2.0 * a < c.t_max ? ext_blocks : last_blocks);

    const double log_skip = std::log(abs_tol * 1e-3);
    auto run_blocks = [&](const std::vector<std::pair<double, double>>& blocks, cplx& lower, cplx& upper) {
        for (const auto& [a, b] : blocks) {
            const double mass = std::log(b - a) + log_majorant(a, c);
            if (mass < log_skip) {
                out.error += 2.0 * std::exp(mass);
                continue;
            }
            const double block_tol = 0.5 * abs_tol * std::max((b - a) / c.t_base, 1e-3);
            for (bool up : {false, true}) {
                auto on_tail = [&](double t) { return g(c.tail(t, up)) * c.tail_velocity(t, up); };
                const auto r = quad::adaptive(on_tail, a, b, block_tol, 0.0);
                if (!r.converged) throw NumericalError("tail quadrature did not converge");
                (up ? upper : lower) += r.value;
                out.error += r.error;
                out.evaluations += r.evaluations;
            }
        }
    };
    run_blocks(base_blocks, out.lower_tail, out.upper_tail);
    cplx base = out.lower_tail;
    base += out.lower_leg;
    base += out.arc;
    base += out.upper_leg;
    base += out.upper_tail;

    // Extension blocks are summed last, so stopping early reproduces the bits of
    // a run with the shorter tail.
    cplx ext_lower = 0.0, ext_upper = 0.0;
    run_blocks(ext_blocks, ext_lower, ext_upper);
    out.total_half = base + (ext_lower + ext_upper);
    if (last_blocks.empty()) {
        out.extension = ext_lower + ext_upper;
        out.total = out.total_half;
        return out;
    }
    run_blocks(last_blocks, ext_lower, ext_upper);
    out.extension = ext_lower + ext_upper;
    out.total = base + out.extension;
    return out;
}

Contour base_contour(const DisorderSample& sample, double p, const ContourSpec& spec) {
    spec.validate();
    sample.validate();
    if (!(p > 0.0) || !std::isfinite(p)) throw UsageError("critical offset must be positive");
    const double n = static_cast<double>(sample.dim);
    Contour c;
    c.lambda1 = sample.lambdas.front();
    c.dim = sample.dim;
    c.arc_radius = p;
    c.delta = spec.delta;
    c.arc_points = spec.arc_points;
    const double y0 = std::pow(n, spec.e_hat);
    if (spec.adaptive_window) {
        c.window = std::max(y0, 2.0 * p);
    } else {
        if (p >= y0) throw NumericalError("critical point lies outside the central window N^e_hat");
        c.window = y0;
    }
    const double d_n = n * (sample.lambdas.front() - sample.lambdas.back());
    c.t_base = spec.t_max > 0.0 ? spec.t_max : 2.0 * (p + d_n);
    c.t_max = c.t_base * spec.t_max_scale;
    return c;
}

}  // namespace

Contour build_contour(const DisorderSample& sample, double critical_p, const ContourSpec& spec) {
    return base_contour(sample, critical_p, spec);
}

Contour build_contour(const DisorderSample& sample, const CriticalPoints& points, const ContourSpec& spec) {
    return base_contour(sample, points.p_m, spec);
}

ShiftedIntegrand::ShiftedIntegrand(const DisorderSample& sample, double beta, double big_h_total, double critical_p)
    : d_(scaled_offsets(sample)),
      w_(sample.dim),
      inv_pd_(sample.dim),
      beta_(beta),
      half_a_(0.5 * beta * big_h_total * big_h_total),
      p_(critical_p) {
    for (std::size_t i = 0; i < d_.size(); ++i) {
        const double n = sample.projections[i];
        w_[i] = n * n;
        inv_pd_[i] = 1.0 / (p_ + d_[i]);
        sum_log_pd_ += std::log(p_ + d_[i]);
        sum_w_ += w_[i];
        sum_w_inv_pd_ += w_[i] * inv_pd_[i];
    }
}

cplx ShiftedIntegrand::exponent(cplx u) const {
    const cplx x = u - p_;
    cplx logs = 0.0, rational = 0.0;
    for (std::size_t i = 0; i < d_.size(); ++i) {
        logs += clog1p(x * inv_pd_[i]);
        rational += (w_[i] * inv_pd_[i]) / (u + d_[i]);
    }
    return 0.5 * beta_ * x - 0.5 * logs - half_a_ * x * rational;
}

double ShiftedIntegrand::log_modulus(cplx u) const {
    const cplx x = u - p_;
    double logs = 0.0;
    cplx rational = 0.0;
    for (std::size_t i = 0; i < d_.size(); ++i) {
        logs += re_log1p(x * inv_pd_[i]);
        rational += (w_[i] * inv_pd_[i]) / (u + d_[i]);
    }
    return 0.5 * beta_ * x.real() - 0.5 * logs - half_a_ * (x * rational).real();
}

double ShiftedIntegrand::log_tail_majorant(double t, const Contour& c) const {
    const double f = c.f(t), fp = c.fprime(t);
    const double im = c.window + t;
    const double n = static_cast<double>(d_.size());
    return -0.5 * beta_ * (p_ + f) + 0.5 * sum_log_pd_ - 0.5 * n * std::log(im) + half_a_ * sum_w_ / im -
           half_a_ * sum_w_inv_pd_ + 0.5 * std::log1p(fp * fp);
}

namespace {

struct Prepared {
    ShiftedIntegrand integrand;
    Contour contour;
};

Prepared prepare(const DisorderSample& sample, const ModelParams& params, double field_shift, double critical_p,
                 const ContourSpec& spec) {
    params.validate();
    if (params.dim != sample.dim) throw UsageError("params.dim does not match the sample dimension");
    const double big_h_total = params.big_h + field_shift * std::sqrt(static_cast<double>(sample.dim));
    Prepared out{ShiftedIntegrand(sample, params.beta, big_h_total, critical_p),
                 base_contour(sample, critical_p, spec)};
    return out;
}

double main_period(double beta) { return 4.0 * kPi / beta; }

}  // namespace

ShiftedIntegral integrate_shifted(const DisorderSample& sample, const ModelParams& params, double field_shift,
                                  double critical_p, const ContourSpec& spec) {
    auto prep = prepare(sample, params, field_shift, critical_p, spec);
    const auto& g = prep.integrand;
    auto majorant = [&g](double t, const Contour& c) { return g.log_tail_majorant(t, c); };
    const auto pieces = integrate_path(g, majorant, prep.contour, spec.quad_tol, main_period(params.beta),
                                       spec.t_max <= 0.0, spec.t_max_scale);
    const double n = static_cast<double>(sample.dim);
    ShiftedIntegral out;
    out.value = pieces.total / n;
    out.value_half_tail = pieces.total_half / n;
    out.abs_error = pieces.error / n;
    out.evaluations = pieces.evaluations;
    out.contour = prep.contour;
    out.lower_tail = pieces.lower_tail;
    out.lower_leg = pieces.lower_leg;
    out.arc = pieces.arc;
    out.upper_leg = pieces.upper_leg;
    out.upper_tail = pieces.upper_tail;
    out.extension = pieces.extension;
    return out;
}

ShiftedIntegral integrate_shifted(const DisorderSample& sample, const ModelParams& params, double field_shift,
                                  const CriticalPoints& points, const ContourSpec& spec) {
    return integrate_shifted(sample, params, field_shift, field_shift != 0.0 ? points.p_m : points.p, spec);
}

TailEstimate estimate_tail(const DisorderSample& sample, const ModelParams& params, double field_shift,
                           double critical_p, const Contour& contour) {
    auto prep = prepare(sample, params, field_shift, critical_p, ContourSpec{});
    const auto& g = prep.integrand;
    const Contour& c = contour;
    const double tm = c.t_max;
    if (!(tm > 0.0)) throw UsageError("contour has no tail");

    auto log_abs = [&](double t) {
        const double fp = c.fprime(t);
        return g.log_modulus(c.tail(t, true)) + 0.5 * std::log1p(fp * fp);
    };

    TailEstimate est;
    est.t_max = tm;

    // |g| along the upper tail; the lower tail is its mirror image.
    double decade = kNegInf;
    const double ratio = std::pow(10.0, 1.0 / 16.0);
    for (int k = 0; k < 16; ++k) {
        const double a = tm * std::pow(ratio, k), b = k == 15 ? 10.0 * tm : tm * std::pow(ratio, k + 1);
        decade = log_sum(decade, log_block_integral(log_abs, a, b, gl32()));
    }
    est.log_decade_mass = decade + std::log(2.0);

    const double t10 = 10.0 * tm;
    const double l0 = g.log_modulus(c.tail(tm, true)), l1 = g.log_modulus(c.tail(t10, true));
    const double f0 = c.f(tm), f1 = c.f(t10);
    est.fitted_decay = (l0 - l1) / (f1 - f0);
    if (!(est.fitted_decay > 0.0) || !std::isfinite(est.fitted_decay))
        throw NumericalError("non-decaying tail: fitted decay rate is not positive");
    const double rate = est.fitted_decay;
    const double rigorous = log_tail_integral([&](double t) { return g.log_tail_majorant(t, c); }, t10);
    const double fitted = log_tail_integral(
        [&](double t) {
            const double fp = c.fprime(t);
            return l1 - rate * (c.f(t) - f1) + 0.5 * std::log1p(fp * fp);
        },
        t10);
    est.log_far_bound = std::max(rigorous, fitted) + std::log(2.0);

    const double n = static_cast<double>(sample.dim);
    est.log_truncation_bound = log_add(est.log_decade_mass, est.log_far_bound) - std::log(n);
    est.truncation_bound = std::exp(est.log_truncation_bound);

    // Full modulus integral along the upper tail.
    double c4 = kNegInf;
    double a = 0.0;
    while (a < tm) {
        const double b = std::min(a > 0.0 ? 2.0 * a : 1.0, tm);
        c4 = log_sum(c4, log_block_integral(log_abs, a, b, gl32()));
        a = b;
    }
    c4 = log_add(c4, log_add(est.log_decade_mass, est.log_far_bound) - std::log(2.0));
    est.c4_mass = std::exp(c4);
    return est;
}

double tail_estimate(const DisorderSample& sample, const ModelParams& params, const CriticalPoints& points,
                     const ContourSpec& spec) {
    const double s = params.xi / std::sqrt(static_cast<double>(sample.dim));
    const double p = params.xi != 0.0 ? points.p_m : points.p;
    auto prep = prepare(sample, params, s, p, spec);
    const auto& g = prep.integrand;
    auto majorant = [&g](double t, const Contour& c) { return g.log_tail_majorant(t, c); };
    prepare_path(g, majorant, prep.contour, spec.quad_tol, spec.t_max <= 0.0, spec.t_max_scale, nullptr, nullptr);
    return estimate_tail(sample, params, s, p, prep.contour).truncation_bound;
}

double exact_prefactor_exponent(const DisorderSample& sample, double beta, double big_h, double p,
                                double big_h_shifted, double p_shifted) {
    const auto d = scaled_offsets(sample);
    const double dp = p_shifted - p;
    double logs = 0.0, s = 0.0, ds = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double w = sample.projections[i] * sample.projections[i];
        const double inv = 1.0 / (p + d[i]);
        logs += std::log1p(dp * inv);
        s += w * inv;
        ds += w * inv / (p_shifted + d[i]);
    }
    ds *= -dp;
    const double h2 = big_h * big_h, hm2 = big_h_shifted * big_h_shifted;
    return beta * dp - logs + beta * (hm2 * ds + (hm2 - h2) * s);
}

namespace {

struct MgfPart {
    cplx value, doubled;
    double abs_error;
    double log_truncation;
    double c4_mass;
    double t_max;
    double window;
    std::size_t evaluations;
};

// Integral at the requested t_max together with the doubled-tail run.
MgfPart mgf_part(const DisorderSample& sample, const ModelParams& params, double field_shift, double p,
                 const ContourSpec& spec) {
    ContourSpec doubled = spec;
    doubled.t_max_scale *= 2.0;
    const auto full = integrate_shifted(sample, params, field_shift, p, doubled);
    Contour c = full.contour;
    c.t_max *= 0.5;
    const auto tail = estimate_tail(sample, params, field_shift, p, c);
    if (!(full.value_half_tail.imag() > 0.0) || !(full.value.imag() > 0.0))
        throw NumericalError("contour integral lost its positive imaginary part");
    return {full.value_half_tail, full.value, full.abs_error,  tail.log_truncation_bound, tail.c4_mass,
            c.t_max,              c.window,   full.evaluations};
}

}  // namespace

std::vector<MgfResult> mgf_exact_grid(const DisorderSample& sample, const ModelParams& params,
                                      const std::vector<double>& xis, const ContourSpec& spec) {
    params.validate();
    spec.validate();
    if (params.dim != sample.dim) throw UsageError("params.dim does not match the sample dimension");
    const double n = static_cast<double>(sample.dim);
    const auto base = solve_critical_point(sample, params.beta, params.big_h);
    std::vector<MgfResult> out;
    std::optional<MgfPart> den;
    for (double xi : xis) {
        if (!std::isfinite(xi)) throw UsageError("xi must be finite");
        MgfResult res;
        res.method = MgfMethod::ContourExact;
        auto& dg = res.diagnostics;
        dg["p"] = base.p;
        dg["residual_g"] = base.residual;
        if (xi == 0.0) {
            dg["p_m"] = base.p;
            dg["residual_gm"] = base.residual;
            dg["tail_bound"] = 0.0;
            dg["value_doubled_t_max"] = 1.0;
            dg["doubling_change"] = 0.0;
            out.push_back(std::move(res));
            continue;
        }
        const double shift = params.temperature() * xi;  // H -> H + T xi
        const auto cm = solve_critical_point(sample, params.beta, params.big_h + shift);
        dg["p_m"] = cm.p;
        dg["residual_gm"] = cm.residual;
        if (!den) den = mgf_part(sample, params, 0.0, base.p, spec);
        const auto num = mgf_part(sample, params, shift / std::sqrt(n), cm.p, spec);
        const double expo =
            exact_prefactor_exponent(sample, params.beta, params.big_h, base.p, params.big_h + shift, cm.p);
        const double log_value = 0.5 * expo + std::log(num.value.imag()) - std::log(den->value.imag());
        res.value = std::exp(log_value);
        if (!std::isfinite(res.value) || !(res.value > 0.0)) throw NumericalError("mgf is not a positive finite number");
        const double doubled = std::exp(0.5 * expo + std::log(num.doubled.imag()) - std::log(den->doubled.imag()));

        const double log_rel_tail = log_add(num.log_truncation - std::log(std::abs(num.value)),
                                            den->log_truncation - std::log(std::abs(den->value)));
        const double rel_quad = num.abs_error / std::abs(num.value) + den->abs_error / std::abs(den->value);
        const double tail_bound = std::exp(log_value + log_rel_tail);
        res.abs_error_estimate = res.value * rel_quad + tail_bound;

        dg["prefactor_exponent"] = expo;
        dg["tail_bound"] = tail_bound;
        dg["log_tail_bound"] = log_value + log_rel_tail;
        dg["log_tail_estimate"] = num.log_truncation;
        dg["quad_rel_error"] = rel_quad;
        dg["imag_residue"] = std::max(std::abs(num.value.real()) / num.value.imag(),
                                      std::abs(den->value.real()) / den->value.imag());
        dg["window"] = num.window;
        dg["t_max_num"] = num.t_max;
        dg["t_max_den"] = den->t_max;
        dg["c4_mass_num"] = num.c4_mass;
        dg["evaluations"] = static_cast<double>(num.evaluations + den->evaluations);
        dg["value_doubled_t_max"] = doubled;
        dg["doubling_change"] = std::abs(doubled - res.value);
        out.push_back(std::move(res));
    }
    return out;
}

MgfResult mgf_exact(const DisorderSample& sample, const ModelParams& params, const ContourSpec& spec) {
    return mgf_exact_grid(sample, params, {params.xi}, spec).front();
}

namespace {

// (1/a) (v/a)^{-1/2} exp(v + c/v), c = a b, the Bessel integrand after v = a w.
struct BesselIntegrand {
    cplx a, c;
    cplx operator()(cplx v) const { return std::exp(-0.5 * std::log(v / a) + v + c / v) / a; }
};

}  // namespace

BesselCheck bessel_identity(cplx a, cplx b, const ContourSpec& spec) {
    spec.validate();
    if (!(a.real() > 0.0)) throw UsageError("bessel identity needs Re a > 0");
    if (!std::isfinite(std::abs(b))) throw UsageError("b must be finite");
    if (std::abs(std::arg(a)) > 0.5 * kPi - 0.2)
        throw NumericalError("rotated contour would cross the branch cut of w^{-1/2}");
    const cplx c = a * b;
    BesselIntegrand g{a, c};
    Contour ct;
    ct.lambda1 = 0.0;
    ct.dim = 1;
    ct.arc_radius = std::max(0.5, std::sqrt(std::abs(c)));
    ct.window = 2.0 * ct.arc_radius + 1.0;
    ct.delta = spec.delta;
    ct.arc_points = spec.arc_points;
    ct.t_base = spec.t_max > 0.0 ? spec.t_max : 16.0 * ct.window;
    const double abs_c = std::abs(c), log_a = std::log(std::abs(a));
    auto majorant = [&](double t, const Contour& cc) {
        const double fp = cc.fprime(t);
        const double im = cc.window + t;
        return -0.5 * log_a - 0.5 * std::log(im) - cc.f(t) + abs_c / im + 0.5 * std::log1p(fp * fp);
    };
    const auto pieces = integrate_path(g, majorant, ct, spec.quad_tol, 2.0 * kPi, spec.t_max <= 0.0, spec.t_max_scale);
    BesselCheck out;
    out.quadrature = pieces.total;
    out.closed_form = cplx(0.0, 2.0) * std::sqrt(kPi) / std::sqrt(a) * std::cosh(2.0 * std::sqrt(c));
    out.rel_error = std::abs(out.quadrature - out.closed_form) / std::abs(out.closed_form);
    return out;
}

double log_partition(const DisorderSample& sample, const ModelParams& params, const ContourSpec& spec) {
    params.validate();
    if (params.dim != sample.dim) throw UsageError("params.dim does not match the sample dimension");
    const double n = static_cast<double>(sample.dim);
    const auto cp = solve_critical_point(sample, params.beta, params.big_h);
    const auto integral = integrate_shifted(sample, params, 0.0, cp.p, spec);
    if (!(integral.value.imag() > 0.0)) throw NumericalError("contour integral lost its positive imaginary part");
    const double g_gamma = eval_G(cp.gamma, sample, params, 0.0).real();
    return std::lgamma(0.5 * n) - std::log(2.0 * kPi) - (0.5 * n - 1.0) * std::log(0.5 * n * params.beta) +
           0.5 * n * g_gamma + std::log(integral.value.imag());
}

std::vector<ContourPoint> sample_contour(const DisorderSample& sample, const ModelParams& params, double field_shift,
                                         double critical_p, const ContourSpec& spec, int points_per_segment) {
    if (points_per_segment < 2) throw UsageError("need at least two points per segment");
    auto prep = prepare(sample, params, field_shift, critical_p, spec);
    const auto& g = prep.integrand;
    auto majorant = [&g](double t, const Contour& c) { return g.log_tail_majorant(t, c); };
    prepare_path(g, majorant, prep.contour, spec.quad_tol, spec.t_max <= 0.0, spec.t_max_scale, nullptr, nullptr);
    const Contour& c = prep.contour;
    const int m = points_per_segment;
    std::vector<ContourPoint> pts;
    auto push = [&](const char* seg, double param, cplx u) {
        pts.push_back({seg, param, u, c.to_z(u), g.log_modulus(u)});
    };
    // Tails are sampled on a log scale in 1 + t.
    auto tail_param = [&](int k) { return std::expm1(std::log1p(c.t_max) * k / (m - 1)); };
    for (int k = m - 1; k >= 0; --k) push("lower_tail", tail_param(k), c.tail(tail_param(k), false));
    for (int k = m - 1; k >= 0; --k) {
        const double y = c.arc_radius + (c.window - c.arc_radius) * k / (m - 1);
        push("lower_leg", y, c.leg(y, false));
    }
    for (int k = 0; k < m; ++k) {
        const double th = -0.5 * kPi + kPi * k / (m - 1);
        push("arc", th, c.arc(th));
    }
    for (int k = 0; k < m; ++k) {
        const double y = c.arc_radius + (c.window - c.arc_radius) * k / (m - 1);
        push("upper_leg", y, c.leg(y, true));
    }
    for (int k = 0; k < m; ++k) push("upper_tail", tail_param(k), c.tail(tail_param(k), true));
    return pts;
}

}  // namespace ssk
