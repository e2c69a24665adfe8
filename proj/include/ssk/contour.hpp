#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "ssk/mgf.hpp"
#include "ssk/rmt.hpp"
#include "ssk/saddle.hpp"

namespace ssk {

using cplx = std::complex<double>;

// Geometry and accuracy knobs of the deformed integration path.
struct ContourSpec {
    double e_hat = (1.0 - 3.0 * 0.1) / 7.0;  // central window half-height N^{e_hat}
    double delta = 0.25;                     // tail bend f(t) = (t+1)^delta - 1
    // End of the integrated tail in saddle units. <= 0 selects the default
    // 2 (gamma - lambda_N) N, extended by doubling while the tail majorant
    // still exceeds quad_tol relative to the integral.
    double t_max = 0.0;
    // Extra doublings appended after the base tail (1, 2, 4, ...).
    double t_max_scale = 1.0;
    double quad_tol = 1e-10;
    int arc_points = 64;
    // Widen the window to 2 x arc radius when N^{e_hat} would not clear the arc.
    bool adaptive_window = true;

    void validate() const;
};

// Path in the saddle variable u = N (z - lambda_1), traversed from -i inf to +i inf:
//   lower tail   u = -f(t) - i (Y + t),  t from t_max down to 0
//   C1           u = -i y,               y from Y down to r
//   C2           u = r e^{i theta},      theta in [-pi/2, pi/2]
//   C3           u = i y,                y from r up to Y
//   upper tail   u = -f(t) + i (Y + t),  t from 0 up to t_max
// with f(t) = (t + 1)^delta - 1. Only the arc meets the real axis, at u = r > 0.
struct Contour {
    double lambda1 = 0.0;
    std::size_t dim = 1;
    double arc_radius = 0.0;  // r, the critical offset p
    double window = 0.0;      // Y
    double delta = 0.25;
    double t_base = 0.0;  // end of the base tail
    double t_max = 0.0;   // end of the integrated tail, a power-of-two multiple of t_base
    int arc_points = 64;

    double f(double t) const;
    double fprime(double t) const;
    cplx arc(double theta) const;
    cplx leg(double y, bool upper) const;
    cplx tail(double t, bool upper) const;
    // du/dt along the tail in the direction of traversal (t increasing for the
    // upper tail, decreasing for the lower tail, sign folded in).
    cplx tail_velocity(double t, bool upper) const;
    cplx to_z(cplx u) const { return lambda1 + u / static_cast<double>(dim); }
};

// Contour around a critical offset p (the arc passes through lambda_1 + p/N).
Contour build_contour(const DisorderSample& sample, double critical_p, const ContourSpec& spec);

// Contour for the field-shifted integral (arc through gamma_M).
Contour build_contour(const DisorderSample& sample, const CriticalPoints& points, const ContourSpec& spec);

// exp((N/2)(G_s(lambda_1 + u/N) - G_s(lambda_1 + p/N))) for total field
// amplitude H_tot = (h + s) sqrt(N). The exponent is assembled term by term from
// log(1 + (u-p)/(p+d_i)) and rational differences so it stays O(1) near the
// saddle for any N.
class ShiftedIntegrand {
public:
    ShiftedIntegrand(const DisorderSample& sample, double beta, double big_h_total, double critical_p);

    cplx exponent(cplx u) const;
    cplx operator()(cplx u) const { return std::exp(exponent(u)); }
    double log_modulus(cplx u) const;
    // Upper bound on log(|integrand| |du/dt|) along either tail at parameter t;
    // non-increasing in t.
    double log_tail_majorant(double t, const Contour& c) const;

    std::size_t dim() const { return d_.size(); }
    double critical_p() const { return p_; }

private:
    std::vector<double> d_;
    std::vector<double> w_;
    std::vector<double> inv_pd_;
    double beta_;
    double half_a_;  // beta H_tot^2 / 2
    double p_;
    double sum_log_pd_ = 0.0;
    double sum_w_ = 0.0;
    double sum_w_inv_pd_ = 0.0;
};

struct ShiftedIntegral {
    cplx value{};             // int exp((N/2)(G_s(z) - G_s(gamma_s))) dz
    cplx value_half_tail{};   // the same integral with the tail stopped at t_max / 2
    double abs_error = 0.0;   // quadrature error + skipped majorant mass, z units
    std::size_t evaluations = 0;
    Contour contour;
    // Per-piece values in u units, summed in this order.
    cplx lower_tail{}, lower_leg{}, arc{}, upper_leg{}, upper_tail{}, extension{};
};

ShiftedIntegral integrate_shifted(const DisorderSample& sample, const ModelParams& params, double field_shift,
                                  double critical_p, const ContourSpec& spec);

// Uses p_m when field_shift != 0, p otherwise.
ShiftedIntegral integrate_shifted(const DisorderSample& sample, const ModelParams& params, double field_shift,
                                  const CriticalPoints& points, const ContourSpec& spec);

// Bound on the integral mass discarded beyond t_max (both tails), plus the
// full C4 modulus integral and the fitted stretched-exponential decay rate.
struct TailEstimate {
    double t_max = 0.0;
    double truncation_bound = 0.0;      // z units
    double log_truncation_bound = 0.0;  // natural log of the above
    double log_decade_mass = 0.0;       // log of int_{t_max}^{10 t_max} |g| |du/dt| dt (both tails, u units)
    double log_far_bound = 0.0;         // log of the bound beyond 10 t_max (both tails, u units)
    double fitted_decay = 0.0;          // C'' in exp(-C'' ((t+1)^delta - 1))
    double c4_mass = 0.0;               // int_0^inf |g(u(t))| dt along the upper tail, u units
};

TailEstimate estimate_tail(const DisorderSample& sample, const ModelParams& params, double field_shift,
                           double critical_p, const Contour& contour);

// Truncation bound (z units) for the field-shifted integral with the contour
// integrate_shifted would use.
double tail_estimate(const DisorderSample& sample, const ModelParams& params, const CriticalPoints& points,
                     const ContourSpec& spec);

// N (G_s'(gamma_s') - G_s(gamma_s)) assembled from per-eigenvalue differences.
double exact_prefactor_exponent(const DisorderSample& sample, double beta, double big_h, double p,
                                double big_h_shifted, double p_shifted);

// <exp(xi sqrt(N) M)> at finite N from the ratio of contour integrals; uses a
// field shift of T xi / sqrt(N). The integrals are carried to 2 t_max as well;
// diagnostics "value_doubled_t_max" and "doubling_change" report that run, whose
// value is bit-identical to calling with t_max_scale doubled.
MgfResult mgf_exact(const DisorderSample& sample, const ModelParams& params, const ContourSpec& spec = {});

// mgf_exact for each xi in `xis` (params.xi is ignored), sharing the denominator.
std::vector<MgfResult> mgf_exact_grid(const DisorderSample& sample, const ModelParams& params,
                                      const std::vector<double>& xis, const ContourSpec& spec = {});

// (quadrature, closed form) of int_{0+ + iR} w^{-1/2} exp(a w + b/w) dw.
struct BesselCheck {
    cplx quadrature{};
    cplx closed_form{};
    double rel_error = 0.0;
};

BesselCheck bessel_identity(cplx a, cplx b, const ContourSpec& spec = {});

// log Z_N through the contour representation of the partition function.
double log_partition(const DisorderSample& sample, const ModelParams& params, const ContourSpec& spec = {});

// Points along the path with the log-modulus of the integrand, for plotting.
struct ContourPoint {
    std::string segment;
    double parameter;
    cplx u;
    cplx z;
    double log_modulus;
};

std::vector<ContourPoint> sample_contour(const DisorderSample& sample, const ModelParams& params, double field_shift,
                                         double critical_p, const ContourSpec& spec, int points_per_segment);

}  // namespace ssk
