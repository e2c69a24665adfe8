#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "ssk/rmt.hpp"

namespace ssk {

// Temperature, microscopic field and MGF argument.
//
// `xi` is the field-shift argument of G_M: the shifted function uses the field
// h + xi/sqrt(N), i.e. H -> H + xi. The field-overlap MGF at argument xi uses a
// shift of T*xi instead; mgf_exact applies that substitution itself.
struct ModelParams {
    std::size_t dim = 1;
    double beta = 1.0;
    double big_h = 0.0;  // H, with h = H N^{-1/2}
    double xi = 0.0;

    double temperature() const { return 1.0 / beta; }
    double h() const { return big_h / std::sqrt(static_cast<double>(dim)); }
    void validate() const;
};

ModelParams params_from_temperature(std::size_t n, double t, double big_h, double xi);

// G(z) = beta z - (1/N) sum log(z - lambda_i) + ((h+s)^2 beta / N) sum n_i^2/(z - lambda_i)
// with principal-branch logarithms; `field_shift` is s (s = xi/sqrt(N) gives G_M).
std::complex<double> eval_G(std::complex<double> z, const DisorderSample& sample, const ModelParams& params,
                            double field_shift);

// (G', G'') by term-wise differentiation.
std::pair<std::complex<double>, std::complex<double>> eval_G_derivatives(std::complex<double> z,
                                                                         const DisorderSample& sample,
                                                                         const ModelParams& params,
                                                                         double field_shift);

// Eigenvalue offsets on the saddle scale, d_i = N (lambda_1 - lambda_i) >= 0.
std::vector<double> scaled_offsets(const DisorderSample& sample);

// A single critical point gamma = lambda_1 + p/N of G with total field
// amplitude H_tot = (h + s) sqrt(N). The residual is |G'(gamma)| evaluated in
// the offset form  beta - sum 1/(p+d_i) - beta H_tot^2 sum n_i^2/(p+d_i)^2.
struct CriticalPoint {
    double gamma = 0.0;
    double p = 0.0;
    double residual = 0.0;
    int iterations = 0;
};

CriticalPoint solve_critical_point(const DisorderSample& sample, double beta, double big_h_total);

// Tolerance on |G'| used by the solver.
double critical_tolerance(double beta);

struct CriticalPoints {
    double gamma = 0.0;
    double p = 0.0;
    double gamma_m = 0.0;
    double p_m = 0.0;
    double residual_g = 0.0;
    double residual_gm = 0.0;
};

// Critical points of G and of G_M (field h + params.xi / sqrt(N)).
CriticalPoints solve_critical(const DisorderSample& sample, const ModelParams& params);

// Positive root of (beta-1) s^2 - s - A = 0, A = H^2 beta n1^2 (or (H+xi)^2 beta n1^2).
double reduced_critical(const ModelParams& params, double n1_abs, bool with_xi);

}  // namespace ssk
