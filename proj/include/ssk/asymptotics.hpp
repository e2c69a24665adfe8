#pragma once

#include <string_view>

#include "ssk/saddle.hpp"

namespace ssk {

// All closed forms take params.beta = 1/T, params.big_h = H, params.xi = xi in
// the temperature parameterization <exp(xi sqrt(N) M)>, unless the name says
// otherwise. They require 0 < T < 1.

// exp(H xi + T xi^2/2) cosh((H + T xi) k / T) / cosh(H k / T), k = |n1| sqrt(1-T).
double mgf_theorem(const ModelParams& params, double n1_abs);

// Same law at argument beta xi, i.e. <exp(beta xi sqrt(N) M)>.
double mgf_theorem_beta(const ModelParams& params, double n1_abs);

struct OverlapMoments {
    double mean = 0.0;            // of sqrt(N) M
    double variance = 0.0;        // of sqrt(N) M
    double susceptibility = 0.0;  // <M>/h
};

OverlapMoments overlap_moments(const ModelParams& params, double n1_abs);

enum class OverlapKind { FieldOverlap, ReplicaOverlap };

std::string_view to_string(OverlapKind k);

// Gaussian(gauss_mean, gauss_var) plus an independent two-atom law on
// {+atom, -atom} with P(+atom) = p_plus.
struct OverlapLaw {
    double gauss_mean = 0.0;
    double gauss_var = 0.0;
    double atom = 0.0;
    double p_plus = 0.5;
    OverlapKind kind = OverlapKind::FieldOverlap;

    double mgf(double xi) const;
};

OverlapLaw bernoulli_gauss_decomposition(const ModelParams& params, double n1_abs);

// -log(p_m/p) + 2(beta-1)(p_m - p) + (2 H xi + xi^2) beta, with xi the field
// shift (H -> H + xi) used for p_m.
double prefactor_exponent(double p, double p_m, const ModelParams& params);

// (cosh(c) e^xi + e^-xi) / (cosh(c) + 1), c = 2 sqrt(1-T) H |n1| / T, for
// <exp(xi R/(1-T))>; params.xi is the replica argument.
double replica_mgf_theorem(const ModelParams& params, double n1_abs);

// cosh(c) / (cosh(c) + 1).
double replica_p(const ModelParams& params, double n1_abs);

// Two-atom law on {+1, -1} for R/(1-T).
OverlapLaw replica_overlap_law(const ModelParams& params, double n1_abs);

}  // namespace ssk
