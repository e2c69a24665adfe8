#pragma once

#include <cstddef>
#include <cstdint>

#include <Eigen/Dense>

#include "ssk/mgf.hpp"
#include "ssk/rmt.hpp"
#include "ssk/saddle.hpp"

namespace ssk {

struct McConfig {
    std::size_t n_samples = 1000000;
    std::uint64_t seed = 0;
    std::size_t batch = 65536;  // samples per independently seeded batch
    unsigned threads = 0;       // 0: hardware concurrency

    void validate() const;
};

// Minimum effective sample size accepted by the estimators.
inline constexpr double kMinEss = 100.0;

// H(sigma) = -(1/2) sum lambda_i c_i^2 - h sum n_i c_i in eigen-coordinates c.
double hamiltonian_eigen(const DisorderSample& sample, const ModelParams& params, const Eigen::VectorXd& c);

// -(1/2) sigma^T M sigma - h g . sigma.
double hamiltonian_matrix(const GoeDraw& draw, const ModelParams& params, const Eigen::VectorXd& sigma);

// Self-normalized uniform-sphere estimate of <exp(xi sqrt(N) M)>, xi = params.xi.
// Diagnostics: std_error, ess, n_samples, seed.
MgfResult mc_mgf(const DisorderSample& sample, const ModelParams& params, const McConfig& cfg);

// <exp(xi_r R / (1 - T))> over independent replica pairs. Diagnostics also
// carry mean_r, var_r and mean_r_std_error.
MgfResult mc_replica_mgf(const DisorderSample& sample, const ModelParams& params, const McConfig& cfg, double xi_r);

}  // namespace ssk
