#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace ssk {

enum class Provenance { DenseGoe, FastSpectral, Synthetic };

std::string_view to_string(Provenance p);
Provenance provenance_from_string(std::string_view s);

// One draw of the quenched randomness: eigenvalues of the coupling matrix in
// descending order and the coordinates n_i = g . u_i of the field vector in the
// matching eigenbasis.
struct DisorderSample {
    std::size_t dim = 0;
    std::vector<double> lambdas;
    std::vector<double> projections;
    std::uint64_t seed = 0;
    Provenance provenance = Provenance::Synthetic;

    // Throws UsageError unless sizes agree, dim >= 1 and lambdas are non-increasing.
    void validate() const;

    double top() const { return lambdas.front(); }
};

DisorderSample make_synthetic(std::vector<double> lambdas, std::vector<double> projections);

// Everything produced by a dense GOE draw. The matrix and eigenvectors are kept
// so the eigen-coordinate formulas can be checked against the matrix forms.
struct GoeDraw {
    Eigen::MatrixXd matrix;
    Eigen::VectorXd field;
    Eigen::MatrixXd eigenvectors;  // column i pairs with sample.lambdas[i]
    DisorderSample sample;
};

GoeDraw draw_goe_dense(std::size_t n, std::uint64_t seed);

// Off-diagonal variance 1/N, diagonal 2/N; projections from an independent
// standard Gaussian vector on the same seeded stream.
DisorderSample sample_goe_dense(std::size_t n, std::uint64_t seed);

// Same joint law as sample_goe_dense via the beta = 1 tridiagonal model, with
// projections drawn i.i.d. N(0,1) (orthogonal invariance). O(N^2).
DisorderSample sample_spectrum_fast(std::size_t n, std::uint64_t seed);

double semicircle_density(double x);
double semicircle_cdf(double x);

// lambda_hat_i solving  int_{lambda_hat_i}^2 d sigma_sc = i/N,  i = 1..N.
std::vector<double> classical_locations(std::size_t n);

// -(3 pi i / 2)^{2/3}, the heuristic edge location of the i-th rescaled eigenvalue.
double airy_reference(std::size_t i);

struct EdgeProfile {
    std::vector<double> a;          // N^{2/3} (lambda_i - 2)
    std::vector<double> gaps;       // a_1 - a_j, j = 2..N
    std::vector<double> classical;  // classical locations
    std::vector<double> reference;  // airy_reference(i), i = 1..N
};

EdgeProfile edge_profile(const DisorderSample& sample);

// True when a_1 - a_j >= c j^{2/3} for every j in [j_min, N^{2/5}] (1-based j).
bool edge_gap_condition(const EdgeProfile& profile, double c, std::size_t j_min);

}  // namespace ssk
