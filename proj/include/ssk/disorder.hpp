#pragma once

#include <array>

#include "ssk/rmt.hpp"

namespace ssk {

// m = 1: (1/N) sum_{i>=2} w_i / (lambda_1 - lambda_i)       (lambda scale, normalised)
// m >= 2: sum_{i>=2} w_i / (a_1 - a_i)^m                      (edge scale, unnormalised)
// with w_i = n_i^2 when weighted, 1 otherwise.
double resolvent_sum(const DisorderSample& sample, int m, bool weighted);

// Xi_N = N^{1/3} ((1/N) sum_{i>=2} 1/(lambda_1 - lambda_i) - 1).
double xi_statistic(const DisorderSample& sample);

// Clause-by-clause evaluation of the high-probability event E_eps. The two
// "1 + O(N^{-1/3+eps})" clauses use implied constant `o_constant`.
struct EventReport {
    double epsilon = 0.0;
    double o_constant = 1.0;
    bool clause_n1 = false;
    bool clause_sum1_plain = false;
    bool clause_sum1_weighted = false;
    bool clause_m2_plain = false;
    bool clause_m2_weighted = false;
    bool clause_m3_plain = false;
    bool clause_m3_weighted = false;

    struct Values {
        double n1_sq = 0.0;
        double sum1_plain = 0.0;
        double sum1_weighted = 0.0;
        double m2_plain = 0.0;
        double m2_weighted = 0.0;
        double m3_plain = 0.0;
        double m3_weighted = 0.0;
    } values;

    bool member = false;

    std::array<bool, 7> clauses() const {
        return {clause_n1,        clause_sum1_plain, clause_sum1_weighted, clause_m2_plain,
                clause_m2_weighted, clause_m3_plain,  clause_m3_weighted};
    }
};

EventReport check_event(const DisorderSample& sample, double epsilon, double o_constant = 1.0);

}  // namespace ssk
