#include "ssk/disorder.hpp"

#include <cmath>

#include "ssk/errors.hpp"

namespace ssk {

namespace {

void require_usable(const DisorderSample& sample) {
    sample.validate();
    if (sample.dim < 2) throw UsageError("resolvent sums need N >= 2");
    const double gap = sample.lambdas[0] - sample.lambdas[1];
    if (gap <= 1e-14 * std::abs(sample.lambdas[0]) || gap <= 0.0)
        throw NumericalError("degenerate top gap: sample unusable for resolvent sums");
}

}  // namespace

double resolvent_sum(const DisorderSample& sample, int m, bool weighted) {
    if (m < 1) throw UsageError("resolvent_sum needs m >= 1");
    require_usable(sample);
    const double n = static_cast<double>(sample.dim);
    const double l1 = sample.lambdas[0];
    double acc = 0.0;
    if (m == 1) {
        for (std::size_t i = 1; i < sample.dim; ++i) {
            const double w = weighted ? sample.projections[i] * sample.projections[i] : 1.0;
            acc += w / (l1 - sample.lambdas[i]);
        }
        return acc / n;
    }
    const double edge = std::pow(n, 2.0 / 3.0);
    for (std::size_t i = 1; i < sample.dim; ++i) {
        const double w = weighted ? sample.projections[i] * sample.projections[i] : 1.0;
        acc += w / std::pow(edge * (l1 - sample.lambdas[i]), m);
    }
    return acc;
}

double xi_statistic(const DisorderSample& sample) {
    const double n = static_cast<double>(sample.dim);
    return std::cbrt(n) * (resolvent_sum(sample, 1, false) - 1.0);
}

EventReport check_event(const DisorderSample& sample, double epsilon, double o_constant) {
    // Acceptance studies use eps = 0.5, so the range is (0, 1) rather than (0, 1/3).
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw UsageError("epsilon must lie in (0, 1)");
    if (!(o_constant > 0.0)) throw UsageError("implied constant must be positive");
    require_usable(sample);

    const double n = static_cast<double>(sample.dim);
    EventReport r;
    r.epsilon = epsilon;
    r.o_constant = o_constant;
    auto& v = r.values;
    v.n1_sq = sample.projections[0] * sample.projections[0];
    v.sum1_plain = resolvent_sum(sample, 1, false);
    v.sum1_weighted = resolvent_sum(sample, 1, true);
    v.m2_plain = resolvent_sum(sample, 2, false);
    v.m2_weighted = resolvent_sum(sample, 2, true);
    v.m3_plain = resolvent_sum(sample, 3, false);
    v.m3_weighted = resolvent_sum(sample, 3, true);

    const double dev = o_constant * std::pow(n, -1.0 / 3.0 + epsilon);
    const double cap = std::pow(n, epsilon);
    r.clause_n1 = std::pow(n, -epsilon) < v.n1_sq && v.n1_sq < epsilon * std::log(n);
    r.clause_sum1_plain = std::abs(v.sum1_plain - 1.0) <= dev;
    r.clause_sum1_weighted = std::abs(v.sum1_weighted - 1.0) <= dev;
    r.clause_m2_plain = v.m2_plain <= cap;
    r.clause_m2_weighted = v.m2_weighted <= cap;
    r.clause_m3_plain = v.m3_plain <= cap;
    r.clause_m3_weighted = v.m3_weighted <= cap;

    r.member = true;
    for (bool c : r.clauses()) r.member = r.member && c;
    return r;
}

}  // namespace ssk
