#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace ssk::stats {

double median(std::vector<double> xs);

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
    double half_width() const { return 0.5 * (hi - lo); }
};

// Wilson score interval for a binomial proportion at the given two-sided level.
Interval wilson(std::size_t successes, std::size_t trials, double level = 0.95);

// OLS slope of y on x.
double regression_slope(const std::vector<double>& x, const std::vector<double>& y);

// Spearman rank correlation with average ranks for ties.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

// One-sample Kolmogorov-Smirnov test against a continuous CDF (asymptotic p-value).
KsResult ks_one_sample(std::vector<double> xs, const std::function<double(double)>& cdf);

// Two-sample Kolmogorov-Smirnov test (asymptotic p-value).
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

// P(sqrt(n) D > x) in the large-n limit.
double kolmogorov_survival(double x);

}  // namespace ssk::stats
