#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

namespace ssk::quad {

using cplx = std::complex<double>;

struct Result {
    cplx value{};
    double error = 0.0;
    std::size_t evaluations = 0;
    std::size_t intervals = 0;
    bool converged = false;
};

// n-point Gauss-Legendre rule on [-1, 1].
class GaussLegendre {
public:
    explicit GaussLegendre(int n) : nodes_(static_cast<std::size_t>(n)), weights_(static_cast<std::size_t>(n)) {
        const int m = (n + 1) / 2;
        for (int i = 0; i < m; ++i) {
            double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = pk;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            const double w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes_[static_cast<std::size_t>(i)] = -x;
            nodes_[static_cast<std::size_t>(n - 1 - i)] = x;
            weights_[static_cast<std::size_t>(i)] = w;
            weights_[static_cast<std::size_t>(n - 1 - i)] = w;
        }
    }

    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }
    std::size_t size() const { return nodes_.size(); }

    template <class F>
    cplx integrate(F&& f, double a, double b) const {
        const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        cplx acc = 0.0;
        for (std::size_t i = 0; i < nodes_.size(); ++i) acc += weights_[i] * cplx(f(mid + half * nodes_[i]));
        return half * acc;
    }

private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

namespace detail {

// 21-point Kronrod extension of the 10-point Gauss rule (abscissae >= 0).
inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525478797, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
// Gauss weights for kXgk[1], kXgk[3], ..., kXgk[9].
inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
    double a, b;
    cplx value;
    double error;
};

template <class F>
Panel gk21(F& f, double a, double b) {
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    const cplx fc = f(mid);
    cplx kron = kWgk[10] * fc;
    cplx gauss = 0.0;
    for (std::size_t j = 0; j < 10; ++j) {
        const double dx = half * kXgk[j];
        const cplx s = cplx(f(mid - dx)) + cplx(f(mid + dx));
        kron += kWgk[j] * s;
        if (j % 2 == 1) gauss += kWg[j / 2] * s;
    }
    kron *= half;
    gauss *= half;
    return {a, b, kron, std::abs(kron - gauss)};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod (10/21) on [a, b]. Panels are refined in
// order of their error estimate until the summed error is below
// max(abs_tol, rel_tol |I|). The returned value is the left-to-right sum of the
// final panels, so identical inputs give identical bits.
template <class F>
Result adaptive(F&& f, double a, double b, double abs_tol, double rel_tol, std::size_t max_intervals = 50000) {
    Result res;
    if (a == b) {
        res.converged = true;
        return res;
    }
    std::vector<detail::Panel> panels;
    panels.reserve(64);
    panels.push_back(detail::gk21(f, a, b));
    res.evaluations = 21;
    auto by_error = [](const detail::Panel& x, const detail::Panel& y) { return x.error < y.error; };

    cplx total = panels.front().value;
    double err = panels.front().error;
    while (true) {
        if (err <= std::max(abs_tol, rel_tol * std::abs(total))) {
            res.converged = true;
            break;
        }
        if (panels.size() >= max_intervals) break;
        std::pop_heap(panels.begin(), panels.end(), by_error);
        const detail::Panel worst = panels.back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // Cannot split any further in double precision.
            std::push_heap(panels.begin(), panels.end(), by_error);
            break;
        }
        panels.pop_back();
        const auto left = detail::gk21(f, worst.a, mid);
        const auto right = detail::gk21(f, mid, worst.b);
        res.evaluations += 42;
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        panels.push_back(left);
        std::push_heap(panels.begin(), panels.end(), by_error);
        panels.push_back(right);
        std::push_heap(panels.begin(), panels.end(), by_error);
    }
    std::sort(panels.begin(), panels.end(), [](const detail::Panel& x, const detail::Panel& y) { return x.a < y.a; });
    res.value = 0.0;
    res.error = 0.0;
    for (const auto& p : panels) {
        res.value += p.value;
        res.error += p.error;
    }
    res.intervals = panels.size();
    return res;
}

}  // namespace ssk::quad
