#include "ssk/mc_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

#include "ssk/errors.hpp"
#include "ssk/rng.hpp"

namespace ssk {

void McConfig::validate() const {
    if (n_samples < 1000) throw UsageError("n_samples must be at least 1000");
    if (batch == 0) throw UsageError("batch must be positive");
}

double hamiltonian_eigen(const DisorderSample& sample, const ModelParams& params, const Eigen::VectorXd& c) {
    double quad = 0.0, lin = 0.0;
    for (std::size_t i = 0; i < sample.dim; ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        quad += sample.lambdas[i] * c[k] * c[k];
        lin += sample.projections[i] * c[k];
    }
    return -0.5 * quad - params.h() * lin;
}

double hamiltonian_matrix(const GoeDraw& draw, const ModelParams& params, const Eigen::VectorXd& sigma) {
    return -0.5 * sigma.dot(draw.matrix * sigma) - params.h() * draw.field.dot(sigma);
}

namespace {

// One uniform point on the radius-sqrt(N) sphere, in eigen-coordinates, together
// with its log Gibbs weight -beta H and the field overlap sqrt(N) M.
struct Draw {
    double log_weight;
    double overlap;  // sum n_i c_i / sqrt(N)
};

template <class Fn>
void for_batches(const McConfig& cfg, Fn&& fn) {
    const std::size_t batches = (cfg.n_samples + cfg.batch - 1) / cfg.batch;
    unsigned workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, batches));
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t b = w; b < batches; b += workers) {
                    const std::size_t begin = b * cfg.batch;
                    const std::size_t end = std::min(cfg.n_samples, begin + cfg.batch);
                    fn(b, begin, end);
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

class SphereSampler {
public:
    SphereSampler(const DisorderSample& sample, const ModelParams& params) : s_(sample), p_(params) {}

    Draw draw(Engine& eng, std::vector<double>& c) const {
        const std::size_t n = s_.dim;
        c.resize(n);
        double norm2 = 0.0;
        for (auto& x : c) {
            x = gauss_(eng);
            norm2 += x * x;
        }
        const double scale = std::sqrt(static_cast<double>(n) / norm2);
        double quad = 0.0, lin = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            c[i] *= scale;
            quad += s_.lambdas[i] * c[i] * c[i];
            lin += s_.projections[i] * c[i];
        }
        return {p_.beta * (0.5 * quad + p_.h() * lin), lin / std::sqrt(static_cast<double>(n))};
    }

private:
    const DisorderSample& s_;
    const ModelParams& p_;
    mutable std::normal_distribution<double> gauss_;
};

void check_inputs(const DisorderSample& sample, const ModelParams& params, const McConfig& cfg) {
    sample.validate();
    params.validate();
    cfg.validate();
    if (params.dim != sample.dim) throw UsageError("params.dim does not match the sample dimension");
}

struct Ratio {
    double value, std_error, ess;
};

// Self-normalized sum(w x)/sum(w) with the delta-method standard error.
Ratio weighted_ratio(const std::vector<double>& log_w, const std::vector<double>& x) {
    const double m = *std::max_element(log_w.begin(), log_w.end());
    double sw = 0.0, sw2 = 0.0, swx = 0.0;
    for (std::size_t k = 0; k < log_w.size(); ++k) {
        const double w = std::exp(log_w[k] - m);
        sw += w;
        sw2 += w * w;
        swx += w * x[k];
    }
    const double r = swx / sw;
    double var = 0.0;
    for (std::size_t k = 0; k < log_w.size(); ++k) {
        const double w = std::exp(log_w[k] - m);
        const double dx = x[k] - r;
        var += w * w * dx * dx;
    }
    return {r, std::sqrt(var) / sw, sw * sw / sw2};
}

void require_ess(double ess) {
    if (!(ess >= kMinEss))
        throw NumericalError("effective sample size below 100; use a smaller N or beta");
}

}  // namespace

MgfResult mc_mgf(const DisorderSample& sample, const ModelParams& params, const McConfig& cfg) {
    check_inputs(sample, params, cfg);
    std::vector<double> log_w(cfg.n_samples), x(cfg.n_samples);
    const SphereSampler base(sample, params);
    for_batches(cfg, [&](std::size_t b, std::size_t begin, std::size_t end) {
        SphereSampler sampler = base;
        Engine eng = make_engine(cfg.seed, b);
        std::vector<double> c;
        for (std::size_t k = begin; k < end; ++k) {
            const Draw d = sampler.draw(eng, c);
            log_w[k] = d.log_weight;
            x[k] = std::exp(params.xi * d.overlap);
        }
    });
    const Ratio r = weighted_ratio(log_w, x);
    require_ess(r.ess);
    MgfResult res;
    res.method = MgfMethod::MonteCarlo;
    res.value = r.value;
    res.abs_error_estimate = r.std_error;
    res.diagnostics["std_error"] = r.std_error;
    res.diagnostics["ess"] = r.ess;
    res.diagnostics["n_samples"] = static_cast<double>(cfg.n_samples);
    res.diagnostics["seed"] = static_cast<double>(cfg.seed);
    return res;
}

MgfResult mc_replica_mgf(const DisorderSample& sample, const ModelParams& params, const McConfig& cfg, double xi_r) {
    check_inputs(sample, params, cfg);
    if (!std::isfinite(xi_r)) throw UsageError("xi_r must be finite");
    const double t = params.temperature();
    if (t == 1.0) throw UsageError("replica scaling 1/(1-T) is undefined at T = 1");
    std::vector<double> log_w(cfg.n_samples), x(cfg.n_samples), rep(cfg.n_samples), rep2(cfg.n_samples);
    const SphereSampler base(sample, params);
    const double n = static_cast<double>(sample.dim);
    for_batches(cfg, [&](std::size_t b, std::size_t begin, std::size_t end) {
        SphereSampler sampler = base;
        Engine eng = make_engine(cfg.seed, b);
        std::vector<double> c1, c2;
        for (std::size_t k = begin; k < end; ++k) {
            const Draw d1 = sampler.draw(eng, c1);
            const Draw d2 = sampler.draw(eng, c2);
            double dot = 0.0;
            for (std::size_t i = 0; i < c1.size(); ++i) dot += c1[i] * c2[i];
            const double r = dot / n;
            log_w[k] = d1.log_weight + d2.log_weight;
            x[k] = std::exp(xi_r * r / (1.0 - t));
            rep[k] = r;
            rep2[k] = r * r;
        }
    });
    const Ratio val = weighted_ratio(log_w, x);
    require_ess(val.ess);
    const Ratio mean = weighted_ratio(log_w, rep);
    const Ratio second = weighted_ratio(log_w, rep2);
    MgfResult res;
    res.method = MgfMethod::MonteCarlo;
    res.value = val.value;
    res.abs_error_estimate = val.std_error;
    auto& dg = res.diagnostics;
    dg["std_error"] = val.std_error;
    dg["ess"] = val.ess;
    dg["n_samples"] = static_cast<double>(cfg.n_samples);
    dg["seed"] = static_cast<double>(cfg.seed);
    dg["mean_r"] = mean.value;
    dg["mean_r_std_error"] = mean.std_error;
    dg["var_r"] = second.value - mean.value * mean.value;
    return res;
}

}  // namespace ssk
