#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ssk/asymptotics.hpp"
#include "ssk/contour.hpp"
#include "ssk/disorder.hpp"
#include "ssk/errors.hpp"
#include "ssk/experiments.hpp"
#include "ssk/io.hpp"
#include "ssk/mc_oracle.hpp"
#include "ssk/rmt.hpp"
#include "ssk/saddle.hpp"

#ifndef SSK_VERSION
#define SSK_VERSION "0.1.0"
#endif

namespace {

using ssk::json;

constexpr int kExitComputation = 1;
constexpr int kExitUsage = 2;

// Where the disorder comes from: a JSON file, or a seeded draw.
struct SampleOptions {
    std::size_t n = 0;
    std::optional<std::uint64_t> seed;
    std::string sampler = "fast";
    std::string sample_file;

    void add(CLI::App* app) {
        app->add_option("--n", n, "dimension N")->check(CLI::PositiveNumber);
        app->add_option("--seed", seed, "seed for the disorder draw (required unless --sample-file)");
        app->add_option("--sampler", sampler, "fast (tridiagonal) or dense (full GOE)")
            ->check(CLI::IsMember({"fast", "dense"}));
        app->add_option("--sample-file", sample_file, "read the disorder sample from JSON");
    }

    ssk::DisorderSample load() const {
        if (!sample_file.empty()) return ssk::load_sample(sample_file);
        if (n == 0) throw ssk::UsageError("--n is required");
        if (!seed) throw ssk::UsageError("--seed is required for stochastic subcommands");
        return sampler == "dense" ? ssk::sample_goe_dense(n, *seed) : ssk::sample_spectrum_fast(n, *seed);
    }
};

// beta or T, and H or h.
struct ModelOptions {
    std::optional<double> beta, temperature, big_h, h_abs;
    double xi = 0.0;

    void add(CLI::App* app, bool with_xi = true) {
        auto* b = app->add_option("--beta", beta, "inverse temperature");
        auto* t = app->add_option("--t", temperature, "temperature T = 1/beta");
        b->excludes(t);
        auto* H = app->add_option("--bigH", big_h, "microscopic field scale H (h = H / sqrt(N))");
        auto* h = app->add_option("--h-abs", h_abs, "raw field strength h");
        H->excludes(h);
        if (with_xi) app->add_option("--xi", xi, "MGF argument");
    }

    ssk::ModelParams params(std::size_t n) const {
        if (!beta && !temperature) throw ssk::UsageError("one of --beta or --t is required");
        if (!big_h && !h_abs) throw ssk::UsageError("one of --bigH or --h-abs is required");
        ssk::ModelParams p;
        p.dim = n;
        p.beta = beta ? *beta : 1.0 / *temperature;
        p.big_h = big_h ? *big_h : *h_abs * std::sqrt(static_cast<double>(n));
        p.xi = xi;
        p.validate();
        return p;
    }
};

struct ContourOptions {
    ssk::ContourSpec spec;
    bool fixed_window = false;
    std::string dump_path;

    void add(CLI::App* app) {
        app->add_option("--e-hat", spec.e_hat, "central window exponent");
        app->add_option("--delta", spec.delta, "tail bend exponent");
        app->add_option("--t-max", spec.t_max, "tail length in saddle units (<= 0: automatic)");
        app->add_option("--t-max-scale", spec.t_max_scale, "extra power-of-two tail extension");
        app->add_option("--quad-tol", spec.quad_tol, "relative quadrature tolerance");
        app->add_option("--arc-points", spec.arc_points, "Gauss-Legendre points per half-arc");
        app->add_flag("--fixed-window", fixed_window, "keep the window at N^e_hat (error if the arc does not fit)");
    }

    ssk::ContourSpec get() const {
        auto s = spec;
        s.adaptive_window = !fixed_window;
        s.validate();
        return s;
    }
};

void print(const json& j) { std::cout << j.dump(2) << "\n"; }

void emit(const json& j, const std::string& output) {
    if (output.empty())
        print(j);
    else
        ssk::write_text(output, j.dump(2) + "\n");
}

void error_json(const std::string& kind, const std::string& message) {
    std::cerr << json{{"error", kind}, {"message", message}}.dump() << "\n";
}

std::string version_text() {
    std::ostringstream os;
    json meta{{"version", SSK_VERSION},
              {"compiler", __VERSION__},
              {"cxx_standard", __cplusplus},
#ifdef NDEBUG
              {"build", "release"},
#else
              {"build", "debug"},
#endif
              {"default_contour", ssk::ContourSpec{}}};
    os << "ssk " << SSK_VERSION << "\n" << meta.dump(2);
    return os.str();
}

std::string contour_csv(const std::vector<ssk::ContourPoint>& pts) {
    std::ostringstream os;
    os << "segment,parameter,u_re,u_im,z_re,z_im,log_modulus\n";
    for (const auto& p : pts) {
        os << p.segment << ',' << ssk::format_double(p.parameter) << ',' << ssk::format_double(p.u.real()) << ','
           << ssk::format_double(p.u.imag()) << ',' << ssk::format_double(p.z.real()) << ','
           << ssk::format_double(p.z.imag()) << ',' << ssk::format_double(p.log_modulus) << '\n';
    }
    return os.str();
}

int study_exit(const std::vector<ssk::Check>& checks, bool pass) {
    if (pass) return 0;
    json failed = json::array();
    for (const auto& c : checks)
        if (!c.pass) failed.push_back(c);
    std::cerr << json{{"error", "threshold"}, {"failed_checks", failed}}.dump() << "\n";
    return kExitComputation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spherical SK overlap toolkit: disorder sampling, saddle points, contour-integral MGFs"};
    app.set_version_flag("--version", version_text());
    app.require_subcommand(1);

    std::string output;
    auto add_output = [&](CLI::App* sub) { sub->add_option("--output", output, "write JSON here instead of stdout"); };

    // sample
    SampleOptions s_sample;
    auto* c_sample = app.add_subcommand("sample", "draw a disorder sample");
    s_sample.add(c_sample);
    add_output(c_sample);

    // check-event
    SampleOptions s_event;
    double epsilon = 0.1, o_constant = 1.0;
    auto* c_event = app.add_subcommand("check-event", "evaluate the high-probability event clause by clause");
    s_event.add(c_event);
    c_event->add_option("--epsilon", epsilon, "event exponent epsilon in (0, 1)");
    c_event->add_option("--o-constant", o_constant, "implied constant of the O(N^{-1/3+eps}) clauses");
    add_output(c_event);

    // solve
    SampleOptions s_solve;
    ModelOptions m_solve;
    auto* c_solve = app.add_subcommand("solve", "critical points of G and G_M");
    s_solve.add(c_solve);
    m_solve.add(c_solve);
    add_output(c_solve);

    // mgf
    SampleOptions s_mgf;
    ModelOptions m_mgf;
    ContourOptions k_mgf;
    std::string method = "contour";
    std::optional<double> n1_flag;
    ssk::McConfig mc_mgf_cfg;
    auto* c_mgf = app.add_subcommand("mgf", "moment generating function of sqrt(N) M");
    s_mgf.add(c_mgf);
    m_mgf.add(c_mgf);
    k_mgf.add(c_mgf);
    c_mgf->add_option("--method", method, "contour, theorem or mc")->check(CLI::IsMember({"contour", "theorem", "mc"}));
    c_mgf->add_option("--n1", n1_flag, "|n_1| for --method theorem without a sample");
    c_mgf->add_option("--samples", mc_mgf_cfg.n_samples, "Monte Carlo sample count");
    c_mgf->add_option("--batch", mc_mgf_cfg.batch, "Monte Carlo batch size");
    c_mgf->add_option("--dump-contour", k_mgf.dump_path, "write the sampled path and integrand modulus as CSV");
    add_output(c_mgf);

    // formulas
    ModelOptions m_form;
    double n1_abs = 0.0;
    auto* c_form = app.add_subcommand("formulas", "closed-form asymptotics at given (T, H, xi, |n1|)");
    m_form.add(c_form);
    c_form->add_option("--n1", n1_abs, "|n_1|")->required();
    add_output(c_form);

    // oracle
    SampleOptions s_orc;
    ModelOptions m_orc;
    ssk::McConfig mc_cfg;
    std::optional<double> xi_r;
    auto* c_orc = app.add_subcommand("oracle", "uniform-sphere importance-sampling estimate");
    s_orc.add(c_orc);
    m_orc.add(c_orc);
    c_orc->add_option("--samples", mc_cfg.n_samples, "sample count");
    c_orc->add_option("--batch", mc_cfg.batch, "batch size");
    c_orc->add_option("--xi-r", xi_r, "replica argument; switches to the replica-overlap MGF");
    add_output(c_orc);

    // studies
    std::string config_path, output_prefix;
    unsigned threads = 0;
    auto add_study = [&](const char* name, const char* help) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "JSON sweep configuration")->required();
        sub->add_option("--output", output_prefix, "output prefix (overrides output_path)");
        sub->add_option("--threads", threads, "worker threads (0: all cores)");
        return sub;
    };
    auto* c_sweep = add_study("sweep", "convergence sweep of the exact MGF against the closed form");
    auto* c_estudy = add_study("event-study", "empirical probability of the high-probability event");
    auto* c_sstudy = add_study("scaling-study", "scaling of the top-gap resolvent sums");

    // bessel-selftest
    double bessel_tol = 1e-8;
    ContourOptions k_bes;
    auto* c_bes = app.add_subcommand("bessel-selftest", "quadrature against the Bessel closed form on an (a, b) grid");
    c_bes->add_option("--tolerance", bessel_tol, "maximum relative error");
    k_bes.add(c_bes);
    k_bes.spec.quad_tol = 1e-11;
    add_output(c_bes);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*c_sample) {
            emit(json(s_sample.load()), output);
        } else if (*c_event) {
            const auto s = s_event.load();
            emit(json(ssk::check_event(s, epsilon, o_constant)), output);
        } else if (*c_solve) {
            const auto s = s_solve.load();
            const auto p = m_solve.params(s.dim);
            json j{{"params", p}, {"critical", ssk::solve_critical(s, p)}, {"tolerance", ssk::critical_tolerance(p.beta)}};
            if (p.beta > 1.0) {
                const double n1 = std::abs(s.projections.front());
                j["reduced"] = {{"p", ssk::reduced_critical(p, n1, false)}, {"p_m", ssk::reduced_critical(p, n1, true)}};
            }
            emit(j, output);
        } else if (*c_mgf) {
            json j;
            if (method == "theorem" && n1_flag) {
                if (!m_mgf.beta && !m_mgf.temperature) throw ssk::UsageError("one of --beta or --t is required");
                const auto p = m_mgf.params(s_mgf.n ? s_mgf.n : 1);
                ssk::MgfResult r;
                r.method = ssk::MgfMethod::ClosedForm;
                r.value = ssk::mgf_theorem(p, *n1_flag);
                j = r;
            } else {
                const auto s = s_mgf.load();
                const auto p = m_mgf.params(s.dim);
                if (method == "contour") {
                    const auto spec = k_mgf.get();
                    j = ssk::mgf_exact(s, p, spec);
                    if (!k_mgf.dump_path.empty()) {
                        const auto cp = ssk::solve_critical(s, ssk::ModelParams{p.dim, p.beta, p.big_h, p.temperature() * p.xi});
                        const double shift = p.temperature() * p.xi / std::sqrt(static_cast<double>(s.dim));
                        const auto pts = ssk::sample_contour(s, p, shift, p.xi != 0.0 ? cp.p_m : cp.p, spec, 200);
                        ssk::write_text(k_mgf.dump_path, contour_csv(pts));
                    }
                } else if (method == "theorem") {
                    ssk::MgfResult r;
                    r.method = ssk::MgfMethod::ClosedForm;
                    r.value = ssk::mgf_theorem(p, std::abs(s.projections.front()));
                    j = r;
                } else {
                    auto cfg = mc_mgf_cfg;
                    cfg.seed = s_mgf.seed.value_or(0);
                    const auto r = ssk::mc_mgf(s, p, cfg);
                    j = r;
                    j["std_error"] = r.diagnostics.at("std_error");
                    j["ess"] = r.diagnostics.at("ess");
                    j["n_samples"] = cfg.n_samples;
                    j["seed"] = cfg.seed;
                }
            }
            emit(j, output);
        } else if (*c_form) {
            const auto p = m_form.params(1);
            json j{{"T", p.temperature()}, {"H", p.big_h}, {"xi", p.xi}, {"n1_abs", n1_abs}};
            j["field"] = {{"mgf_theorem", ssk::mgf_theorem(p, n1_abs)},
                          {"moments", ssk::overlap_moments(p, n1_abs)},
                          {"decomposition", ssk::bernoulli_gauss_decomposition(p, n1_abs)}};
            j["replica"] = {{"mgf_theorem", ssk::replica_mgf_theorem(p, n1_abs)},
                            {"p", ssk::replica_p(p, n1_abs)}};
            const double ps = ssk::reduced_critical(p, n1_abs, false), pm = ssk::reduced_critical(p, n1_abs, true);
            j["prefactor"] = {{"p", ps}, {"p_m", pm}, {"exponent", ssk::prefactor_exponent(ps, pm, p)}};
            emit(j, output);
        } else if (*c_orc) {
            const auto s = s_orc.load();
            const auto p = m_orc.params(s.dim);
            auto cfg = mc_cfg;
            cfg.seed = s_orc.seed.value_or(0);
            const auto r = xi_r ? ssk::mc_replica_mgf(s, p, cfg, *xi_r) : ssk::mc_mgf(s, p, cfg);
            json j = r;
            j["std_error"] = r.diagnostics.at("std_error");
            j["ess"] = r.diagnostics.at("ess");
            j["n_samples"] = cfg.n_samples;
            j["seed"] = cfg.seed;
            emit(j, output);
        } else if (*c_sweep || *c_estudy || *c_sstudy) {
            auto cfg = ssk::load_sweep_config(config_path);
            if (!output_prefix.empty()) cfg.output_path = output_prefix;
            if (threads) cfg.threads = threads;
            if (cfg.output_path.empty()) throw ssk::UsageError("no output path: set output_path or --output");
            std::vector<ssk::Check> checks;
            bool pass = true;
            if (*c_sweep) {
                const auto r = ssk::convergence_sweep(cfg);
                ssk::write_outputs(cfg, r);
                print(json{{"groups", r.groups}, {"checks", r.checks}, {"pass", r.pass()}});
                checks = r.checks;
                pass = r.pass();
            } else if (*c_estudy) {
                const auto r = ssk::event_probability_study(cfg);
                ssk::write_outputs(cfg, r);
                print(json{{"rows", r.rows}, {"checks", r.checks}, {"pass", r.pass()}});
                checks = r.checks;
                pass = r.pass();
            } else {
                const auto r = ssk::sum_scaling_study(cfg);
                ssk::write_outputs(cfg, r);
                print(json{{"rows", r.rows},
                           {"slope_plain", r.slope_plain},
                           {"slope_weighted", r.slope_weighted},
                           {"spearman_median_abs_xi", r.spearman_xi},
                           {"checks", r.checks},
                           {"pass", r.pass()}});
                checks = r.checks;
                pass = r.pass();
            }
            return study_exit(checks, pass);
        } else if (*c_bes) {
            const auto spec = k_bes.get();
            json rows = json::array();
            double worst = 0.0;
            for (double a : {0.1, 0.5, 1.0, 3.0, 10.0}) {
                for (double b : {0.0, 0.5, 2.0, 5.0, 10.0}) {
                    const auto r = ssk::bessel_identity(a, b, spec);
                    worst = std::max(worst, r.rel_error);
                    rows.push_back({{"a", a}, {"b", b}, {"rel_error", r.rel_error}, {"pass", r.rel_error <= bessel_tol}});
                }
            }
            const bool pass = worst <= bessel_tol;
            emit(json{{"rows", rows}, {"max_rel_error", worst}, {"tolerance", bessel_tol}, {"pass", pass}}, output);
            return pass ? 0 : kExitComputation;
        }
    } catch (const ssk::UsageError& e) {
        error_json("usage", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        error_json("computation", e.what());
        return kExitComputation;
    }
    return 0;
}
