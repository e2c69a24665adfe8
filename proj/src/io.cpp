#include "ssk/io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ssk/errors.hpp"

namespace ssk {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

json complex_json(std::complex<double> z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

void to_json(json& j, const DisorderSample& s) {
    j = json{{"dim", s.dim},
             {"lambdas", s.lambdas},
             {"projections", s.projections},
             {"seed", s.seed},
             {"provenance", std::string(to_string(s.provenance))}};
}

void from_json(const json& j, DisorderSample& s) {
    try {
        s.lambdas = j.at("lambdas").get<std::vector<double>>();
        s.projections = j.at("projections").get<std::vector<double>>();
        s.dim = j.value("dim", s.lambdas.size());
        s.seed = j.value("seed", std::uint64_t{0});
        s.provenance = provenance_from_string(j.value("provenance", std::string("synthetic")));
    } catch (const json::exception& e) {
        throw UsageError(std::string("malformed sample: ") + e.what());
    }
    s.validate();
}

void to_json(json& j, const ModelParams& p) {
    j = json{{"dim", p.dim}, {"beta", p.beta}, {"T", p.temperature()}, {"H", p.big_h}, {"h", p.h()}, {"xi", p.xi}};
}

void to_json(json& j, const CriticalPoints& c) {
    j = json{{"gamma", c.gamma},           {"p", c.p},          {"gamma_m", c.gamma_m},
             {"p_m", c.p_m},               {"residual_g", c.residual_g}, {"residual_gm", c.residual_gm}};
}

void to_json(json& j, const MgfResult& r) {
    j = json{{"value", r.value},
             {"method", std::string(to_string(r.method))},
             {"abs_error_estimate", r.abs_error_estimate},
             {"diagnostics", r.diagnostics}};
}

void to_json(json& j, const EventReport& r) {
    j = json{{"epsilon", r.epsilon},
             {"o_constant", r.o_constant},
             {"member", r.member},
             {"clauses",
              {{"n1", r.clause_n1},
               {"sum1_plain", r.clause_sum1_plain},
               {"sum1_weighted", r.clause_sum1_weighted},
               {"m2_plain", r.clause_m2_plain},
               {"m2_weighted", r.clause_m2_weighted},
               {"m3_plain", r.clause_m3_plain},
               {"m3_weighted", r.clause_m3_weighted}}},
             {"values",
              {{"n1_sq", r.values.n1_sq},
               {"sum1_plain", r.values.sum1_plain},
               {"sum1_weighted", r.values.sum1_weighted},
               {"m2_plain", r.values.m2_plain},
               {"m2_weighted", r.values.m2_weighted},
               {"m3_plain", r.values.m3_plain},
               {"m3_weighted", r.values.m3_weighted}}}};
}

void to_json(json& j, const ContourSpec& s) {
    j = json{{"e_hat", s.e_hat},
             {"delta", s.delta},
             {"t_max", s.t_max},
             {"t_max_scale", s.t_max_scale},
             {"quad_tol", s.quad_tol},
             {"arc_points", s.arc_points},
             {"adaptive_window", s.adaptive_window}};
}

void from_json(const json& j, ContourSpec& s) {
    try {
        s.e_hat = j.value("e_hat", s.e_hat);
        s.delta = j.value("delta", s.delta);
        s.t_max = j.value("t_max", s.t_max);
        s.t_max_scale = j.value("t_max_scale", s.t_max_scale);
        s.quad_tol = j.value("quad_tol", s.quad_tol);
        s.arc_points = j.value("arc_points", s.arc_points);
        s.adaptive_window = j.value("adaptive_window", s.adaptive_window);
    } catch (const json::exception& e) {
        throw UsageError(std::string("malformed contour spec: ") + e.what());
    }
    s.validate();
}

void to_json(json& j, const Contour& c) {
    j = json{{"lambda1", c.lambda1}, {"dim", c.dim},       {"arc_radius", c.arc_radius}, {"window", c.window},
             {"delta", c.delta},     {"t_base", c.t_base}, {"t_max", c.t_max},           {"arc_points", c.arc_points}};
}

void to_json(json& j, const TailEstimate& t) {
    j = json{{"t_max", t.t_max},
             {"truncation_bound", t.truncation_bound},
             {"log_truncation_bound", t.log_truncation_bound},
             {"log_decade_mass", t.log_decade_mass},
             {"log_far_bound", t.log_far_bound},
             {"fitted_decay", t.fitted_decay},
             {"c4_mass", t.c4_mass}};
}

void to_json(json& j, const BesselCheck& b) {
    j = json{{"quadrature", complex_json(b.quadrature)},
             {"closed_form", complex_json(b.closed_form)},
             {"rel_error", b.rel_error}};
}

void to_json(json& j, const OverlapMoments& m) {
    j = json{{"mean", m.mean}, {"variance", m.variance}, {"susceptibility", m.susceptibility}};
}

void to_json(json& j, const OverlapLaw& l) {
    j = json{{"gauss_mean", l.gauss_mean},
             {"gauss_var", l.gauss_var},
             {"atom", l.atom},
             {"p_plus", l.p_plus},
             {"kind", std::string(to_string(l.kind))}};
}

namespace {

template <class T>
void put(json& j, const char* key, const std::optional<T>& v) {
    if (v) j[key] = *v;
}

template <class T>
void get(const json& j, const char* key, std::optional<T>& v) {
    if (j.contains(key)) v = j.at(key).get<T>();
}

}  // namespace

void to_json(json& j, const Thresholds& t) {
    j = json::object();
    put(j, "max_median_rel_error", t.max_median_rel_error);
    put(j, "monotone_median_rel_error", t.monotone_median_rel_error);
    put(j, "min_on_event_records", t.min_on_event_records);
    put(j, "tail_ceiling", t.tail_ceiling);
    put(j, "doubling_within_tail", t.doubling_within_tail);
    put(j, "tail_median_decreasing", t.tail_median_decreasing);
    put(j, "p_above_temperature", t.p_above_temperature);
    j["max_failure_fraction"] = t.max_failure_fraction;
    put(j, "event_above_bound", t.event_above_bound);
    put(j, "slope_min", t.slope_min);
    put(j, "slope_max", t.slope_max);
    put(j, "max_abs_spearman", t.max_abs_spearman);
    put(j, "max_plain_weighted_ratio", t.max_plain_weighted_ratio);
}

void from_json(const json& j, Thresholds& t) {
    get(j, "max_median_rel_error", t.max_median_rel_error);
    get(j, "monotone_median_rel_error", t.monotone_median_rel_error);
    get(j, "min_on_event_records", t.min_on_event_records);
    get(j, "tail_ceiling", t.tail_ceiling);
    get(j, "doubling_within_tail", t.doubling_within_tail);
    get(j, "tail_median_decreasing", t.tail_median_decreasing);
    get(j, "p_above_temperature", t.p_above_temperature);
    t.max_failure_fraction = j.value("max_failure_fraction", t.max_failure_fraction);
    get(j, "event_above_bound", t.event_above_bound);
    get(j, "slope_min", t.slope_min);
    get(j, "slope_max", t.slope_max);
    get(j, "max_abs_spearman", t.max_abs_spearman);
    get(j, "max_plain_weighted_ratio", t.max_plain_weighted_ratio);
}

void to_json(json& j, const SweepConfig& c) {
    j = json{{"n_grid", c.n_grid},
             {"t_value", c.t_value},
             {"h_scale", c.h_scale},
             {"xi_grid", c.xi_grid},
             {"seeds", c.seeds},
             {"epsilon", c.epsilon},
             {"o_constant", c.o_constant},
             {"master_seed", c.master_seed},
             {"output_path", c.output_path},
             {"contour", c.contour},
             {"thresholds", c.thresholds}};
}

void from_json(const json& j, SweepConfig& c) {
    c.n_grid = j.at("n_grid").get<std::vector<std::size_t>>();
    c.t_value = j.value("t_value", c.t_value);
    c.h_scale = j.value("h_scale", c.h_scale);
    c.xi_grid = j.value("xi_grid", std::vector<double>{});
    c.seeds = j.at("seeds").get<std::size_t>();
    c.epsilon = j.value("epsilon", c.epsilon);
    c.o_constant = j.value("o_constant", c.o_constant);
    c.master_seed = j.at("master_seed").get<std::uint64_t>();
    c.output_path = j.value("output_path", c.output_path);
    c.threads = j.value("threads", c.threads);
    if (j.contains("contour")) c.contour = j.at("contour").get<ContourSpec>();
    if (j.contains("thresholds")) c.thresholds = j.at("thresholds").get<Thresholds>();
}

void to_json(json& j, const SweepRecord& r) {
    j = json{{"n", r.n},
             {"seed", r.seed},
             {"sub_seed", r.sub_seed},
             {"xi", r.xi},
             {"on_event", r.on_event},
             {"failed", r.failed},
             {"error", r.error},
             {"mgf_exact", r.mgf_exact},
             {"mgf_theorem", r.mgf_theorem},
             {"rel_error", r.rel_error},
             {"p", r.p},
             {"p_m", r.p_m},
             {"xi_n_stat", r.xi_n_stat},
             {"tail_bound", r.tail_bound},
             {"log_tail_bound", r.log_tail_bound},
             {"log_tail_estimate", r.log_tail_estimate},
             {"mgf_doubled", r.mgf_doubled},
             {"doubling_change", r.doubling_change}};
}

void to_json(json& j, const Check& c) {
    j = json{{"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"pass", c.pass}};
}

void to_json(json& j, const ConvergenceGroup& g) {
    j = json{{"n", g.n},
             {"xi", g.xi},
             {"records", g.records},
             {"on_event", g.on_event},
             {"failures", g.failures},
             {"median_rel_error", g.median_rel_error},
             {"median_log_tail_estimate", g.median_log_tail_estimate},
             {"doubling_violations", g.doubling_violations}};
}

void to_json(json& j, const EventRow& r) {
    j = json{{"n", r.n},
             {"trials", r.trials},
             {"members", r.members},
             {"frequency", r.frequency},
             {"wilson_lo", r.wilson_lo},
             {"wilson_hi", r.wilson_hi},
             {"bound", r.bound},
             {"clause_rates", r.clause_rates},
             {"above_bound", r.above_bound}};
}

void to_json(json& j, const ScalingRow& r) {
    j = json{{"n", r.n},
             {"trials", r.trials},
             {"median_abs_dev_plain", r.median_abs_dev_plain},
             {"median_abs_dev_weighted", r.median_abs_dev_weighted},
             {"median_abs_xi_plain", r.median_abs_xi_plain},
             {"median_abs_xi_weighted", r.median_abs_xi_weighted}};
}

namespace {

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw UsageError("invalid JSON in " + path + ": " + e.what());
    }
}

}  // namespace

SweepConfig load_sweep_config(const std::string& path) {
    const json j = read_json_file(path);
    SweepConfig c;
    try {
        c = j.get<SweepConfig>();
    } catch (const json::exception& e) {
        throw UsageError("malformed sweep config: " + std::string(e.what()));
    }
    c.validate();
    return c;
}

DisorderSample load_sample(const std::string& path) { return read_json_file(path).get<DisorderSample>(); }

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) throw UsageError("empty output path");
    const std::filesystem::path p(path);
    std::error_code ec;
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw NumericalError("cannot write " + path);
    out << text;
    if (!out) throw NumericalError("write failed for " + path);
}

}  // namespace ssk
