#include "ssk/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <sstream>
#include <thread>

#include "ssk/asymptotics.hpp"
#include "ssk/disorder.hpp"
#include "ssk/errors.hpp"
#include "ssk/io.hpp"
#include "ssk/rng.hpp"
#include "ssk/stats.hpp"

namespace ssk {

void SweepConfig::validate() const {
    if (n_grid.empty()) throw UsageError("n_grid must not be empty");
    if (!std::is_sorted(n_grid.begin(), n_grid.end()) ||
        std::adjacent_find(n_grid.begin(), n_grid.end()) != n_grid.end())
        throw UsageError("n_grid must be strictly ascending");
    if (n_grid.front() < 2) throw UsageError("n_grid values must be at least 2");
    if (seeds < 1) throw UsageError("seeds must be at least 1");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw UsageError("epsilon must lie in (0, 1)");
    if (!(o_constant > 0.0)) throw UsageError("o_constant must be positive");
    if (!(thresholds.max_failure_fraction > 0.0 && thresholds.max_failure_fraction <= 1.0))
        throw UsageError("max_failure_fraction must lie in (0, 1]");
    contour.validate();
}

std::uint64_t record_seed(std::uint64_t master_seed, std::size_t n, std::size_t idx) {
    return mix_seed(mix_seed(master_seed, n), idx);
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
    unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(count, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = next++; i < count; i = next++) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

namespace {

bool all_pass(const std::vector<Check>& checks) {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::vector<DisorderSample> draw_all(const SweepConfig& cfg, std::size_t n_index) {
    const std::size_t n = cfg.n_grid[n_index];
    std::vector<DisorderSample> out(cfg.seeds);
    parallel_for(cfg.seeds, cfg.threads,
                 [&](std::size_t i) { out[i] = sample_spectrum_fast(n, record_seed(cfg.master_seed, n, i)); });
    return out;
}

}  // namespace

bool ConvergenceSummary::pass() const { return all_pass(checks); }
bool EventSummary::pass() const { return all_pass(checks); }
bool ScalingSummary::pass() const { return all_pass(checks); }

ConvergenceSummary convergence_sweep(const SweepConfig& cfg) {
    cfg.validate();
    if (!(cfg.t_value > 0.0 && cfg.t_value < 1.0)) throw UsageError("t_value must lie in (0, 1)");
    if (!(cfg.h_scale >= 0.0)) throw UsageError("h_scale must be non-negative");
    if (cfg.xi_grid.empty()) throw UsageError("xi_grid must not be empty");

    const std::size_t nx = cfg.xi_grid.size();
    const std::size_t tasks = cfg.n_grid.size() * cfg.seeds;
    ConvergenceSummary out;
    out.records.resize(tasks * nx);

    parallel_for(tasks, cfg.threads, [&](std::size_t task) {
        const std::size_t n = cfg.n_grid[task / cfg.seeds];
        const std::size_t idx = task % cfg.seeds;
        const std::uint64_t sub = record_seed(cfg.master_seed, n, idx);
        SweepRecord* recs = &out.records[task * nx];
        for (std::size_t k = 0; k < nx; ++k) {
            recs[k].n = n;
            recs[k].seed = idx;
            recs[k].sub_seed = sub;
            recs[k].xi = cfg.xi_grid[k];
        }
        try {
            const auto sample = sample_spectrum_fast(n, sub);
            const bool on_event = check_event(sample, cfg.epsilon, cfg.o_constant).member;
            const double xi_stat = xi_statistic(sample);
            const auto params = params_from_temperature(n, cfg.t_value, cfg.h_scale, 0.0);
            const auto results = mgf_exact_grid(sample, params, cfg.xi_grid, cfg.contour);
            const double n1 = std::abs(sample.projections.front());
            for (std::size_t k = 0; k < nx; ++k) {
                auto& r = recs[k];
                const auto& m = results[k];
                ModelParams q = params;
                q.xi = r.xi;
                r.on_event = on_event;
                r.xi_n_stat = xi_stat;
                r.mgf_exact = m.value;
                r.mgf_theorem = mgf_theorem(q, n1);
                r.rel_error = std::abs(r.mgf_exact - r.mgf_theorem) / r.mgf_theorem;
                r.p = m.diagnostics.at("p");
                r.p_m = m.diagnostics.at("p_m");
                r.tail_bound = m.diagnostics.at("tail_bound");
                r.log_tail_bound = r.xi == 0.0 ? -INFINITY : m.diagnostics.at("log_tail_bound");
                r.log_tail_estimate = r.xi == 0.0 ? -INFINITY : m.diagnostics.at("log_tail_estimate");
                r.mgf_doubled = m.diagnostics.at("value_doubled_t_max");
                r.doubling_change = m.diagnostics.at("doubling_change");
            }
        } catch (const std::exception& e) {
            for (std::size_t k = 0; k < nx; ++k) {
                recs[k].failed = true;
                recs[k].error = e.what();
            }
        }
    });

    const auto failures = static_cast<std::size_t>(
        std::count_if(out.records.begin(), out.records.end(), [](const SweepRecord& r) { return r.failed; }));
    if (static_cast<double>(failures) >= cfg.thresholds.max_failure_fraction * static_cast<double>(out.records.size()))
        throw NumericalError("too many failed records in convergence sweep (" + std::to_string(failures) + " of " +
                             std::to_string(out.records.size()) + ")");

    // Per (N, xi) aggregates over on-event records.
    for (std::size_t ni = 0; ni < cfg.n_grid.size(); ++ni) {
        for (std::size_t k = 0; k < nx; ++k) {
            ConvergenceGroup g;
            g.n = cfg.n_grid[ni];
            g.xi = cfg.xi_grid[k];
            std::vector<double> errs, tails;
            for (std::size_t i = 0; i < cfg.seeds; ++i) {
                const auto& r = out.records[(ni * cfg.seeds + i) * nx + k];
                ++g.records;
                if (r.failed) {
                    ++g.failures;
                    continue;
                }
                if (r.doubling_change > 0.0 && std::log(r.doubling_change) > r.log_tail_bound) ++g.doubling_violations;
                if (!r.on_event) continue;
                ++g.on_event;
                errs.push_back(r.rel_error);
                tails.push_back(r.log_tail_estimate);
            }
            g.median_rel_error = errs.empty() ? NAN : stats::median(errs);
            g.median_log_tail_estimate = tails.empty() ? NAN : stats::median(tails);
            out.groups.push_back(g);
        }
    }

    const auto& th = cfg.thresholds;
    auto group = [&](std::size_t ni, std::size_t k) -> const ConvergenceGroup& { return out.groups[ni * nx + k]; };
    auto xi_label = [](double xi) { return "xi=" + format_double(xi); };
    const std::size_t last = cfg.n_grid.size() - 1;
    for (std::size_t k = 0; k < nx; ++k) {
        const double xi = cfg.xi_grid[k];
        if (th.min_on_event_records) {
            std::size_t fewest = SIZE_MAX;
            for (std::size_t ni = 0; ni <= last; ++ni) fewest = std::min(fewest, group(ni, k).on_event);
            out.checks.push_back({"min_on_event_records " + xi_label(xi), static_cast<double>(fewest),
                                  static_cast<double>(*th.min_on_event_records), fewest >= *th.min_on_event_records});
        }
        if (th.max_median_rel_error) {
            const double v = group(last, k).median_rel_error;
            out.checks.push_back({"median_rel_error_at_max_n " + xi_label(xi), v, *th.max_median_rel_error,
                                  v <= *th.max_median_rel_error});
        }
        if (th.monotone_median_rel_error && *th.monotone_median_rel_error) {
            std::size_t increases = 0;
            for (std::size_t ni = 1; ni <= last; ++ni)
                if (!(group(ni, k).median_rel_error <= group(ni - 1, k).median_rel_error)) ++increases;
            out.checks.push_back(
                {"median_rel_error_non_increasing " + xi_label(xi), static_cast<double>(increases), 0.0, increases == 0});
        }
        if (th.tail_median_decreasing && *th.tail_median_decreasing && xi != 0.0) {
            std::size_t bad = 0;
            for (std::size_t ni = 1; ni <= last; ++ni)
                if (!(group(ni, k).median_log_tail_estimate < group(ni - 1, k).median_log_tail_estimate)) ++bad;
            out.checks.push_back({"tail_estimate_median_decreasing " + xi_label(xi), static_cast<double>(bad), 0.0, bad == 0});
        }
    }
    if (th.doubling_within_tail && *th.doubling_within_tail) {
        std::size_t bad = 0;
        for (const auto& g : out.groups) bad += g.doubling_violations;
        out.checks.push_back({"doubling_change_within_tail_estimate", static_cast<double>(bad), 0.0, bad == 0});
    }
    if (th.tail_ceiling) {
        double worst = 0.0;
        for (const auto& r : out.records)
            if (r.on_event && !r.failed) worst = std::max(worst, r.tail_bound);
        out.checks.push_back({"max_tail_bound", worst, *th.tail_ceiling, worst <= *th.tail_ceiling});
    }
    if (th.p_above_temperature && *th.p_above_temperature) {
        std::size_t bad = 0;
        for (const auto& r : out.records)
            if (r.on_event && !r.failed && !(r.p > cfg.t_value)) ++bad;
        out.checks.push_back({"p_above_temperature", static_cast<double>(bad), 0.0, bad == 0});
    }
    return out;
}

EventSummary event_probability_study(const SweepConfig& cfg) {
    cfg.validate();
    EventSummary out;
    for (std::size_t ni = 0; ni < cfg.n_grid.size(); ++ni) {
        const std::size_t n = cfg.n_grid[ni];
        std::vector<EventReport> reports(cfg.seeds);
        parallel_for(cfg.seeds, cfg.threads, [&](std::size_t i) {
            const auto s = sample_spectrum_fast(n, record_seed(cfg.master_seed, n, i));
            reports[i] = check_event(s, cfg.epsilon, cfg.o_constant);
        });
        EventRow row;
        row.n = n;
        row.trials = cfg.seeds;
        std::array<std::size_t, 7> clause_counts{};
        for (const auto& r : reports) {
            row.members += r.member ? 1 : 0;
            const auto cl = r.clauses();
            for (std::size_t c = 0; c < cl.size(); ++c) clause_counts[c] += cl[c] ? 1 : 0;
        }
        const double trials = static_cast<double>(row.trials);
        row.frequency = static_cast<double>(row.members) / trials;
        const auto ci = stats::wilson(row.members, row.trials);
        row.wilson_lo = ci.lo;
        row.wilson_hi = ci.hi;
        row.bound = 1.0 - std::pow(static_cast<double>(n), -cfg.epsilon / 10.0);
        for (auto c : clause_counts) row.clause_rates.push_back(static_cast<double>(c) / trials);
        row.above_bound = row.frequency >= row.bound - ci.half_width();
        if (cfg.thresholds.event_above_bound && *cfg.thresholds.event_above_bound)
            out.checks.push_back({"event_frequency_above_bound n=" + std::to_string(n), row.frequency,
                                  row.bound - ci.half_width(), row.above_bound});
        out.rows.push_back(std::move(row));
    }
    return out;
}

ScalingSummary sum_scaling_study(const SweepConfig& cfg) {
    cfg.validate();
    ScalingSummary out;
    std::vector<double> log_n, log_dev_plain, log_dev_weighted, n_values, xi_medians;
    double worst_ratio = 1.0;
    for (std::size_t ni = 0; ni < cfg.n_grid.size(); ++ni) {
        const std::size_t n = cfg.n_grid[ni];
        const double cube = std::cbrt(static_cast<double>(n));
        const auto samples = draw_all(cfg, ni);
        std::vector<double> dev_p, dev_w;
        for (const auto& s : samples) {
            dev_p.push_back(std::abs(resolvent_sum(s, 1, false) - 1.0));
            dev_w.push_back(std::abs(resolvent_sum(s, 1, true) - 1.0));
        }
        ScalingRow row;
        row.n = n;
        row.trials = samples.size();
        row.median_abs_dev_plain = stats::median(dev_p);
        row.median_abs_dev_weighted = stats::median(dev_w);
        row.median_abs_xi_plain = cube * row.median_abs_dev_plain;
        row.median_abs_xi_weighted = cube * row.median_abs_dev_weighted;
        log_n.push_back(std::log(static_cast<double>(n)));
        log_dev_plain.push_back(std::log(row.median_abs_dev_plain));
        log_dev_weighted.push_back(std::log(row.median_abs_dev_weighted));
        n_values.push_back(static_cast<double>(n));
        xi_medians.push_back(row.median_abs_xi_plain);
        const double ratio = row.median_abs_xi_plain / row.median_abs_xi_weighted;
        worst_ratio = std::max({worst_ratio, ratio, 1.0 / ratio});
        out.rows.push_back(row);
    }
    if (out.rows.size() >= 2) {
        out.slope_plain = stats::regression_slope(log_n, log_dev_plain);
        out.slope_weighted = stats::regression_slope(log_n, log_dev_weighted);
        out.spearman_xi = stats::spearman(n_values, xi_medians);
    }
    const auto& th = cfg.thresholds;
    if (th.slope_min) out.checks.push_back({"slope_plain_min", out.slope_plain, *th.slope_min, out.slope_plain >= *th.slope_min});
    if (th.slope_max) out.checks.push_back({"slope_plain_max", out.slope_plain, *th.slope_max, out.slope_plain <= *th.slope_max});
    if (th.max_abs_spearman)
        out.checks.push_back({"abs_spearman_median_xi", std::abs(out.spearman_xi), *th.max_abs_spearman,
                              std::abs(out.spearman_xi) <= *th.max_abs_spearman});
    if (th.max_plain_weighted_ratio)
        out.checks.push_back({"plain_weighted_median_ratio", worst_ratio, *th.max_plain_weighted_ratio,
                              worst_ratio <= *th.max_plain_weighted_ratio});
    return out;
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

json summary_base(const SweepConfig& cfg, const std::vector<Check>& checks, bool pass) {
    json j;
    j["config"] = cfg;
    j["checks"] = checks;
    j["pass"] = pass;
    return j;
}

}  // namespace

void write_outputs(const SweepConfig& cfg, const ConvergenceSummary& s) {
    std::ostringstream csv;
    csv << "n,seed,sub_seed,xi,on_event,failed,mgf_exact,mgf_theorem,rel_error,p,p_m,xi_n_stat,tail_bound,"
           "log_tail_bound,log_tail_estimate,mgf_doubled,doubling_change,error\n";
    for (const auto& r : s.records) {
        csv << r.n << ',' << r.seed << ',' << r.sub_seed << ',' << format_double(r.xi) << ',' << r.on_event << ','
            << r.failed << ',' << format_double(r.mgf_exact) << ',' << format_double(r.mgf_theorem) << ','
            << format_double(r.rel_error) << ',' << format_double(r.p) << ',' << format_double(r.p_m) << ','
            << format_double(r.xi_n_stat) << ',' << format_double(r.tail_bound) << ','
            << format_double(r.log_tail_bound) << ',' << format_double(r.log_tail_estimate) << ','
            << format_double(r.mgf_doubled) << ',' << format_double(r.doubling_change) << ',' << csv_field(r.error)
            << '\n';
    }
    write_text(cfg.output_path + ".csv", csv.str());
    auto j = summary_base(cfg, s.checks, s.pass());
    j["groups"] = s.groups;
    write_text(cfg.output_path + ".json", j.dump(2) + "\n");
}

void write_outputs(const SweepConfig& cfg, const EventSummary& s) {
    std::ostringstream csv;
    csv << "n,trials,members,frequency,wilson_lo,wilson_hi,bound,above_bound";
    for (int c = 0; c < 7; ++c) csv << ",clause" << c + 1 << "_rate";
    csv << '\n';
    for (const auto& r : s.rows) {
        csv << r.n << ',' << r.trials << ',' << r.members << ',' << format_double(r.frequency) << ','
            << format_double(r.wilson_lo) << ',' << format_double(r.wilson_hi) << ',' << format_double(r.bound) << ','
            << r.above_bound;
        for (double c : r.clause_rates) csv << ',' << format_double(c);
        csv << '\n';
    }
    write_text(cfg.output_path + ".csv", csv.str());
    auto j = summary_base(cfg, s.checks, s.pass());
    j["rows"] = s.rows;
    write_text(cfg.output_path + ".json", j.dump(2) + "\n");
}

void write_outputs(const SweepConfig& cfg, const ScalingSummary& s) {
    std::ostringstream csv;
    csv << "n,trials,median_abs_dev_plain,median_abs_dev_weighted,median_abs_xi_plain,median_abs_xi_weighted\n";
    for (const auto& r : s.rows) {
        csv << r.n << ',' << r.trials << ',' << format_double(r.median_abs_dev_plain) << ','
            << format_double(r.median_abs_dev_weighted) << ',' << format_double(r.median_abs_xi_plain) << ','
            << format_double(r.median_abs_xi_weighted) << '\n';
    }
    write_text(cfg.output_path + ".csv", csv.str());
    auto j = summary_base(cfg, s.checks, s.pass());
    j["rows"] = s.rows;
    j["slope_plain"] = s.slope_plain;
    j["slope_weighted"] = s.slope_weighted;
    j["spearman_median_abs_xi"] = s.spearman_xi;
    write_text(cfg.output_path + ".json", j.dump(2) + "\n");
}

}  // namespace ssk
