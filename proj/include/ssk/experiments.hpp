#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ssk/contour.hpp"

namespace ssk {

// Acceptance thresholds; each is enforced only when set.
struct Thresholds {
    // convergence sweep
    std::optional<double> max_median_rel_error;  // at the largest N, per xi
    std::optional<bool> monotone_median_rel_error;
    std::optional<std::size_t> min_on_event_records;  // per (N, xi)
    std::optional<double> tail_ceiling;               // on every on-event record's tail_bound
    std::optional<bool> doubling_within_tail;
    std::optional<bool> tail_median_decreasing;
    std::optional<bool> p_above_temperature;
    double max_failure_fraction = 0.2;
    // event study
    std::optional<bool> event_above_bound;
    // scaling study
    std::optional<double> slope_min;
    std::optional<double> slope_max;
    std::optional<double> max_abs_spearman;
    std::optional<double> max_plain_weighted_ratio;
};

struct SweepConfig {
    std::vector<std::size_t> n_grid;
    double t_value = 0.5;
    double h_scale = 1.0;
    std::vector<double> xi_grid;
    std::size_t seeds = 1;
    double epsilon = 0.1;
    double o_constant = 1.0;
    std::uint64_t master_seed = 0;
    std::string output_path;  // prefix; <prefix>.csv and <prefix>.json are written
    unsigned threads = 0;     // 0: hardware concurrency
    ContourSpec contour;
    Thresholds thresholds;

    void validate() const;
};

// Sub-seed of the idx-th disorder draw at dimension n.
std::uint64_t record_seed(std::uint64_t master_seed, std::size_t n, std::size_t idx);

struct SweepRecord {
    std::size_t n = 0;
    std::size_t seed = 0;  // index within the sweep
    std::uint64_t sub_seed = 0;
    double xi = 0.0;
    bool on_event = false;
    bool failed = false;
    std::string error;
    double mgf_exact = 0.0;
    double mgf_theorem = 0.0;
    double rel_error = 0.0;
    double p = 0.0;
    double p_m = 0.0;
    double xi_n_stat = 0.0;
    double tail_bound = 0.0;
    double log_tail_bound = 0.0;
    double log_tail_estimate = 0.0;
    double mgf_doubled = 0.0;
    double doubling_change = 0.0;
};

struct Check {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = true;
};

struct ConvergenceGroup {
    std::size_t n = 0;
    double xi = 0.0;
    std::size_t records = 0;
    std::size_t on_event = 0;
    std::size_t failures = 0;
    double median_rel_error = 0.0;
    double median_log_tail_estimate = 0.0;
    std::size_t doubling_violations = 0;
};

struct ConvergenceSummary {
    std::vector<SweepRecord> records;
    std::vector<ConvergenceGroup> groups;
    std::vector<Check> checks;
    bool pass() const;
};

// Throws NumericalError when at least max_failure_fraction of the records fail.
ConvergenceSummary convergence_sweep(const SweepConfig& cfg);

struct EventRow {
    std::size_t n = 0;
    std::size_t trials = 0;
    std::size_t members = 0;
    double frequency = 0.0;
    double wilson_lo = 0.0;
    double wilson_hi = 0.0;
    double bound = 0.0;  // 1 - N^{-eps/10}
    std::vector<double> clause_rates;
    bool above_bound = false;  // frequency >= bound - half-width
};

struct EventSummary {
    std::vector<EventRow> rows;
    std::vector<Check> checks;
    bool pass() const;
};

EventSummary event_probability_study(const SweepConfig& cfg);

struct ScalingRow {
    std::size_t n = 0;
    std::size_t trials = 0;
    double median_abs_dev_plain = 0.0;     // median |(1/N) sum 1/(l1 - li) - 1|
    double median_abs_dev_weighted = 0.0;  // weighted analogue
    double median_abs_xi_plain = 0.0;      // median |Xi_N|
    double median_abs_xi_weighted = 0.0;
};

struct ScalingSummary {
    std::vector<ScalingRow> rows;
    double slope_plain = 0.0;
    double slope_weighted = 0.0;
    double spearman_xi = 0.0;
    std::vector<Check> checks;
    bool pass() const;
};

ScalingSummary sum_scaling_study(const SweepConfig& cfg);

// Runs fn(i) for i in [0, count) on a pool of worker threads.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

// File output (CSV rows + JSON summary) under cfg.output_path.
void write_outputs(const SweepConfig& cfg, const ConvergenceSummary& s);
void write_outputs(const SweepConfig& cfg, const EventSummary& s);
void write_outputs(const SweepConfig& cfg, const ScalingSummary& s);

}  // namespace ssk
