#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "ssk/errors.hpp"
#include "ssk/experiments.hpp"

using namespace ssk;

namespace {

SweepConfig small_sweep(unsigned threads) {
    SweepConfig c;
    c.n_grid = {20, 40};
    c.t_value = 0.5;
    c.h_scale = 1.0;
    c.xi_grid = {0.0, 0.5};
    c.seeds = 6;
    c.epsilon = 0.3;
    c.master_seed = 99;
    c.threads = threads;
    return c;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("sweep config validation") {
    auto c = small_sweep(1);
    CHECK_NOTHROW(c.validate());
    c.n_grid = {40, 20};
    CHECK_THROWS_AS(c.validate(), UsageError);
    c = small_sweep(1);
    c.n_grid.clear();
    CHECK_THROWS_AS(c.validate(), UsageError);
    c = small_sweep(1);
    c.seeds = 0;
    CHECK_THROWS_AS(c.validate(), UsageError);
    c = small_sweep(1);
    c.t_value = 1.0;
    CHECK_THROWS_AS(convergence_sweep(c), UsageError);
}

TEST_CASE("record seeds are deterministic and distinct") {
    CHECK(record_seed(1, 250, 3) == record_seed(1, 250, 3));
    CHECK(record_seed(1, 250, 3) != record_seed(1, 250, 4));
    CHECK(record_seed(1, 250, 3) != record_seed(1, 500, 3));
    CHECK(record_seed(1, 250, 3) != record_seed(2, 250, 3));
}

TEST_CASE("parallel_for visits every index once") {
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
    CHECK_THROWS_AS(parallel_for(10, 2, [](std::size_t i) { if (i == 7) throw NumericalError("boom"); }),
                    NumericalError);
}

TEST_CASE("small convergence sweep") {
    const auto a = convergence_sweep(small_sweep(1));
    REQUIRE(a.records.size() == 2 * 6 * 2);
    for (const auto& r : a.records) {
        CHECK_FALSE(r.failed);
        CHECK(r.rel_error >= 0.0);
        if (r.xi == 0.0) {
            CHECK(r.mgf_exact == 1.0);
            CHECK(r.rel_error == 0.0);
        }
    }
    CHECK(a.groups.size() == 4);
    CHECK(a.pass());

    const auto b = convergence_sweep(small_sweep(3));
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].mgf_exact == b.records[i].mgf_exact);
        CHECK(a.records[i].sub_seed == b.records[i].sub_seed);
    }
}

TEST_CASE("sweep outputs are byte-identical across reruns") {
    const auto dir = std::filesystem::temp_directory_path() / "ssk_sweep_test";
    std::filesystem::remove_all(dir);
    auto c = small_sweep(2);
    c.output_path = (dir / "one").string();
    write_outputs(c, convergence_sweep(c));
    auto d = small_sweep(1);
    d.output_path = (dir / "two").string();
    write_outputs(d, convergence_sweep(d));
    const auto csv = slurp(dir / "one.csv");
    CHECK(!csv.empty());
    CHECK(csv == slurp(dir / "two.csv"));
    CHECK(std::filesystem::exists(dir / "one.json"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("thresholds produce failing checks") {
    auto c = small_sweep(1);
    c.xi_grid = {0.5};
    c.thresholds.max_median_rel_error = 0.0;
    c.thresholds.p_above_temperature = true;
    const auto s = convergence_sweep(c);
    bool saw_failure = false;
    for (const auto& ch : s.checks)
        if (ch.name.rfind("median_rel_error_at_max_n", 0) == 0) saw_failure = !ch.pass;
    CHECK(saw_failure);
    CHECK_FALSE(s.pass());
}

TEST_CASE("event study: clause rates dominate the membership rate") {
    SweepConfig c;
    c.n_grid = {100, 200};
    c.seeds = 200;
    c.epsilon = 0.5;
    c.master_seed = 5;
    const auto s = event_probability_study(c);
    REQUIRE(s.rows.size() == 2);
    for (const auto& row : s.rows) {
        CHECK(row.trials == 200);
        CHECK(row.wilson_lo <= row.frequency);
        CHECK(row.frequency <= row.wilson_hi);
        CHECK(row.bound == doctest::Approx(1.0 - std::pow(double(row.n), -0.05)));
        REQUIRE(row.clause_rates.size() == 7);
        for (double r : row.clause_rates) CHECK(r >= row.frequency);
    }
}

TEST_CASE("scaling study produces one row per N") {
    SweepConfig c;
    c.n_grid = {100, 200, 400};
    c.seeds = 30;
    c.master_seed = 8;
    const auto s = sum_scaling_study(c);
    REQUIRE(s.rows.size() == 3);
    CHECK(s.slope_plain < 0.0);
    CHECK(std::abs(s.spearman_xi) <= 1.0);
    for (const auto& r : s.rows) CHECK(r.median_abs_dev_plain > 0.0);
}
