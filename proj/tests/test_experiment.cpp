// SPDX-License-Identifier: Apache-2.0
//
// pinchsim - multi-waveguide pinching-antenna simulator with LoS blockages
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "pinchsim/config.hpp"
#include "pinchsim/experiment.hpp"
#include "pinchsim/report.hpp"

using namespace pinchsim;
namespace fs = std::filesystem;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{

ExperimentConfig small_config()
{
    ExperimentConfig cfg;
    cfg.base.antennas = 6;
    cfg.trials = 6;
    cfg.values = {10.0, 20.0};
    return cfg;
}

fs::path scratch_dir(const std::string &name)
{
    const auto dir = fs::temp_directory_path() / ("pinchsim_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path &p)
{
    std::ifstream f(p, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

std::size_t count_of(const std::string &hay, const std::string &needle)
{
    std::size_t c = 0;
    for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1))
        ++c;
    return c;
}

TrialResult fake(Policy p, double value, double sum, std::vector<double> rates)
{
    TrialResult r;
    r.policy = p;
    r.sweep_name = "transmit_power_dbm";
    r.sweep_value = value;
    r.sum_rate = sum;
    r.rates = std::move(rates);
    return r;
}

} // namespace

TEST_CASE("Experiment - names")
{
    CHECK(parse_policy("SumRate") == Policy::SumRate);
    CHECK(parse_policy("los-distance") == Policy::LosDistance);
    CHECK(parse_policy("random_baseline") == Policy::RandomBaseline);
    CHECK(parse_policy("FIXEDCENTER") == Policy::FixedCenter);
    for (auto p : {Policy::SumRate, Policy::LosDistance, Policy::RandomBaseline, Policy::FixedCenter})
        CHECK(parse_policy(to_string(p)) == p);
    CHECK_THROWS_AS(parse_policy("greedy"), ConfigError);
    CHECK(parse_sweep_axis("blockage_radius") == SweepAxis::BlockageRadius);
    CHECK_THROWS_AS(parse_sweep_axis("power"), ConfigError);
    CHECK_THROWS_AS(apply_sweep({}, SweepAxis::ScattererCount, 1.5), ConfigError);
}

TEST_CASE("Experiment - sweep runs")
{
    SECTION("one trial, one value, one policy")
    {
        ExperimentConfig cfg = small_config();
        cfg.trials = 1;
        cfg.values = {20.0};
        cfg.policies = {Policy::SumRate};
        const auto res = run_sweep(cfg);
        REQUIRE(res.size() == 1);
        CHECK(res[0].stable);
        CHECK(res[0].rates.size() == 4);
        CHECK(res[0].sum_rate >= 0.0);
        CHECK(res[0].seed == trial_seed(cfg.master_seed, 0));
        CHECK_FALSE(res[0].wall_time_ms.has_value());
    }
    SECTION("results are ordered and every policy is stable")
    {
        const auto cfg = small_config();
        const auto res = run_sweep(cfg);
        REQUIRE(res.size() == 2 * 6 * 4);
        for (std::size_t i = 0; i < res.size(); ++i)
        {
            CHECK(res[i].sweep_value == cfg.values[i / 24]);
            CHECK(res[i].trial == (i / 4) % 6);
            CHECK(res[i].policy == cfg.policies[i % 4]);
            if (res[i].policy != Policy::RandomBaseline)
                CHECK(res[i].stable);
        }
    }
    SECTION("thread count does not change results")
    {
        auto cfg = small_config();
        std::ostringstream a, b;
        write_trials_csv(a, run_sweep(cfg), 4);
        cfg.threads = 3;
        write_trials_csv(b, run_sweep(cfg), 4);
        CHECK(a.str() == b.str());
    }
    SECTION("sum-rate mean does not decrease with transmit power")
    {
        ExperimentConfig cfg;
        cfg.base.antennas = 10;
        cfg.trials = 500;
        cfg.policies = {Policy::SumRate};
        const auto rows = aggregate(run_sweep(cfg));
        REQUIRE(rows.size() == 5);
        for (std::size_t i = 1; i < rows.size(); ++i)
            CHECK(rows[i].mean >= rows[i - 1].mean);
    }
    SECTION("timing is recorded on request")
    {
        auto cfg = small_config();
        cfg.trials = 1;
        cfg.record_timing = true;
        for (const auto &r : run_sweep(cfg))
            CHECK(r.wall_time_ms.value_or(-1.0) >= 0.0);
    }
    SECTION("invalid config")
    {
        auto cfg = small_config();
        cfg.trials = 0;
        CHECK_THROWS_AS(run_sweep(cfg), ConfigError);
        cfg = small_config();
        cfg.base.waveguide_y = std::vector<double>{0.0};
        CHECK_THROWS_AS(run_sweep(cfg), ConfigError);
    }
}

TEST_CASE("Experiment - fixed-center benchmark never beats the pinching optimum")
{
    ScenarioConfig cfg;
    cfg.users = 2;
    cfg.antennas = 5; // odd grid contains x = 0
    for (std::uint64_t seed = 1; seed <= 100; ++seed)
    {
        const auto sc = default_scenario(cfg, seed);
        REQUIRE(sc.antenna_x[0][2] == 0.0);
        const auto t = build_channel_tensor(sc);
        const auto best = exhaustive_oracle(t, sc.power);
        const auto fixed = solve_policy(sc, t, Policy::FixedCenter, {}, false);
        REQUIRE(fixed.sum_rate <= best.sum_rate * (1.0 + oracle_tolerance));
    }
}

TEST_CASE("Experiment - aggregation")
{
    SECTION("single value")
    {
        const auto rows = aggregate({fake(Policy::SumRate, 20.0, 7.5, {3.0, 4.5})});
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].mean == 7.5);
        CHECK(rows[0].stddev == 0.0);
        CHECK(rows[0].count == 1);
        CHECK(rows[0].mean_min_rate == 3.0);
    }
    SECTION("equal values")
    {
        const auto rows = aggregate({fake(Policy::SumRate, 20.0, 2.0, {1.0}), fake(Policy::SumRate, 20.0, 2.0, {1.0})});
        CHECK(rows[0].stddev == 0.0);
    }
    SECTION("textbook values")
    {
        const auto rows = aggregate({fake(Policy::SumRate, 20.0, 1.0, {0.5, 0.5}),
                                     fake(Policy::SumRate, 20.0, 2.0, {1.5, 0.5}),
                                     fake(Policy::SumRate, 20.0, 3.0, {1.0, 2.0}),
                                     fake(Policy::FixedCenter, 20.0, 9.0, {9.0})});
        REQUIRE(rows.size() == 2);
        CHECK_THAT(rows[0].mean, WithinAbs(2.0, 1e-15));
        CHECK_THAT(rows[0].stddev, WithinAbs(1.0, 1e-15));
        CHECK_THAT(rows[0].std_error, WithinRel(1.0 / std::sqrt(3.0), 1e-15));
        CHECK_THAT(rows[0].mean_min_rate, WithinAbs(2.0 / 3.0, 1e-15));
        CHECK(find_summary(rows, Policy::FixedCenter, 20.0).mean == 9.0);
        CHECK_THROWS_AS(find_summary(rows, Policy::LosDistance, 20.0), std::out_of_range);
    }
    SECTION("empty input")
    {
        CHECK_THROWS_AS(aggregate({}), std::invalid_argument);
    }
}

TEST_CASE("Experiment - CSV output")
{
    const auto dir = scratch_dir("csv");
    SECTION("empty list gives a header-only file")
    {
        emit_csv(std::vector<TrialResult>{}, dir / "t.csv", 4);
        CHECK(slurp(dir / "t.csv") == trials_csv_header(4) + "\n");
        CHECK(trials_csv_header(2) == "trial,seed,policy,sweep_name,sweep_value,sum_rate,rate_user_1,rate_user_2,"
                                      "cycles,accepted_swaps,preference_evaluations,stable,wall_time_ms");
    }
    SECTION("one trial gives two lines")
    {
        auto cfg = small_config();
        cfg.trials = 1;
        cfg.values = {20.0};
        cfg.policies = {Policy::LosDistance};
        emit_csv(run_sweep(cfg), dir / "t.csv", 4);
        CHECK(count_of(slurp(dir / "t.csv"), "\n") == 2);
    }
    SECTION("round trip reproduces every field")
    {
        auto cfg = small_config();
        cfg.record_timing = true;
        const auto res = run_sweep(cfg);
        emit_csv(res, dir / "t.csv", 4);
        const auto back = read_trials_csv(dir / "t.csv");
        REQUIRE(back.size() == res.size());
        for (std::size_t i = 0; i < res.size(); ++i)
        {
            CHECK(back[i].trial == res[i].trial);
            CHECK(back[i].seed == res[i].seed);
            CHECK(back[i].policy == res[i].policy);
            CHECK(back[i].sweep_name == res[i].sweep_name);
            CHECK(back[i].sweep_value == res[i].sweep_value);
            CHECK(back[i].sum_rate == res[i].sum_rate);
            CHECK(back[i].rates == res[i].rates);
            CHECK(back[i].cycles == res[i].cycles);
            CHECK(back[i].accepted_swaps == res[i].accepted_swaps);
            CHECK(back[i].preference_evaluations == res[i].preference_evaluations);
            CHECK(back[i].stable == res[i].stable);
            CHECK(back[i].wall_time_ms == res[i].wall_time_ms);
        }
    }
    SECTION("doubles survive formatting")
    {
        for (double v : {0.1, 1.0 / 3.0, 9.662494813123e-7, 12345.678901234567, 0.0})
            CHECK(parse_double(format_double(v)) == v);
        CHECK_THROWS_AS(parse_double("abc"), IoError);
    }
    SECTION("unwritable path")
    {
        std::ofstream(dir / "file") << "x";
        CHECK_THROWS_AS(emit_csv(std::vector<TrialResult>{}, dir / "file" / "t.csv", 4), IoError);
    }
    SECTION("malformed input")
    {
        std::istringstream bad("trial,seed\n1,2\n");
        CHECK_THROWS_AS(parse_trials_csv(bad), IoError);
    }
    fs::remove_all(dir);
}

TEST_CASE("Experiment - plot output")
{
    const auto dir = scratch_dir("plot");
    SECTION("one policy, two points")
    {
        const std::vector<SummaryRow> rows{{Policy::SumRate, "transmit_power_dbm", 0.0, 1, 3.0, 0.0, 0.0, 1.0},
                                           {Policy::SumRate, "transmit_power_dbm", 10.0, 1, 5.0, 0.0, 0.0, 2.0}};
        emit_plot(rows, dir / "p.svg");
        const auto svg = slurp(dir / "p.svg");
        CHECK(count_of(svg, "<polyline class=\"series\"") == 1);
        const auto series = plot_series(rows);
        REQUIRE(series.size() == 1);
        CHECK(series[0].points.size() == 2);
        CHECK(fs::exists(sidecar_path(dir / "p.svg")));
    }
    SECTION("four policies, legend and sidecar match the aggregate")
    {
        auto cfg = small_config();
        const auto rows = aggregate(run_sweep(cfg));
        emit_plot(rows, dir / "p.svg");
        const auto svg = slurp(dir / "p.svg");
        CHECK(count_of(svg, "<polyline class=\"series\"") == 4);
        CHECK(count_of(svg, "<g class=\"legend\"") == 4);
        const auto side = nlohmann::json::parse(slurp(sidecar_path(dir / "p.svg")));
        REQUIRE(side["series"].size() == 4);
        for (const auto &s : side["series"])
        {
            const Policy p = parse_policy(s["policy"].get<std::string>());
            REQUIRE(s["points"].size() == 2);
            for (const auto &pt : s["points"])
                CHECK(pt[1].get<double>() == find_summary(rows, p, pt[0].get<double>()).mean);
        }
    }
    SECTION("empty summary")
    {
        CHECK_THROWS_AS(emit_plot({}, dir / "p.svg"), std::invalid_argument);
    }
    fs::remove_all(dir);
}

TEST_CASE("Experiment - oracle comparison")
{
    SECTION("single user is always optimal")
    {
        ExperimentConfig cfg;
        cfg.base.users = 1;
        cfg.base.antennas = 8;
        cfg.trials = 50;
        const auto rep = run_oracle_compare(cfg);
        CHECK(rep.sum_rate.max_gap <= oracle_tolerance);
        CHECK(rep.sum_rate.fraction_optimal == 1.0);
    }
    SECTION("two users, two antennas, 200 seeds")
    {
        ExperimentConfig cfg;
        cfg.base.users = 2;
        cfg.base.antennas = 2;
        cfg.trials = 200;
        const auto rep = run_oracle_compare(cfg);
        REQUIRE(rep.trials.size() == 200);
        for (const auto &t : rep.trials)
        {
            CHECK(t.sum_rate_gap >= -oracle_tolerance);
            CHECK(t.los_distance_gap >= -oracle_tolerance);
            CHECK(t.sum_rate_stable);
            CHECK(t.los_distance_stable);
        }
        CHECK(rep.sum_rate.dominance_violations == 0);
        CHECK(rep.sum_rate.fraction_stable == 1.0);
        CHECK(rep.los_distance.fraction_stable == 1.0);
    }
    SECTION("budget")
    {
        ExperimentConfig cfg;
        cfg.trials = 1;
        CHECK_THROWS_AS(run_oracle_compare(cfg), BudgetExceeded);
    }
}

TEST_CASE("Experiment - config documents")
{
    SECTION("unknown key")
    {
        CHECK_THROWS_AS(parse_config(nlohmann::json{{"num_user", 4}}), ConfigError);
        CHECK_THROWS_AS(parse_config(nlohmann::json::array()), ConfigError);
        CHECK_THROWS_AS(parse_config(nlohmann::json{{"sweep_axis", "radius"}}), ConfigError);
        CHECK_THROWS_AS(parse_config(nlohmann::json{{"trials", "many"}}), ConfigError);
    }
    SECTION("round trip")
    {
        const nlohmann::json doc{{"num_users", 3},
                                 {"num_antennas", 5},
                                 {"num_scatterers", 2},
                                 {"blockage_radius", 0.75},
                                 {"blockage_centers", {{1.0, 2.0}, {-3.0, 0.5}}},
                                 {"waveguide_y", {-0.5, 0.0, 0.5}},
                                 {"antenna_x", {-4.0, -2.0, 0.0, 2.0, 4.0}},
                                 {"sweep_axis", "scatterer_count"},
                                 {"sweep_values", {0, 2}},
                                 {"policies", {"SumRate", "FixedCenter"}},
                                 {"trials", 7},
                                 {"master_seed", 99},
                                 {"cycle_cap", 50},
                                 {"strict_interference_on_swap", true}};
        const auto cfg = parse_config(doc);
        CHECK(cfg.base.users == 3);
        CHECK(cfg.base.blockage_centers->size() == 2);
        CHECK(cfg.base.antenna_x->size() == 1);
        CHECK(cfg.axis == SweepAxis::ScattererCount);
        CHECK(cfg.policies == std::vector<Policy>{Policy::SumRate, Policy::FixedCenter});
        CHECK(cfg.matching.cycle_cap == 50);
        CHECK(cfg.matching.strict_interference_on_swap);
        const auto again = parse_config(to_json(cfg));
        CHECK(to_json(again) == to_json(cfg));

        std::ostringstream a, b;
        write_trials_csv(a, run_sweep(cfg), 3);
        write_trials_csv(b, run_sweep(again), 3);
        CHECK(a.str() == b.str());
    }
    SECTION("missing file")
    {
        CHECK_THROWS_AS(load_config("/nonexistent/pinchsim.json"), IoError);
    }
}
