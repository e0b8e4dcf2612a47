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

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "pinchsim/pinchsim.hpp"

namespace fs = std::filesystem;
using namespace pinchsim;

namespace
{

enum Exit : int
{
    Ok = 0,
    BadConfig = 1,
    Runtime = 2,
    Io = 3,
};

struct Common
{
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::string policies;
    std::string out;
    std::string sweep;
};

void add_common(CLI::App *cmd, Common &c)
{
    cmd->add_option("--config", c.config, "JSON config document");
    cmd->add_option("--seed", c.seed, "master seed (run: scenario seed)");
    cmd->add_option("--trials", c.trials, "Monte Carlo trials per sweep value");
    cmd->add_option("--policy", c.policies, "comma-separated policies: SumRate,LosDistance,RandomBaseline,FixedCenter");
    cmd->add_option("--out", c.out, "output directory");
    cmd->add_option("--sweep", c.sweep, "sweep axis: transmit_power_dbm, blockage_radius, scatterer_count");
}

std::vector<Policy> parse_policy_list(const std::string &s)
{
    std::vector<Policy> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty())
            out.push_back(parse_policy(item));
    if (out.empty())
        throw ConfigError("--policy needs at least one policy name.");
    return out;
}

ExperimentConfig resolve(const Common &c, ExperimentConfig cfg)
{
    if (!c.config.empty())
        cfg = load_config(c.config);
    if (c.seed)
        cfg.master_seed = *c.seed;
    if (c.trials)
        cfg.trials = *c.trials;
    if (!c.policies.empty())
        cfg.policies = parse_policy_list(c.policies);
    if (!c.out.empty())
        cfg.out_dir = c.out;
    if (!c.sweep.empty())
    {
        const SweepAxis axis = parse_sweep_axis(c.sweep);
        if (axis != cfg.axis)
        {
            cfg.axis = axis;
            cfg.values = default_sweep_values(axis);
        }
    }
    validate(cfg);
    return cfg;
}

nlohmann::json to_json(const TrialResult &r)
{
    nlohmann::json j{{"trial", r.trial},
                     {"seed", r.seed},
                     {"policy", std::string(to_string(r.policy))},
                     {"sweep_name", r.sweep_name},
                     {"sweep_value", r.sweep_value},
                     {"sum_rate", r.sum_rate},
                     {"rates", r.rates},
                     {"cycles", r.cycles},
                     {"accepted_swaps", r.accepted_swaps},
                     {"preference_evaluations", r.preference_evaluations},
                     {"stable", r.stable},
                     {"assignment", std::vector<std::size_t>(r.matching.assignment().begin(), r.matching.assignment().end())},
                     {"activation", std::vector<std::size_t>(r.matching.activation().begin(), r.matching.activation().end())}};
    if (r.wall_time_ms)
        j["wall_time_ms"] = *r.wall_time_ms;
    return j;
}

nlohmann::json to_json(const GapSummary &g)
{
    return {{"fraction_optimal", g.fraction_optimal},
            {"mean_gap", g.mean_gap},
            {"max_gap", g.max_gap},
            {"fraction_stable", g.fraction_stable},
            {"dominance_violations", g.dominance_violations}};
}

bool optimized(Policy p) { return p != Policy::RandomBaseline; }

void write_text(const fs::path &p, const std::string &text)
{
    std::ofstream f(p, std::ios::binary);
    f << text;
    if (!f)
        throw IoError("Failed to write '" + p.string() + "'.");
}

int cmd_run(const Common &c)
{
    ExperimentConfig cfg = resolve(c, {});
    const std::uint64_t seed = c.seed ? *c.seed : trial_seed(cfg.master_seed, 0);
    const Scenario sc = default_scenario(apply_sweep(cfg.base, cfg.axis, cfg.values.front()), seed);
    const ChannelTensor tensor = build_channel_tensor(sc);
    nlohmann::json out = nlohmann::json::array();
    bool all_stable = true;
    for (Policy p : cfg.policies)
    {
        TrialResult r = solve_policy(sc, tensor, p, cfg.matching, cfg.record_timing);
        r.sweep_name = to_string(cfg.axis);
        r.sweep_value = cfg.values.front();
        all_stable = all_stable && (r.stable || !optimized(p));
        out.push_back(to_json(r));
    }
    std::cout << out.dump(2) << '\n';
    return all_stable ? Ok : Runtime;
}

int cmd_sweep(const Common &c)
{
    const ExperimentConfig cfg = resolve(c, {});
    const fs::path dir(cfg.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw IoError("Cannot create output directory '" + dir.string() + "': " + ec.message());

    const auto results = run_sweep(cfg);
    const auto rows = aggregate(results);
    const std::string axis(to_string(cfg.axis));
    emit_csv(results, dir / "trials.csv", cfg.base.users);
    emit_csv(rows, dir / "summary.csv");
    emit_plot(rows, dir / ("sum_rate_vs_" + axis + ".svg"));
    write_text(dir / "config.json", pinchsim::to_json(cfg).dump(2) + "\n");

    std::size_t unstable = 0;
    for (const auto &r : results)
        unstable += (optimized(r.policy) && !r.stable) ? 1 : 0;
    for (const auto &r : rows)
        std::printf("%-14s %s=%-8g n=%zu mean=%.4f se=%.4f\n", std::string(to_string(r.policy)).c_str(),
                    axis.c_str(), r.sweep_value, r.count, r.mean, r.std_error);
    std::printf("wrote %s (%zu trial rows)\n", dir.string().c_str(), results.size());
    if (unstable > 0)
    {
        std::fprintf(stderr, "error: %zu optimized results failed the stability certificate\n", unstable);
        return Runtime;
    }
    return Ok;
}

int cmd_oracle(const Common &c)
{
    ExperimentConfig defaults;
    defaults.base.users = 2;
    defaults.base.antennas = 3;
    defaults.trials = 200;
    const ExperimentConfig cfg = resolve(c, defaults);
    const auto rep = run_oracle_compare(cfg);
    const nlohmann::json summary{{"trials", rep.trials.size()},
                                 {"num_users", cfg.base.users},
                                 {"num_antennas", cfg.base.antennas},
                                 {"SumRate", to_json(rep.sum_rate)},
                                 {"LosDistance", to_json(rep.los_distance)}};
    if (!c.out.empty() || !c.config.empty())
    {
        const fs::path dir(cfg.out_dir);
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec)
            throw IoError("Cannot create output directory '" + dir.string() + "': " + ec.message());
        emit_csv(rep, dir / "oracle.csv");
        write_text(dir / "oracle_summary.json", summary.dump(2) + "\n");
    }
    std::cout << summary.dump(2) << '\n';
    const bool ok = rep.sum_rate.fraction_stable == 1.0 && rep.los_distance.fraction_stable == 1.0 &&
                    rep.sum_rate.dominance_violations == 0 && rep.los_distance.dominance_violations == 0;
    return ok ? Ok : Runtime;
}

int cmd_audit(const Common &c, const std::string &csv)
{
    const fs::path dir(c.out.empty() ? "out" : c.out);
    ExperimentConfig cfg = load_config(c.config.empty() ? dir / "config.json" : fs::path(c.config));
    const auto rows = read_trials_csv(csv.empty() ? dir / "trials.csv" : fs::path(csv));

    std::size_t mismatched = 0, unstable = 0;
    for (const auto &row : rows)
    {
        const std::uint64_t seed = trial_seed(cfg.master_seed, row.trial);
        const Scenario sc = default_scenario(apply_sweep(cfg.base, parse_sweep_axis(row.sweep_name), row.sweep_value), seed);
        const ChannelTensor tensor = build_channel_tensor(sc);
        const TrialResult again = solve_policy(sc, tensor, row.policy, cfg.matching, false);
        const bool same = seed == row.seed && again.sum_rate == row.sum_rate && again.stable == row.stable;
        if (!same)
        {
            ++mismatched;
            std::fprintf(stderr, "mismatch: trial %zu policy %s %s=%g (seed %llu)\n", row.trial,
                         std::string(to_string(row.policy)).c_str(), row.sweep_name.c_str(), row.sweep_value,
                         static_cast<unsigned long long>(row.seed));
        }
        if (optimized(row.policy) && !again.stable)
            ++unstable;
    }
    std::printf("audited %zu rows: %zu mismatched, %zu unstable\n", rows.size(), mismatched, unstable);
    return mismatched == 0 && unstable == 0 ? Ok : Runtime;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Multi-waveguide pinching-antenna simulator with LoS blockages"};
    app.require_subcommand(1);

    Common run_opts, sweep_opts, oracle_opts, audit_opts;
    std::string audit_csv;
    auto *run = app.add_subcommand("run", "solve one scenario and print the results");
    auto *sweep = app.add_subcommand("sweep", "run a parameter sweep and write CSV and plot files");
    auto *oracle = app.add_subcommand("oracle", "compare the swap matching against exhaustive search");
    auto *audit = app.add_subcommand("stability-audit", "regenerate a results file from its seeds and re-certify it");
    add_common(run, run_opts);
    add_common(sweep, sweep_opts);
    add_common(oracle, oracle_opts);
    add_common(audit, audit_opts);
    audit->add_option("results", audit_csv, "trials CSV (default: <out>/trials.csv)");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? Ok : BadConfig;
    }

    try
    {
        if (*run)
            return cmd_run(run_opts);
        if (*sweep)
            return cmd_sweep(sweep_opts);
        if (*oracle)
            return cmd_oracle(oracle_opts);
        return cmd_audit(audit_opts, audit_csv);
    }
    catch (const IoError &e)
    {
        std::fprintf(stderr, "I/O error: %s\n", e.what());
        return Io;
    }
    catch (const fs::filesystem_error &e)
    {
        std::fprintf(stderr, "I/O error: %s\n", e.what());
        return Io;
    }
    catch (const ConfigError &e)
    {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return BadConfig;
    }
    catch (const BudgetExceeded &e)
    {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return BadConfig;
    }
    catch (const std::exception &e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return Runtime;
    }
}
