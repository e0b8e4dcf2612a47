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

#pragma once

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "pinchsim/channel.hpp"
#include "pinchsim/errors.hpp"
#include "pinchsim/matching.hpp"
#include "pinchsim/rate.hpp"
#include "pinchsim/scenario.hpp"

namespace pinchsim
{

enum class Policy
{
    SumRate,
    LosDistance,
    RandomBaseline,
    FixedCenter
};

inline std::string_view to_string(Policy p)
{
    switch (p)
    {
    case Policy::SumRate: return "SumRate";
    case Policy::LosDistance: return "LosDistance";
    case Policy::RandomBaseline: return "RandomBaseline";
    case Policy::FixedCenter: return "FixedCenter";
    }
    return "?";
}

inline Policy parse_policy(std::string_view s)
{
    auto lower = [](std::string_view v) {
        std::string out;
        for (char c : v)
            if (c != '-' && c != '_')
                out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        return out;
    };
    const std::string key = lower(s);
    if (key == "sumrate" || key == "solution1")
        return Policy::SumRate;
    if (key == "losdistance" || key == "solution2")
        return Policy::LosDistance;
    if (key == "randombaseline" || key == "random")
        return Policy::RandomBaseline;
    if (key == "fixedcenter" || key == "fixed")
        return Policy::FixedCenter;
    throw ConfigError("Unknown policy '" + std::string(s) + "'.");
}

enum class SweepAxis
{
    TransmitPowerDbm,
    BlockageRadius,
    ScattererCount
};

inline std::string_view to_string(SweepAxis a)
{
    switch (a)
    {
    case SweepAxis::TransmitPowerDbm: return "transmit_power_dbm";
    case SweepAxis::BlockageRadius: return "blockage_radius";
    case SweepAxis::ScattererCount: return "scatterer_count";
    }
    return "?";
}

inline SweepAxis parse_sweep_axis(std::string_view s)
{
    for (auto a : {SweepAxis::TransmitPowerDbm, SweepAxis::BlockageRadius, SweepAxis::ScattererCount})
        if (s == to_string(a))
            return a;
    throw ConfigError("Unknown sweep axis '" + std::string(s) +
                      "' (expected transmit_power_dbm, blockage_radius or scatterer_count).");
}

inline std::vector<double> default_sweep_values(SweepAxis a)
{
    switch (a)
    {
    case SweepAxis::TransmitPowerDbm: return {0.0, 10.0, 20.0, 30.0, 40.0};
    case SweepAxis::BlockageRadius: return {0.5, 1.0, 1.5};
    case SweepAxis::ScattererCount: return {0.0, 2.0, 4.0, 6.0};
    }
    return {};
}

struct ExperimentConfig
{
    ScenarioConfig base;
    SweepAxis axis = SweepAxis::TransmitPowerDbm;
    std::vector<double> values = default_sweep_values(SweepAxis::TransmitPowerDbm);
    std::vector<Policy> policies{Policy::SumRate, Policy::LosDistance, Policy::RandomBaseline, Policy::FixedCenter};
    std::size_t trials = 500;
    std::uint64_t master_seed = 1;
    std::string out_dir = "out";
    MatchingOptions matching;
    bool record_timing = false;
    std::size_t threads = 1;
    double oracle_budget = 1e6;
};

inline ScenarioConfig apply_sweep(ScenarioConfig c, SweepAxis axis, double value)
{
    switch (axis)
    {
    case SweepAxis::TransmitPowerDbm:
        c.transmit_power_dbm = value;
        break;
    case SweepAxis::BlockageRadius:
        c.blockage_radius = value;
        break;
    case SweepAxis::ScattererCount:
        if (!(value >= 0.0) || value != std::floor(value) || value > 1e6)
            throw ConfigError("scatterer_count sweep values must be non-negative integers.");
        c.scatterers = static_cast<std::size_t>(value);
        break;
    }
    return c;
}

inline void validate(const ExperimentConfig &cfg)
{
    if (cfg.trials < 1)
        throw ConfigError("trials must be at least 1.");
    if (cfg.values.empty())
        throw ConfigError("sweep_values must not be empty.");
    if (cfg.policies.empty())
        throw ConfigError("At least one policy is required.");
    if (cfg.matching.cycle_cap < 1)
        throw ConfigError("cycle_cap must be at least 1.");
    if (cfg.threads < 1)
        throw ConfigError("threads must be at least 1.");
    for (double v : cfg.values)
        validate(apply_sweep(cfg.base, cfg.axis, v));
}

struct TrialResult
{
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    Policy policy = Policy::SumRate;
    std::string sweep_name;
    double sweep_value = 0.0;
    std::vector<double> rates;
    double sum_rate = 0.0;
    std::size_t cycles = 0;
    std::size_t accepted_swaps = 0;
    std::size_t preference_evaluations = 0;
    bool stable = false;
    std::optional<double> wall_time_ms;
    Matching matching; // not serialized; reproducible from the seed
    std::size_t max_evaluations_per_cycle = 0;
};

namespace detail
{

inline std::string trial_context(std::uint64_t seed, std::string_view axis, double value, Policy p)
{
    std::ostringstream os;
    os.precision(17);
    os << " [seed " << seed << ", " << axis << " = " << value << ", policy " << to_string(p) << "]";
    return os.str();
}

inline void fill_from(TrialResult &r, const AlgorithmStats &st)
{
    r.cycles = st.cycles;
    r.accepted_swaps = st.accepted_swaps;
    r.preference_evaluations = st.preference_evaluations;
    for (auto e : st.evaluations_per_cycle)
        r.max_evaluations_per_cycle = std::max(r.max_evaluations_per_cycle, e);
}

} // namespace detail

// Solves one generated scenario under one policy. Every policy of a trial starts from the same
// random matching; FixedCenter draws the same permutation with its single antenna.
inline TrialResult solve_policy(const Scenario &sc, const ChannelTensor &tensor, Policy policy,
                                const MatchingOptions &opts, bool record_timing)
{
    const auto t0 = std::chrono::steady_clock::now();
    TrialResult r;
    r.seed = sc.seed;
    r.policy = policy;

    if (policy == Policy::FixedCenter)
    {
        const Scenario fixed = fixed_center_variant(sc);
        const ChannelTensor ft = build_channel_tensor(fixed);
        const MatchingProblem prob(ft, sc.power, opts);
        auto res = run_algorithm1(random_baseline(sc.num_users(), 1, sc.seed), prob, Preference::SumRate);
        detail::fill_from(r, res.stats);
        r.matching = std::move(res.matching);
        const auto report = sum_rate(ft, r.matching, sc.power);
        r.rates = report.per_user;
        r.sum_rate = report.sum;
        r.stable = certify_stable(r.matching, prob, Preference::SumRate);
    }
    else
    {
        const MatchingProblem prob(tensor, sc.power, opts);
        const Matching initial = random_baseline(sc.num_users(), sc.num_antennas(), sc.seed);
        Preference pref = Preference::SumRate;
        if (policy == Policy::RandomBaseline)
        {
            r.matching = initial;
        }
        else
        {
            pref = policy == Policy::SumRate ? Preference::SumRate : Preference::LosDistance;
            auto res = run_algorithm1(initial, prob, pref);
            detail::fill_from(r, res.stats);
            r.matching = std::move(res.matching);
        }
        const auto report = sum_rate(tensor, r.matching, sc.power);
        r.rates = report.per_user;
        r.sum_rate = report.sum;
        r.stable = certify_stable(r.matching, prob, pref);
    }

    if (record_timing)
        r.wall_time_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

// All policies for one (sweep value, trial) pair; errors carry the failing seed, value and policy.
inline std::vector<TrialResult> run_trial(const ExperimentConfig &cfg, double value, std::size_t trial)
{
    const std::uint64_t seed = trial_seed(cfg.master_seed, trial);
    const std::string axis(to_string(cfg.axis));
    const Scenario sc = default_scenario(apply_sweep(cfg.base, cfg.axis, value), seed);
    const ChannelTensor tensor = build_channel_tensor(sc);
    std::vector<TrialResult> out;
    for (Policy p : cfg.policies)
    {
        try
        {
            TrialResult r = solve_policy(sc, tensor, p, cfg.matching, cfg.record_timing);
            r.trial = trial;
            r.sweep_name = axis;
            r.sweep_value = value;
            out.push_back(std::move(r));
        }
        catch (const ConvergenceError &e)
        {
            throw ConvergenceError(e.what() + detail::trial_context(seed, axis, value, p));
        }
        catch (const ConfigError &e)
        {
            throw ConfigError(e.what() + detail::trial_context(seed, axis, value, p));
        }
        catch (const std::exception &e)
        {
            throw std::runtime_error(e.what() + detail::trial_context(seed, axis, value, p));
        }
    }
    return out;
}

// Result order: sweep value, then trial, then policy as listed (independent of thread count).
inline std::vector<TrialResult> run_sweep(const ExperimentConfig &cfg)
{
    validate(cfg);
    const std::size_t jobs = cfg.values.size() * cfg.trials;
    std::vector<std::vector<TrialResult>> slots(jobs);
    std::vector<std::exception_ptr> errors(jobs);

    auto work = [&](std::size_t first, std::size_t stride) {
        for (std::size_t j = first; j < jobs; j += stride)
        {
            try
            {
                slots[j] = run_trial(cfg, cfg.values[j / cfg.trials], j % cfg.trials);
            }
            catch (...)
            {
                errors[j] = std::current_exception();
            }
        }
    };

    const std::size_t workers = std::min(cfg.threads, jobs);
    if (workers <= 1)
        work(0, 1);
    else
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back(work, w, workers);
    }
    for (auto &e : errors)
        if (e)
            std::rethrow_exception(e);

    std::vector<TrialResult> out;
    out.reserve(jobs * cfg.policies.size());
    for (auto &s : slots)
        for (auto &r : s)
            out.push_back(std::move(r));
    return out;
}

struct SummaryRow
{
    Policy policy = Policy::SumRate;
    std::string sweep_name;
    double sweep_value = 0.0;
    std::size_t count = 0;
    double mean = 0.0;
    double stddev = 0.0; // sample (n - 1) standard deviation; 0 for a single value
    double std_error = 0.0;
    double mean_min_rate = 0.0;
};

// Groups by (sweep value, policy) in order of first appearance.
inline std::vector<SummaryRow> aggregate(const std::vector<TrialResult> &results)
{
    if (results.empty())
        throw std::invalid_argument("Cannot aggregate an empty result list.");
    struct Acc
    {
        SummaryRow row;
        std::vector<double> sums;
        double min_rate_total = 0.0;
    };
    std::vector<Acc> groups;
    for (const auto &r : results)
    {
        auto it = std::find_if(groups.begin(), groups.end(), [&](const Acc &a) {
            return a.row.policy == r.policy && a.row.sweep_value == r.sweep_value && a.row.sweep_name == r.sweep_name;
        });
        if (it == groups.end())
        {
            groups.push_back({});
            it = std::prev(groups.end());
            it->row.policy = r.policy;
            it->row.sweep_name = r.sweep_name;
            it->row.sweep_value = r.sweep_value;
        }
        it->sums.push_back(r.sum_rate);
        it->min_rate_total += r.rates.empty() ? 0.0 : *std::min_element(r.rates.begin(), r.rates.end());
    }

    std::vector<SummaryRow> out;
    for (auto &g : groups)
    {
        const double n = static_cast<double>(g.sums.size());
        double mean = 0.0;
        for (double v : g.sums)
            mean += v;
        mean /= n;
        double ss = 0.0;
        for (double v : g.sums)
            ss += (v - mean) * (v - mean);
        g.row.count = g.sums.size();
        g.row.mean = mean;
        g.row.stddev = g.sums.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
        g.row.std_error = g.row.stddev / std::sqrt(n);
        g.row.mean_min_rate = g.min_rate_total / n;
        out.push_back(g.row);
    }
    return out;
}

inline const SummaryRow &find_summary(const std::vector<SummaryRow> &rows, Policy p, double value)
{
    for (const auto &r : rows)
        if (r.policy == p && r.sweep_value == value)
            return r;
    throw std::out_of_range("No summary row for policy " + std::string(to_string(p)) + ".");
}

// ---------- oracle comparison ----------

struct OracleTrial
{
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    double oracle_sum_rate = 0.0;
    double sum_rate_policy = 0.0;
    double sum_rate_gap = 0.0; // (oracle - algorithm) / oracle
    bool sum_rate_stable = false;
    double los_distance_policy = 0.0;
    double los_distance_gap = 0.0;
    bool los_distance_stable = false;
};

struct GapSummary
{
    double fraction_optimal = 0.0;
    double mean_gap = 0.0;
    double max_gap = 0.0;
    double fraction_stable = 0.0;
    std::size_t dominance_violations = 0; // algorithm above oracle beyond tolerance
};

struct OracleReport
{
    std::vector<OracleTrial> trials;
    GapSummary sum_rate;
    GapSummary los_distance;
};

inline constexpr double oracle_tolerance = 1e-9; // relative, for floating-point ties

inline double relative_gap(double oracle, double value) { return oracle > 0.0 ? (oracle - value) / oracle : 0.0; }

inline OracleReport run_oracle_compare(const ExperimentConfig &cfg)
{
    validate(cfg);
    const ScenarioConfig sc_cfg = apply_sweep(cfg.base, cfg.axis, cfg.values.front());
    const double configs = oracle_configuration_count(sc_cfg.users, sc_cfg.antennas);
    if (configs > cfg.oracle_budget)
        throw BudgetExceeded("Oracle comparison needs " + std::to_string(configs) +
                             " configurations per trial; shrink num_users or num_antennas.");

    OracleReport rep;
    for (std::size_t trial = 0; trial < cfg.trials; ++trial)
    {
        const std::uint64_t seed = trial_seed(cfg.master_seed, trial);
        const Scenario sc = default_scenario(sc_cfg, seed);
        const ChannelTensor tensor = build_channel_tensor(sc);
        const MatchingProblem prob(tensor, sc.power, cfg.matching);
        const auto oracle = exhaustive_oracle(tensor, sc.power, cfg.oracle_budget);
        const Matching initial = random_baseline(sc.num_users(), sc.num_antennas(), seed);

        OracleTrial t;
        t.trial = trial;
        t.seed = seed;
        t.oracle_sum_rate = oracle.sum_rate;
        const auto s1 = run_algorithm1(initial, prob, Preference::SumRate);
        t.sum_rate_policy = prob.sum_rate(s1.matching);
        t.sum_rate_gap = relative_gap(oracle.sum_rate, t.sum_rate_policy);
        t.sum_rate_stable = certify_stable(s1.matching, prob, Preference::SumRate);
        const auto s2 = run_algorithm1(initial, prob, Preference::LosDistance);
        t.los_distance_policy = prob.sum_rate(s2.matching);
        t.los_distance_gap = relative_gap(oracle.sum_rate, t.los_distance_policy);
        t.los_distance_stable = certify_stable(s2.matching, prob, Preference::LosDistance);
        rep.trials.push_back(t);
    }

    auto summarize = [&](auto gap_of, auto stable_of) {
        GapSummary g;
        for (const auto &t : rep.trials)
        {
            const double gap = gap_of(t);
            g.mean_gap += gap;
            g.max_gap = std::max(g.max_gap, gap);
            if (gap <= oracle_tolerance)
                g.fraction_optimal += 1.0;
            if (gap < -oracle_tolerance)
                ++g.dominance_violations;
            if (stable_of(t))
                g.fraction_stable += 1.0;
        }
        const double n = static_cast<double>(rep.trials.size());
        g.mean_gap /= n;
        g.fraction_optimal /= n;
        g.fraction_stable /= n;
        return g;
    };
    rep.sum_rate = summarize([](const OracleTrial &t) { return t.sum_rate_gap; },
                             [](const OracleTrial &t) { return t.sum_rate_stable; });
    rep.los_distance = summarize([](const OracleTrial &t) { return t.los_distance_gap; },
                                 [](const OracleTrial &t) { return t.los_distance_stable; });
    return rep;
}

} // namespace pinchsim
