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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pinchsim/pinchsim.hpp"

using namespace pinchsim;

namespace
{

// Tolerances and sizes, fixed here so that every run checks the same thing.
constexpr std::size_t stability_instances = 1000;
constexpr double stability_time_limit_s = 300.0;
constexpr std::size_t oracle_instances = 200;
constexpr double oracle_mean_gap_limit = 0.05;
constexpr double oracle_time_limit_s = 60.0;
constexpr std::size_t trend_trials = 500;
constexpr double separation_std_errors = 3.0;
constexpr double close_fraction = 0.05;
constexpr double flat_increase_limit = 0.2;       // bit/s/Hz
constexpr double magnitude_rel_tolerance = 1e-12;
constexpr std::size_t magnitude_points = 1000;
constexpr std::size_t sampling_geometries = 10000;
constexpr std::uint64_t acceptance_seed = 20250101;

int failures = 0;

void report(const char *id, const char *title, bool pass, const std::string &detail)
{
    std::printf("[%s] %s %s: %s\n", pass ? "PASS" : "FAIL", id, title, detail.c_str());
    std::fflush(stdout);
    failures += pass ? 0 : 1;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char *f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

ExperimentConfig trend_config(SweepAxis axis, std::vector<double> values, std::size_t scatterers)
{
    ExperimentConfig cfg;
    cfg.base.users = 4;
    cfg.base.antennas = 20;
    cfg.base.scatterers = scatterers;
    cfg.base.blockage_radius = 1.0;
    cfg.base.transmit_power_dbm = 20.0;
    cfg.axis = axis;
    cfg.values = std::move(values);
    cfg.trials = trend_trials;
    cfg.master_seed = acceptance_seed;
    return cfg;
}

// a - b measured in standard errors of the difference.
double separation(const SummaryRow &a, const SummaryRow &b)
{
    const double se = std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
    return se > 0.0 ? (a.mean - b.mean) / se : (a.mean > b.mean ? INFINITY : 0.0);
}

void criteria_stability_and_accounting()
{
    const auto t0 = std::chrono::steady_clock::now();
    const double radii[] = {0.5, 1.0, 1.5};
    const std::size_t scatterers[] = {0, 2, 3, 6};
    std::size_t certified = 0, runs = 0, cap_hits = 0, bound_violations = 0, max_cycles = 0;
    for (std::size_t i = 0; i < stability_instances; ++i)
    {
        ScenarioConfig cfg;
        cfg.users = 4;
        cfg.antennas = i % 2 == 0 ? 10 : 20;
        cfg.scatterers = scatterers[(i / 2) % 4];
        cfg.blockage_radius = radii[(i / 8) % 3];
        const std::uint64_t seed = trial_seed(acceptance_seed, i);
        const Scenario sc = default_scenario(cfg, seed);
        const ChannelTensor t = build_channel_tensor(sc);
        const MatchingProblem prob(t, sc.power);
        const Matching initial = random_baseline(4, cfg.antennas, seed);
        const std::size_t bound = 4 * 3 * 2 * cfg.antennas;
        for (auto policy : {Preference::SumRate, Preference::LosDistance})
        {
            ++runs;
            try
            {
                const auto res = run_algorithm1(initial, prob, policy);
                certified += certify_stable(res.matching, prob, policy) ? 1 : 0;
                for (std::size_t e : res.stats.evaluations_per_cycle)
                    bound_violations += e > bound ? 1 : 0;
                max_cycles = std::max(max_cycles, res.stats.cycles);
            }
            catch (const ConvergenceError &)
            {
                ++cap_hits;
            }
        }
    }
    const double elapsed = seconds_since(t0);
    report("C1", "stability certificate", certified == runs && elapsed < stability_time_limit_s,
           fmt("%zu/%zu outputs certified stable over %zu instances, both policies; %.1f s (limit %.0f s)", certified,
               runs, stability_instances, elapsed, stability_time_limit_s));
    report("C3", "convergence accounting", bound_violations == 0 && cap_hits == 0,
           fmt("%zu cycles above N(K-1)*2M evaluations, %zu cycle-cap hits, max %zu cycles", bound_violations,
               cap_hits, max_cycles));
}

void criterion_oracle_gap()
{
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentConfig cfg;
    cfg.base.users = 2;
    cfg.base.antennas = 3;
    cfg.trials = oracle_instances;
    cfg.master_seed = acceptance_seed;
    cfg.values = {20.0};
    const auto rep = run_oracle_compare(cfg);
    const double elapsed = seconds_since(t0);
    const auto &g = rep.sum_rate;
    const bool pass = g.fraction_optimal > 0.5 && g.fraction_stable == 1.0 && g.mean_gap <= oracle_mean_gap_limit &&
                      g.dominance_violations == 0 && elapsed < oracle_time_limit_s;
    report("C2", "oracle gap", pass,
           fmt("optimal in %.1f%% of %zu instances, stable %.1f%%, mean gap %.3g%% (limit %.0f%%), max gap %.3g%%, "
               "%.1f s",
               100.0 * g.fraction_optimal, rep.trials.size(), 100.0 * g.fraction_stable, 100.0 * g.mean_gap,
               100.0 * oracle_mean_gap_limit, 100.0 * g.max_gap, elapsed));
}

void criteria_power_trends()
{
    const auto with_l3 = aggregate(run_sweep(trend_config(SweepAxis::TransmitPowerDbm, {20.0}, 3)));
    const auto &s1 = find_summary(with_l3, Policy::SumRate, 20.0);
    const auto &s2 = find_summary(with_l3, Policy::LosDistance, 20.0);
    const auto &rb = find_summary(with_l3, Policy::RandomBaseline, 20.0);
    const auto &fc = find_summary(with_l3, Policy::FixedCenter, 20.0);
    const double d12 = separation(s1, s2), d2r = separation(s2, rb), drf = separation(rb, fc);
    report("C4", "power-sweep ordering with scatterers",
           d12 >= separation_std_errors && d2r >= separation_std_errors && drf >= separation_std_errors,
           fmt("SumRate %.3f, LosDistance %.3f, RandomBaseline %.3f, FixedCenter %.3f; separations %.1f, %.1f, %.1f "
               "standard errors (need >= %.0f)",
               s1.mean, s2.mean, rb.mean, fc.mean, d12, d2r, drf, separation_std_errors));

    const auto no_scatter = aggregate(run_sweep(trend_config(SweepAxis::TransmitPowerDbm, {20.0}, 0)));
    const auto &a1 = find_summary(no_scatter, Policy::SumRate, 20.0);
    const auto &a2 = find_summary(no_scatter, Policy::LosDistance, 20.0);
    const double rel = std::abs(a2.mean - a1.mean) / a1.mean;
    report("C5", "dominance rule close without scatterers, below with them",
           rel <= close_fraction && s1.mean > s2.mean,
           fmt("L=0: LosDistance %.3f vs SumRate %.3f (%.1f%% apart, limit %.0f%%); L=3: SumRate %.3f > "
               "LosDistance %.3f",
               a2.mean, a1.mean, 100.0 * rel, 100.0 * close_fraction, s1.mean, s2.mean));

    ExperimentConfig flat = trend_config(SweepAxis::TransmitPowerDbm, {40.0, 50.0}, 0);
    flat.base.blockage_centers = std::vector<std::pair<double, double>>{};
    flat.policies = {Policy::RandomBaseline};
    const auto fr = aggregate(run_sweep(flat));
    const double inc = find_summary(fr, Policy::RandomBaseline, 50.0).mean - find_summary(fr, Policy::RandomBaseline, 40.0).mean;
    report("C6", "high-power flattening", inc < flat_increase_limit,
           fmt("RandomBaseline mean +%.4g bit/s/Hz from 40 to 50 dBm (limit %.1f)", inc, flat_increase_limit));
}

void criterion_radius_trend()
{
    const std::vector<double> radii{0.5, 1.0, 1.5};
    const auto rows = aggregate(run_sweep(trend_config(SweepAxis::BlockageRadius, radii, 3)));
    bool s1_up = true, fc_down = true;
    std::string s1s, fcs;
    for (std::size_t i = 0; i < radii.size(); ++i)
    {
        const double a = find_summary(rows, Policy::SumRate, radii[i]).mean;
        const double f = find_summary(rows, Policy::FixedCenter, radii[i]).mean;
        s1s += fmt("%s%.3f", i ? ", " : "", a);
        fcs += fmt("%s%.3f", i ? ", " : "", f);
        if (i > 0)
        {
            s1_up = s1_up && a >= find_summary(rows, Policy::SumRate, radii[i - 1]).mean;
            fc_down = fc_down && f <= find_summary(rows, Policy::FixedCenter, radii[i - 1]).mean;
        }
    }
    report("C7", "blockage-radius trend", s1_up && fc_down,
           fmt("SumRate [%s] non-decreasing: %s; FixedCenter [%s] non-increasing: %s", s1s.c_str(),
               s1_up ? "yes" : "no", fcs.c_str(), fc_down ? "yes" : "no"));
}

void criterion_scatterer_trend()
{
    const std::vector<double> counts{0.0, 2.0, 4.0, 6.0};
    const auto rows = aggregate(run_sweep(trend_config(SweepAxis::ScattererCount, counts, 3)));
    bool s1_down = true;
    std::string s1s, fcs;
    std::vector<double> fc;
    for (std::size_t i = 0; i < counts.size(); ++i)
    {
        const double a = find_summary(rows, Policy::SumRate, counts[i]).mean;
        fc.push_back(find_summary(rows, Policy::FixedCenter, counts[i]).mean);
        s1s += fmt("%s%.3f", i ? ", " : "", a);
        fcs += fmt("%s%.3f", i ? ", " : "", fc.back());
        if (i > 0)
            s1_down = s1_down && a <= find_summary(rows, Policy::SumRate, counts[i - 1]).mean;
    }
    const double first_drop = fc[0] - fc[1];
    double later_drop = -INFINITY;
    for (std::size_t i = 2; i < fc.size(); ++i)
        later_drop = std::max(later_drop, fc[i - 1] - fc[i]);
    const bool fc_ok = first_drop > 0.0 && first_drop > later_drop;
    report("C8", "scatterer-count trend", s1_down && fc_ok,
           fmt("SumRate [%s] non-increasing: %s; FixedCenter [%s] drop 0->2 = %.3f vs largest later drop %.3f", s1s.c_str(),
               s1_down ? "yes" : "no", fcs.c_str(), first_drop, later_drop));
}

void criterion_channel()
{
    const RadioConstants radio{28e9};
    const double eta = radio.path_loss_coefficient();
    double worst = 0.0;
    for (std::size_t i = 0; i < magnitude_points; ++i)
    {
        const double r = 0.1 * std::pow(1000.0, static_cast<double>(i) / (magnitude_points - 1));
        const cplx h = los_component({0.3, -0.2, 3.0}, {0.3, -0.2, 3.0 - r}, radio);
        worst = std::max(worst, std::abs(std::abs(h) * r - eta) / eta);
    }

    std::mt19937_64 rng(acceptance_seed);
    std::uniform_real_distribution<double> ux(-5.0, 5.0), radius(0.2, 2.0), height(0.3, 3.5);
    std::uniform_int_distribution<int> count(1, 6);
    std::size_t mismatches = 0, blocked = 0;
    for (std::size_t g = 0; g < sampling_geometries; ++g)
    {
        const Vec3 ant{ux(rng), 0.1 * ux(rng), 3.0}, user{ux(rng), ux(rng), 0.0};
        std::vector<Blockage> bs(static_cast<std::size_t>(count(rng)));
        for (auto &b : bs)
            b = {ux(rng), ux(rng), radius(rng), height(rng)};
        bool sampled = false;
        for (const auto &b : bs)
            if (!sampled)
                sampled = oracle::sampled_blocked(ant, user, b);
        const bool clear = los_indicator(ant, user, bs) == 1;
        mismatches += clear == sampled ? 1 : 0;
        blocked += sampled ? 1 : 0;
    }
    report("C9", "channel unit checks", worst <= magnitude_rel_tolerance && mismatches == 0,
           fmt("max relative |h|*r - eta error %.2e over r in [0.1, 100] m (limit %.0e); LoS indicator disagrees "
               "with dense sampling on %zu of %zu geometries (%zu blocked)",
               worst, magnitude_rel_tolerance, mismatches, sampling_geometries, blocked));
}

void criterion_determinism()
{
    ExperimentConfig cfg = trend_config(SweepAxis::BlockageRadius, {0.5, 1.5}, 3);
    cfg.trials = 100;
    std::ostringstream a, b, c;
    write_trials_csv(a, run_sweep(cfg), 4);
    write_trials_csv(b, run_sweep(cfg), 4);
    cfg.threads = 4;
    write_trials_csv(c, run_sweep(cfg), 4);
    const bool same = a.str() == b.str() && a.str() == c.str();
    report("C10", "determinism", same,
           fmt("two runs %s, 4-thread run %s (%zu bytes)", a.str() == b.str() ? "byte-identical" : "differ",
               a.str() == c.str() ? "byte-identical" : "differs", a.str().size()));
}

} // namespace

int main()
{
    const auto t0 = std::chrono::steady_clock::now();
    criteria_stability_and_accounting();
    criterion_oracle_gap();
    criteria_power_trends();
    criterion_radius_trend();
    criterion_scatterer_trend();
    criterion_channel();
    criterion_determinism();
    std::printf("%d of 10 criteria failed (%.1f s)\n", failures, seconds_since(t0));
    return failures == 0 ? 0 : 1;
}
