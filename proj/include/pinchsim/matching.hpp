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
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pinchsim/channel.hpp"
#include "pinchsim/errors.hpp"
#include "pinchsim/matching_state.hpp"
#include "pinchsim/rate.hpp"

namespace pinchsim
{

// SumRate: exact sum-rate comparisons. LosDistance: dominance over (LoS gained, distance shed,
// LoS interference links removed), computed without touching channel gains.
enum class Preference
{
    SumRate,
    LosDistance
};

inline std::string_view to_string(Preference p) { return p == Preference::SumRate ? "SumRate" : "LosDistance"; }

// Phi[k][m][n]: number of users other than n with a LoS link to antenna m of waveguide k.
class LosInterferenceTable
{
  public:
    LosInterferenceTable() = default;
    explicit LosInterferenceTable(const ChannelTensor &t)
        : m_(t.num_antennas()), n_(t.num_users()), totals_(t.num_waveguides() * t.num_antennas(), 0),
          own_(t.num_waveguides() * t.num_antennas() * t.num_users(), 0)
    {
        for (std::size_t k = 0; k < t.num_waveguides(); ++k)
            for (std::size_t m = 0; m < m_; ++m)
                for (std::size_t n = 0; n < n_; ++n)
                {
                    own_[(k * m_ + m) * n_ + n] = t.los(k, m, n);
                    totals_[k * m_ + m] += t.los(k, m, n);
                }
    }

    int count(std::size_t k, std::size_t m, std::size_t n) const
    {
        return totals_.at(k * m_ + m) - own_.at((k * m_ + m) * n_ + n);
    }

  private:
    std::size_t m_ = 0, n_ = 0;
    std::vector<int> totals_;
    std::vector<int> own_;
};

struct MatchingOptions
{
    std::size_t cycle_cap = 1000;
    // Require the swap rule's interference-link condition to hold strictly.
    bool strict_interference_on_swap = false;
};

// Read-only inputs shared by every matching operation of one trial.
class MatchingProblem
{
  public:
    MatchingProblem(const ChannelTensor &tensor, const PowerBudget &power, MatchingOptions options = {})
        : tensor_(&tensor), power_(power), phi_(tensor), options_(options)
    {
        if (tensor.num_users() != tensor.num_waveguides())
            throw ConfigError("Matching requires as many users as waveguides.");
    }

    const ChannelTensor &tensor() const { return *tensor_; }
    const PowerBudget &power() const { return power_; }
    const LosInterferenceTable &interference() const { return phi_; }
    const MatchingOptions &options() const { return options_; }
    std::size_t users() const { return tensor_->num_users(); }
    std::size_t antennas() const { return tensor_->num_antennas(); }

    double sum_rate(const Matching &mu) const { return pinchsim::sum_rate(*tensor_, mu, power_).sum; }

  private:
    const ChannelTensor *tensor_;
    PowerBudget power_;
    LosInterferenceTable phi_;
    MatchingOptions options_;
};

struct SwapCandidate
{
    std::size_t user = 0;           // n, moves from `waveguide` to `other_waveguide`
    std::size_t other_user = 0;     // n', moves the other way
    std::size_t waveguide = 0;      // k
    std::size_t other_waveguide = 0; // k'
    std::size_t antenna_on_waveguide = 0;       // proposed activation of k (now serving n')
    std::size_t antenna_on_other_waveguide = 0; // proposed activation of k' (now serving n)
};

struct AlgorithmStats
{
    std::size_t cycles = 0;
    std::size_t accepted_swaps = 0;
    std::size_t activation_switches = 0;
    std::size_t preference_evaluations = 0;
    std::size_t rate_evaluations = 0;
    std::vector<std::size_t> evaluations_per_cycle;
    std::vector<double> sum_rate_trajectory; // SumRate only: initial value, then one entry per accepted swap
};

namespace detail
{

// At least one strict improvement, no regression. Distances are "shed" (old minus new).
inline bool pareto_improves(int los_gain, double distance_shed, int interference_gain, bool strict_interference)
{
    if (los_gain < 0 || distance_shed < 0.0 || interference_gain > 0)
        return false;
    if (strict_interference)
        return interference_gain < 0;
    return los_gain > 0 || distance_shed > 0.0 || interference_gain < 0;
}

struct Counters
{
    std::size_t preference_evaluations = 0;
    std::size_t rate_evaluations = 0;
    std::size_t switches = 0;
};

} // namespace detail

// Antenna switch rule on waveguide k' for its user n: m' -> m''.
inline bool dominance_14(std::size_t n, std::size_t k, std::size_t m_old, std::size_t m_new, const ChannelTensor &t,
                         const LosInterferenceTable &phi)
{
    const int los_gain = t.los(k, m_new, n) - t.los(k, m_old, n);
    const double shed = t.distance(k, m_old, n) - t.distance(k, m_new, n);
    const int interference_gain = phi.count(k, m_new, n) - phi.count(k, m_old, n);
    return detail::pareto_improves(los_gain, shed, interference_gain, false);
}

// Joint two-user swap rule, evaluated at the proposed (possibly re-activated) antennas.
inline bool dominance_16(const Matching &current, const SwapCandidate &c, const ChannelTensor &t,
                         const LosInterferenceTable &phi, bool strict_interference = false)
{
    const std::size_t n = c.user, n2 = c.other_user, k = c.waveguide, k2 = c.other_waveguide;
    const std::size_t m = current.antenna_on(k), m2 = current.antenna_on(k2);
    const std::size_t m_new = c.antenna_on_waveguide, m2_new = c.antenna_on_other_waveguide;

    const int los_before = t.los(k, m, n) + t.los(k2, m2, n2);
    const int los_after = t.los(k2, m2_new, n) + t.los(k, m_new, n2);
    const double shed = (t.distance(k, m, n) - t.distance(k2, m2_new, n)) +
                        (t.distance(k2, m2, n2) - t.distance(k, m_new, n2));
    const int phi_before = phi.count(k, m, n) + phi.count(k2, m2, n2);
    const int phi_after = phi.count(k2, m2_new, n) + phi.count(k, m_new, n2);
    return detail::pareto_improves(los_after - los_before, shed, phi_after - phi_before, strict_interference);
}

inline Matching apply_swap(const Matching &mu, std::size_t n, std::size_t n2)
{
    if (n == n2)
        throw std::invalid_argument("Swap needs two distinct users.");
    Matching out = mu;
    out.swap_users(n, n2);
    return out;
}

namespace detail
{

// Greedy index-order antenna scan on one waveguide. `current_sum` tracks the sum rate of `mu`
// under SumRate and is ignored otherwise. The antenna active when the scan starts is not a candidate.
inline void reactivate_in_place(Matching &mu, double &current_sum, const MatchingProblem &prob, std::size_t kappa,
                                Preference policy, Counters &cnt)
{
    const std::size_t user = mu.user_on(kappa);
    const std::size_t start = mu.antenna_on(kappa);
    for (std::size_t cand = 0; cand < prob.antennas(); ++cand)
    {
        const std::size_t held = mu.antenna_on(kappa);
        if (cand == start)
            continue;
        ++cnt.preference_evaluations;
        if (policy == Preference::SumRate)
        {
            Matching trial = mu;
            trial.set_antenna(kappa, cand);
            const double s = prob.sum_rate(trial);
            ++cnt.rate_evaluations;
            if (s > current_sum)
            {
                mu = std::move(trial);
                current_sum = s;
                ++cnt.switches;
            }
        }
        else if (dominance_14(user, kappa, held, cand, prob.tensor(), prob.interference()))
        {
            mu.set_antenna(kappa, cand);
            ++cnt.switches;
        }
    }
}

struct SwapEvaluation
{
    bool blocking = false;
    Matching candidate;
    double candidate_sum = 0.0; // SumRate only
    std::size_t switches = 0;
};

inline SwapEvaluation evaluate_swap(const Matching &mu, double current_sum, std::size_t n, std::size_t n2,
                                    const MatchingProblem &prob, Preference policy, Counters &cnt)
{
    const std::size_t k = mu.waveguide_of(n), k2 = mu.waveguide_of(n2);
    SwapEvaluation ev;
    ev.candidate = apply_swap(mu, n, n2);
    if (policy == Preference::SumRate)
    {
        ev.candidate_sum = prob.sum_rate(ev.candidate);
        ++cnt.rate_evaluations;
    }
    const std::size_t switches_before = cnt.switches;
    for (std::size_t kappa : {k, k2})
        reactivate_in_place(ev.candidate, ev.candidate_sum, prob, kappa, policy, cnt);
    ev.switches = cnt.switches - switches_before;

    ++cnt.preference_evaluations;
    if (policy == Preference::SumRate)
    {
        ev.blocking = ev.candidate_sum > current_sum;
    }
    else
    {
        const SwapCandidate proposal{n, n2, k, k2, ev.candidate.antenna_on(k), ev.candidate.antenna_on(k2)};
        ev.blocking = dominance_16(mu, proposal, prob.tensor(), prob.interference(),
                                   prob.options().strict_interference_on_swap);
    }
    return ev;
}

} // namespace detail

// Re-scan the antennas of one waveguide for its currently assigned user.
inline Matching reactivate(const Matching &mu, const MatchingProblem &prob, std::size_t waveguide, Preference policy)
{
    mu.require_feasible(prob.users(), prob.antennas());
    if (waveguide >= prob.users())
        throw std::out_of_range("Waveguide index out of range.");
    Matching out = mu;
    double s = policy == Preference::SumRate ? prob.sum_rate(out) : 0.0;
    detail::Counters cnt;
    detail::reactivate_in_place(out, s, prob, waveguide, policy, cnt);
    return out;
}

struct SwapVerdict
{
    bool blocking = false;
    Matching candidate; // swapped and re-activated
};

inline SwapVerdict is_swap_blocking(const Matching &mu, std::size_t n, std::size_t n2, const MatchingProblem &prob,
                                    Preference policy)
{
    mu.require_feasible(prob.users(), prob.antennas());
    const double s = policy == Preference::SumRate ? prob.sum_rate(mu) : 0.0;
    detail::Counters cnt;
    auto ev = detail::evaluate_swap(mu, s, n, n2, prob, policy, cnt);
    return {ev.blocking, std::move(ev.candidate)};
}

struct AlgorithmResult
{
    Matching matching;
    AlgorithmStats stats;
};

namespace detail
{

inline void reactivate_lone_waveguide(Matching &mu, double &current_sum, const MatchingProblem &prob,
                                      Preference policy, Counters &cnt, AlgorithmStats &st)
{
    reactivate_in_place(mu, current_sum, prob, 0, policy, cnt);
    st.activation_switches += cnt.switches;
    if (policy == Preference::SumRate && cnt.switches > 0)
        st.sum_rate_trajectory.push_back(current_sum);
}

} // namespace detail

// Swap-matching local search. Each cycle visits users and target waveguides in ascending order and
// commits a swap only when it is swap-blocking; stops after a cycle without commits. The waveguide a
// user held when its turn began is not a target, so a cycle makes exactly N(K - 1) swap attempts.
inline AlgorithmResult run_algorithm1(const Matching &initial, const MatchingProblem &prob, Preference policy)
{
    initial.require_feasible(prob.users(), prob.antennas());
    AlgorithmResult res{initial, {}};
    Matching &mu = res.matching;
    AlgorithmStats &st = res.stats;
    double current_sum = 0.0;
    if (policy == Preference::SumRate)
    {
        current_sum = prob.sum_rate(mu);
        ++st.rate_evaluations;
        st.sum_rate_trajectory.push_back(current_sum);
    }

    const std::size_t N = prob.users();
    for (;;)
    {
        if (st.cycles == prob.options().cycle_cap)
        {
            std::ostringstream msg;
            msg << "Swap matching did not settle within " << prob.options().cycle_cap << " cycles (policy "
                << to_string(policy) << ", " << st.accepted_swaps << " swaps accepted).";
            throw ConvergenceError(msg.str());
        }
        ++st.cycles;
        detail::Counters cnt;
        std::size_t accepted = 0;
        if (N == 1)
        {
            // No swap partner exists; a cycle re-scans the lone waveguide instead.
            detail::reactivate_lone_waveguide(mu, current_sum, prob, policy, cnt, st);
            st.preference_evaluations += cnt.preference_evaluations;
            st.rate_evaluations += cnt.rate_evaluations;
            st.evaluations_per_cycle.push_back(cnt.preference_evaluations);
            if (cnt.switches == 0)
                break;
            continue;
        }
        for (std::size_t n = 0; n < N; ++n)
        {
            const std::size_t k = mu.waveguide_of(n);
            for (std::size_t k2 = 0; k2 < N; ++k2)
            {
                const std::size_t n2 = mu.user_on(k2);
                if (k2 == k || n2 == n)
                    continue;
                auto ev = detail::evaluate_swap(mu, current_sum, n, n2, prob, policy, cnt);
                if (!ev.blocking)
                    continue;
                mu = std::move(ev.candidate);
                current_sum = ev.candidate_sum;
                if (policy == Preference::SumRate)
                    st.sum_rate_trajectory.push_back(current_sum);
                ++accepted;
                st.activation_switches += ev.switches;
            }
        }
        st.accepted_swaps += accepted;
        st.preference_evaluations += cnt.preference_evaluations;
        st.rate_evaluations += cnt.rate_evaluations;
        st.evaluations_per_cycle.push_back(cnt.preference_evaluations);
        if (accepted == 0)
            break;
    }
    return res;
}

namespace detail
{

// Blocking test rebuilt from raw index arrays; shares no code with the search loop above.
inline bool pair_blocks(std::span<const std::size_t> assignment, std::span<const std::size_t> activation,
                        std::size_t n, std::size_t n2, const MatchingProblem &prob, Preference policy,
                        double base_sum)
{
    const ChannelTensor &t = prob.tensor();
    const std::size_t N = prob.users(), M = prob.antennas();
    std::vector<std::size_t> assign(assignment.begin(), assignment.end());
    std::vector<std::size_t> act(activation.begin(), activation.end());
    const std::size_t k = assign[n], k2 = assign[n2];
    std::swap(assign[n], assign[n2]);

    auto sum_of = [&](const std::vector<std::size_t> &a) {
        return pinchsim::sum_rate(t, Matching(assign, a), prob.power()).sum;
    };
    auto los_links_to_others = [&](std::size_t kk, std::size_t mm, std::size_t self) {
        int c = 0;
        for (std::size_t i = 0; i < N; ++i)
            if (i != self)
                c += t.los(kk, mm, i);
        return c;
    };

    double running = policy == Preference::SumRate ? sum_of(act) : 0.0;
    for (const std::size_t kappa : {k, k2})
    {
        const std::size_t nu = kappa == k ? n2 : n;
        const std::size_t start = act[kappa];
        for (std::size_t cand = 0; cand < M; ++cand)
        {
            if (cand == start)
                continue;
            if (policy == Preference::SumRate)
            {
                auto trial = act;
                trial[kappa] = cand;
                const double s = sum_of(trial);
                if (s > running)
                {
                    act = std::move(trial);
                    running = s;
                }
                continue;
            }
            const std::size_t held = act[kappa];
            const int dl = t.los(kappa, cand, nu) - t.los(kappa, held, nu);
            const double dd = t.distance(kappa, held, nu) - t.distance(kappa, cand, nu);
            const int di = los_links_to_others(kappa, cand, nu) - los_links_to_others(kappa, held, nu);
            const bool no_regress = dl >= 0 && dd >= 0.0 && di <= 0;
            if (no_regress && (dl > 0 || dd > 0.0 || di < 0))
                act[kappa] = cand;
        }
    }

    if (policy == Preference::SumRate)
        return running > base_sum;

    const std::size_t m = activation[k], m2 = activation[k2];
    const int dl = (t.los(k2, act[k2], n) + t.los(k, act[k], n2)) - (t.los(k, m, n) + t.los(k2, m2, n2));
    const double dd = (t.distance(k, m, n) - t.distance(k2, act[k2], n)) +
                      (t.distance(k2, m2, n2) - t.distance(k, act[k], n2));
    const int di = (los_links_to_others(k2, act[k2], n) + los_links_to_others(k, act[k], n2)) -
                   (los_links_to_others(k, m, n) + los_links_to_others(k2, m2, n2));
    if (!(dl >= 0 && dd >= 0.0 && di <= 0))
        return false;
    if (prob.options().strict_interference_on_swap)
        return di < 0;
    return dl > 0 || dd > 0.0 || di < 0;
}

} // namespace detail

// First swap-blocking ordered pair (n, n') found by a full scan, if any.
inline std::optional<std::pair<std::size_t, std::size_t>> find_blocking_pair(const Matching &mu,
                                                                             const MatchingProblem &prob,
                                                                             Preference policy)
{
    mu.require_feasible(prob.users(), prob.antennas());
    const double base = policy == Preference::SumRate ? prob.sum_rate(mu) : 0.0;
    for (std::size_t n = 0; n < prob.users(); ++n)
        for (std::size_t n2 = 0; n2 < prob.users(); ++n2)
            if (n != n2 && detail::pair_blocks(mu.assignment(), mu.activation(), n, n2, prob, policy, base))
                return std::pair{n, n2};
    return std::nullopt;
}

// Core membership: no ordered user pair is swap-blocking after the antenna re-scan of both waveguides.
inline bool certify_stable(const Matching &mu, const MatchingProblem &prob, Preference policy)
{
    return !find_blocking_pair(mu, prob, policy).has_value();
}

struct OracleResult
{
    Matching matching;
    double sum_rate = 0.0;
    std::size_t configurations = 0;
};

inline double oracle_configuration_count(std::size_t users, std::size_t antennas)
{
    double count = 1.0;
    for (std::size_t i = 2; i <= users; ++i)
        count *= static_cast<double>(i);
    return count * std::pow(static_cast<double>(antennas), static_cast<double>(users));
}

// Exhaustive search over all N! assignments times M^K activations.
inline OracleResult exhaustive_oracle(const ChannelTensor &t, const PowerBudget &power, double budget = 1e6)
{
    const std::size_t N = t.num_users(), M = t.num_antennas();
    if (N != t.num_waveguides())
        throw ConfigError("Oracle requires as many users as waveguides.");
    const double configs = oracle_configuration_count(N, M);
    if (configs > budget)
    {
        std::ostringstream msg;
        msg << "Exhaustive search needs " << configs << " configurations (budget " << budget
            << "); shrink the number of users or antennas.";
        throw BudgetExceeded(msg.str());
    }

    std::vector<std::size_t> perm(N);
    std::iota(perm.begin(), perm.end(), 0);
    OracleResult best;
    bool have = false;
    do
    {
        std::vector<std::size_t> act(N, 0);
        for (;;)
        {
            Matching cand(perm, act);
            const double s = sum_rate(t, cand, power).sum;
            ++best.configurations;
            if (!have || s > best.sum_rate)
            {
                best.matching = std::move(cand);
                best.sum_rate = s;
                have = true;
            }
            std::size_t pos = 0;
            while (pos < N && ++act[pos] == M)
                act[pos++] = 0;
            if (pos == N)
                break;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

} // namespace pinchsim
