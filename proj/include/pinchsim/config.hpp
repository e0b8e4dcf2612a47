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

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "pinchsim/errors.hpp"
#include "pinchsim/experiment.hpp"

namespace pinchsim
{

// Flat JSON object; every key is optional and unknown keys are rejected.
//
//   num_users, num_antennas, num_scatterers, region_width, region_depth, waveguide_height,
//   carrier_frequency_hz, transmit_power_dbm, noise_power_dbm, blockage_radius, blockage_height,
//   blockage_centers [[x, y], ...], waveguide_y [...], antenna_x [...] or [[...], ...],
//   sweep_axis, sweep_values [...], policies [...], trials, master_seed, out_dir, cycle_cap,
//   strict_interference_on_swap, record_timing, threads, oracle_budget, users_outside_blockages
inline ExperimentConfig parse_config(const nlohmann::json &j)
{
    if (!j.is_object())
        throw ConfigError("Config must be a JSON object.");
    static const std::set<std::string> known{
        "num_users",        "num_antennas",         "num_scatterers",     "region_width",
        "region_depth",     "waveguide_height",     "carrier_frequency_hz", "transmit_power_dbm",
        "noise_power_dbm",  "blockage_radius",      "blockage_height",    "blockage_centers",
        "waveguide_y",      "antenna_x",            "sweep_axis",         "sweep_values",
        "policies",         "trials",               "master_seed",        "out_dir",
        "cycle_cap",        "strict_interference_on_swap", "record_timing", "threads",
        "oracle_budget",    "users_outside_blockages"};
    for (const auto &[key, _] : j.items())
        if (!known.contains(key))
            throw ConfigError("Unknown config key '" + key + "'.");

    ExperimentConfig cfg;
    ScenarioConfig &b = cfg.base;
    try
    {
        b.users = j.value("num_users", b.users);
        b.antennas = j.value("num_antennas", b.antennas);
        b.scatterers = j.value("num_scatterers", b.scatterers);
        b.region.width = j.value("region_width", b.region.width);
        b.region.depth = j.value("region_depth", b.region.depth);
        b.region.height = j.value("waveguide_height", b.region.height);
        b.carrier_frequency = j.value("carrier_frequency_hz", b.carrier_frequency);
        b.transmit_power_dbm = j.value("transmit_power_dbm", b.transmit_power_dbm);
        b.noise_power_dbm = j.value("noise_power_dbm", b.noise_power_dbm);
        b.blockage_radius = j.value("blockage_radius", b.blockage_radius);
        b.blockage_height = j.value("blockage_height", b.blockage_height);
        b.users_outside_blockages = j.value("users_outside_blockages", b.users_outside_blockages);
        if (j.contains("blockage_centers"))
            b.blockage_centers = j.at("blockage_centers").get<std::vector<std::pair<double, double>>>();
        if (j.contains("waveguide_y"))
            b.waveguide_y = j.at("waveguide_y").get<std::vector<double>>();
        if (j.contains("antenna_x"))
        {
            const auto &ax = j.at("antenna_x");
            if (!ax.empty() && ax.front().is_array())
                b.antenna_x = ax.get<std::vector<std::vector<double>>>();
            else
                b.antenna_x = std::vector<std::vector<double>>{ax.get<std::vector<double>>()};
        }

        if (j.contains("sweep_axis"))
        {
            cfg.axis = parse_sweep_axis(j.at("sweep_axis").get<std::string>());
            cfg.values = default_sweep_values(cfg.axis);
        }
        if (j.contains("sweep_values"))
            cfg.values = j.at("sweep_values").get<std::vector<double>>();
        if (j.contains("policies"))
        {
            cfg.policies.clear();
            for (const auto &p : j.at("policies"))
                cfg.policies.push_back(parse_policy(p.get<std::string>()));
        }
        cfg.trials = j.value("trials", cfg.trials);
        cfg.master_seed = j.value("master_seed", cfg.master_seed);
        cfg.out_dir = j.value("out_dir", cfg.out_dir);
        cfg.matching.cycle_cap = j.value("cycle_cap", cfg.matching.cycle_cap);
        cfg.matching.strict_interference_on_swap =
            j.value("strict_interference_on_swap", cfg.matching.strict_interference_on_swap);
        cfg.record_timing = j.value("record_timing", cfg.record_timing);
        cfg.threads = j.value("threads", cfg.threads);
        cfg.oracle_budget = j.value("oracle_budget", cfg.oracle_budget);
    }
    catch (const nlohmann::json::exception &e)
    {
        throw ConfigError(std::string("Config value has the wrong type: ") + e.what());
    }
    return cfg;
}

inline nlohmann::json to_json(const ExperimentConfig &cfg)
{
    const ScenarioConfig &b = cfg.base;
    nlohmann::json j{{"num_users", b.users},
                     {"num_antennas", b.antennas},
                     {"num_scatterers", b.scatterers},
                     {"region_width", b.region.width},
                     {"region_depth", b.region.depth},
                     {"waveguide_height", b.region.height},
                     {"carrier_frequency_hz", b.carrier_frequency},
                     {"transmit_power_dbm", b.transmit_power_dbm},
                     {"noise_power_dbm", b.noise_power_dbm},
                     {"blockage_radius", b.blockage_radius},
                     {"blockage_height", b.blockage_height},
                     {"users_outside_blockages", b.users_outside_blockages},
                     {"sweep_axis", std::string(to_string(cfg.axis))},
                     {"sweep_values", cfg.values},
                     {"trials", cfg.trials},
                     {"master_seed", cfg.master_seed},
                     {"out_dir", cfg.out_dir},
                     {"cycle_cap", cfg.matching.cycle_cap},
                     {"strict_interference_on_swap", cfg.matching.strict_interference_on_swap},
                     {"record_timing", cfg.record_timing},
                     {"threads", cfg.threads},
                     {"oracle_budget", cfg.oracle_budget}};
    if (b.blockage_centers)
        j["blockage_centers"] = *b.blockage_centers;
    if (b.waveguide_y)
        j["waveguide_y"] = *b.waveguide_y;
    if (b.antenna_x)
        j["antenna_x"] = *b.antenna_x;
    nlohmann::json pols = nlohmann::json::array();
    for (Policy p : cfg.policies)
        pols.push_back(std::string(to_string(p)));
    j["policies"] = pols;
    return j;
}

inline ExperimentConfig load_config(const std::filesystem::path &path)
{
    std::ifstream f(path);
    if (!f)
        throw IoError("Cannot open config '" + path.string() + "'.");
    nlohmann::json j;
    try
    {
        j = nlohmann::json::parse(f);
    }
    catch (const nlohmann::json::parse_error &e)
    {
        throw ConfigError("Config '" + path.string() + "' is not valid JSON: " + e.what());
    }
    return parse_config(j);
}

} // namespace pinchsim
