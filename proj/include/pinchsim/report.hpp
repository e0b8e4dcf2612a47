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
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pinchsim/errors.hpp"
#include "pinchsim/experiment.hpp"

namespace pinchsim
{

// 17 significant digits: parses back to the identical double.
inline std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline double parse_double(std::string_view s)
{
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw IoError("Malformed number '" + std::string(s) + "' in CSV.");
    return v;
}

template <typename Int>
Int parse_integer(std::string_view s)
{
    Int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw IoError("Malformed integer '" + std::string(s) + "' in CSV.");
    return v;
}

namespace detail
{

inline std::ofstream open_for_write(const std::filesystem::path &path)
{
    std::error_code ec;
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw IoError("Cannot open '" + path.string() + "' for writing.");
    return f;
}

inline void finish(std::ofstream &f, const std::filesystem::path &path)
{
    f.flush();
    if (!f)
        throw IoError("Failed writing '" + path.string() + "'.");
}

inline std::vector<std::string> split_csv_line(const std::string &line)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : line)
    {
        if (c == ',')
        {
            out.push_back(cur);
            cur.clear();
        }
        else if (c != '\r')
            cur += c;
    }
    out.push_back(cur);
    return out;
}

} // namespace detail

// Columns: trial, seed, policy, sweep_name, sweep_value, sum_rate, rate_user_1..N, cycles,
// accepted_swaps, preference_evaluations, stable, wall_time_ms (empty when timing is off).
inline std::string trials_csv_header(std::size_t users)
{
    std::string h = "trial,seed,policy,sweep_name,sweep_value,sum_rate";
    for (std::size_t n = 1; n <= users; ++n)
        h += ",rate_user_" + std::to_string(n);
    h += ",cycles,accepted_swaps,preference_evaluations,stable,wall_time_ms";
    return h;
}

inline void write_trials_csv(std::ostream &os, const std::vector<TrialResult> &results, std::size_t users)
{
    os << trials_csv_header(users) << '\n';
    for (const auto &r : results)
    {
        if (r.rates.size() != users)
            throw std::invalid_argument("Trial result has a different user count than the CSV header.");
        os << r.trial << ',' << r.seed << ',' << to_string(r.policy) << ',' << r.sweep_name << ','
           << format_double(r.sweep_value) << ',' << format_double(r.sum_rate);
        for (double v : r.rates)
            os << ',' << format_double(v);
        os << ',' << r.cycles << ',' << r.accepted_swaps << ',' << r.preference_evaluations << ','
           << (r.stable ? 1 : 0) << ',';
        if (r.wall_time_ms)
            os << format_double(*r.wall_time_ms);
        os << '\n';
    }
}

inline void emit_csv(const std::vector<TrialResult> &results, const std::filesystem::path &path, std::size_t users)
{
    auto f = detail::open_for_write(path);
    write_trials_csv(f, results, users);
    detail::finish(f, path);
}

inline std::vector<TrialResult> parse_trials_csv(std::istream &is)
{
    std::string line;
    if (!std::getline(is, line))
        throw IoError("Empty trials CSV.");
    const auto header = detail::split_csv_line(line);
    const std::size_t fixed = 6 + 5;
    if (header.size() < fixed || header[0] != "trial")
        throw IoError("Unrecognized trials CSV header.");
    const std::size_t users = header.size() - fixed;
    if (detail::split_csv_line(trials_csv_header(users) ) != header)
        throw IoError("Trials CSV header does not match the expected column order.");

    std::vector<TrialResult> out;
    while (std::getline(is, line))
    {
        if (line.empty())
            continue;
        const auto f = detail::split_csv_line(line);
        if (f.size() != header.size())
            throw IoError("Trials CSV row has " + std::to_string(f.size()) + " fields, expected " +
                          std::to_string(header.size()) + ".");
        TrialResult r;
        r.trial = parse_integer<std::size_t>(f[0]);
        r.seed = parse_integer<std::uint64_t>(f[1]);
        r.policy = parse_policy(f[2]);
        r.sweep_name = f[3];
        r.sweep_value = parse_double(f[4]);
        r.sum_rate = parse_double(f[5]);
        for (std::size_t n = 0; n < users; ++n)
            r.rates.push_back(parse_double(f[6 + n]));
        r.cycles = parse_integer<std::size_t>(f[6 + users]);
        r.accepted_swaps = parse_integer<std::size_t>(f[7 + users]);
        r.preference_evaluations = parse_integer<std::size_t>(f[8 + users]);
        r.stable = f[9 + users] == "1";
        if (!f[10 + users].empty())
            r.wall_time_ms = parse_double(f[10 + users]);
        out.push_back(std::move(r));
    }
    return out;
}

inline std::vector<TrialResult> read_trials_csv(const std::filesystem::path &path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw IoError("Cannot open '" + path.string() + "' for reading.");
    return parse_trials_csv(f);
}

inline void emit_csv(const std::vector<SummaryRow> &rows, const std::filesystem::path &path)
{
    auto f = detail::open_for_write(path);
    f << "policy,sweep_name,sweep_value,count,mean_sum_rate,std_sum_rate,stderr_sum_rate,mean_min_user_rate\n";
    for (const auto &r : rows)
        f << to_string(r.policy) << ',' << r.sweep_name << ',' << format_double(r.sweep_value) << ',' << r.count << ','
          << format_double(r.mean) << ',' << format_double(r.stddev) << ',' << format_double(r.std_error) << ','
          << format_double(r.mean_min_rate) << '\n';
    detail::finish(f, path);
}

inline void emit_csv(const OracleReport &rep, const std::filesystem::path &path)
{
    auto f = detail::open_for_write(path);
    f << "trial,seed,oracle_sum_rate,sum_rate_policy,sum_rate_gap,sum_rate_stable,los_distance_policy,"
         "los_distance_gap,los_distance_stable\n";
    for (const auto &t : rep.trials)
        f << t.trial << ',' << t.seed << ',' << format_double(t.oracle_sum_rate) << ','
          << format_double(t.sum_rate_policy) << ',' << format_double(t.sum_rate_gap) << ','
          << (t.sum_rate_stable ? 1 : 0) << ',' << format_double(t.los_distance_policy) << ','
          << format_double(t.los_distance_gap) << ',' << (t.los_distance_stable ? 1 : 0) << '\n';
    detail::finish(f, path);
}

// ---------- plot ----------

struct PlotSeries
{
    std::string label;
    std::vector<std::pair<double, double>> points; // (sweep value, mean sum rate)
};

inline std::vector<PlotSeries> plot_series(const std::vector<SummaryRow> &rows)
{
    std::vector<PlotSeries> series;
    for (const auto &r : rows)
    {
        const std::string label(to_string(r.policy));
        auto it = std::find_if(series.begin(), series.end(), [&](const PlotSeries &s) { return s.label == label; });
        if (it == series.end())
        {
            series.push_back({label, {}});
            it = std::prev(series.end());
        }
        it->points.emplace_back(r.sweep_value, r.mean);
    }
    for (auto &s : series)
        std::sort(s.points.begin(), s.points.end());
    return series;
}

inline nlohmann::json plot_sidecar(const std::vector<SummaryRow> &rows)
{
    nlohmann::json j;
    j["x_label"] = rows.empty() ? "" : rows.front().sweep_name;
    j["y_label"] = "mean sum rate [bit/s/Hz]";
    j["series"] = nlohmann::json::array();
    for (const auto &s : plot_series(rows))
    {
        nlohmann::json pts = nlohmann::json::array();
        for (const auto &[x, y] : s.points)
            pts.push_back({x, y});
        j["series"].push_back({{"policy", s.label}, {"points", pts}});
    }
    return j;
}

inline std::filesystem::path sidecar_path(const std::filesystem::path &svg)
{
    auto p = svg;
    p.replace_extension(".points.json");
    return p;
}

// SVG line chart: one polyline per policy plus a legend; the plotted numbers also go to a JSON sidecar.
inline void emit_plot(const std::vector<SummaryRow> &rows, const std::filesystem::path &path)
{
    if (rows.empty())
        throw std::invalid_argument("Cannot plot an empty summary.");
    const auto series = plot_series(rows);

    double xmin = rows.front().sweep_value, xmax = xmin, ymin = 0.0, ymax = rows.front().mean;
    for (const auto &r : rows)
    {
        xmin = std::min(xmin, r.sweep_value);
        xmax = std::max(xmax, r.sweep_value);
        ymin = std::min(ymin, r.mean);
        ymax = std::max(ymax, r.mean);
    }
    if (xmax == xmin)
        xmax = xmin + 1.0;
    if (ymax == ymin)
        ymax = ymin + 1.0;
    ymax *= 1.05;

    constexpr double W = 640, H = 420, left = 70, right = 180, top = 30, bottom = 60;
    const double pw = W - left - right, ph = H - top - bottom;
    auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
    auto sy = [&](double y) { return top + ph - (y - ymin) / (ymax - ymin) * ph; };
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6g", v);
        return std::string(buf);
    };
    static constexpr const char *colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 "
       << W << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\"" << top + ph
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + ph
       << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i)
    {
        const double xv = xmin + (xmax - xmin) * i / 4.0, yv = ymin + (ymax - ymin) * i / 4.0;
        os << "<text x=\"" << num(sx(xv)) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">" << num(xv)
           << "</text>\n";
        os << "<text x=\"" << left - 8 << "\" y=\"" << num(sy(yv) + 4) << "\" text-anchor=\"end\">" << num(yv)
           << "</text>\n";
    }
    os << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">"
       << rows.front().sweep_name << "</text>\n";
    os << "<text x=\"18\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
       << top + ph / 2 << ")\">mean sum rate [bit/s/Hz]</text>\n";

    for (std::size_t i = 0; i < series.size(); ++i)
    {
        const char *color = colors[i % std::size(colors)];
        os << "<polyline class=\"series\" data-policy=\"" << series[i].label << "\" fill=\"none\" stroke=\"" << color
           << "\" stroke-width=\"2\" points=\"";
        for (std::size_t p = 0; p < series[i].points.size(); ++p)
            os << (p ? " " : "") << num(sx(series[i].points[p].first)) << ','
               << num(sy(series[i].points[p].second));
        os << "\"/>\n";
        for (const auto &[x, y] : series[i].points)
            os << "<circle cx=\"" << num(sx(x)) << "\" cy=\"" << num(sy(y)) << "\" r=\"3\" fill=\"" << color
               << "\"/>\n";
        const double ly = top + 10 + 20.0 * static_cast<double>(i);
        os << "<g class=\"legend\"><line x1=\"" << left + pw + 15 << "\" y1=\"" << ly << "\" x2=\""
           << left + pw + 40 << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/><text x=\""
           << left + pw + 46 << "\" y=\"" << ly + 4 << "\">" << series[i].label << "</text></g>\n";
    }
    os << "</svg>\n";

    auto f = detail::open_for_write(path);
    f << os.str();
    detail::finish(f, path);

    const auto side = sidecar_path(path);
    auto g = detail::open_for_write(side);
    g << plot_sidecar(rows).dump(2) << '\n';
    detail::finish(g, side);
}

} // namespace pinchsim
