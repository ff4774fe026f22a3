// SPDX-License-Identifier: Apache-2.0
//
// pasrad - two-channel passive radar detection simulator
// Copyright (C) 2026 The pasrad authors
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

#include "pasrad/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace pasrad
{

namespace
{

const std::set<std::string> scenario_keys = {
    "tx_positions_km", "rx_positions_km",  "target_position_km", "target_velocity_mps",
    "scatterer_position_km", "carriers_hz", "sample_rate_hz",  "n_samples",
    "noise_variances_w", "dnr_avg_db",      "snr_avg_db",      "mnr_avg_db"};

Vec2 point_from_json(const nlohmann::json &j, double scale)
{
    if (!j.is_array() || j.size() != 2)
        throw ConfigError("points must be [x, y] pairs");
    return {j.at(0).get<double>() * scale, j.at(1).get<double>() * scale};
}

nlohmann::ordered_json point_to_json(const Vec2 &p, double scale)
{
    return nlohmann::ordered_json::array({p.x / scale, p.y / scale});
}

std::vector<Vec2> points_from_json(const nlohmann::json &j, double scale)
{
    if (!j.is_array())
        throw ConfigError("expected a list of points");
    std::vector<Vec2> out;
    for (const auto &p : j)
        out.push_back(point_from_json(p, scale));
    return out;
}

std::string read_text_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string xml_escape(const std::string &text)
{
    std::string out;
    for (char c : text)
    {
        switch (c)
        {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '"':
            out += "&quot;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

nlohmann::json parse_json_file(const std::string &path)
{
    try
    {
        return nlohmann::json::parse(read_text_file(path));
    }
    catch (const nlohmann::json::exception &e)
    {
        throw ConfigError(path + ": " + e.what());
    }
}

} // namespace

Scenario scenario_from_json(const nlohmann::json &j)
{
    if (!j.is_object())
        throw ConfigError("scenario config must be a JSON object");
    for (const auto &item : j.items())
        if (!scenario_keys.count(item.key()))
            throw ConfigError("unknown config key: " + item.key());
    Scenario s;
    try
    {
        s.tx_positions = points_from_json(j.at("tx_positions_km"), 1e3);
        s.rx_positions = points_from_json(j.at("rx_positions_km"), 1e3);
        s.target_position = point_from_json(j.at("target_position_km"), 1e3);
        s.target_velocity = point_from_json(j.at("target_velocity_mps"), 1.0);
        if (j.contains("scatterer_position_km") && !j.at("scatterer_position_km").is_null())
            s.scatterer_position = point_from_json(j.at("scatterer_position_km"), 1e3);
        s.carriers = j.at("carriers_hz").get<std::vector<double>>();
        s.sample_rate = j.at("sample_rate_hz").get<double>();
        const auto &n = j.at("n_samples");
        if (!n.is_number_integer() || n.get<long long>() <= 0)
            throw ConfigError("n_samples must be a positive integer");
        s.n_samples = n.get<std::size_t>();
        const auto rows = j.at("noise_variances_w").get<std::vector<std::vector<double>>>();
        const std::size_t cols = rows.empty() ? 0 : rows[0].size();
        s.noise_variances.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
        for (std::size_t r = 0; r < rows.size(); ++r)
        {
            if (rows[r].size() != cols)
                throw ConfigError("noise_variances_w rows must have equal length");
            for (std::size_t c = 0; c < cols; ++c)
                s.noise_variances(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
        }
        s.dnr_avg_db = j.at("dnr_avg_db").get<double>();
        if (j.contains("snr_avg_db") && !j.at("snr_avg_db").is_null())
            s.snr_avg_db = j.at("snr_avg_db").get<double>();
        if (j.contains("mnr_avg_db") && !j.at("mnr_avg_db").is_null())
            s.mnr_avg_db = j.at("mnr_avg_db").get<double>();
    }
    catch (const nlohmann::json::exception &e)
    {
        throw ConfigError(std::string("invalid scenario config: ") + e.what());
    }
    validate(s);
    return s;
}

nlohmann::ordered_json scenario_to_json(const Scenario &s)
{
    nlohmann::ordered_json j;
    j["tx_positions_km"] = nlohmann::ordered_json::array();
    for (const auto &p : s.tx_positions)
        j["tx_positions_km"].push_back(point_to_json(p, 1e3));
    j["rx_positions_km"] = nlohmann::ordered_json::array();
    for (const auto &p : s.rx_positions)
        j["rx_positions_km"].push_back(point_to_json(p, 1e3));
    j["target_position_km"] = point_to_json(s.target_position, 1e3);
    j["target_velocity_mps"] = point_to_json(s.target_velocity, 1.0);
    if (s.scatterer_position)
        j["scatterer_position_km"] = point_to_json(*s.scatterer_position, 1e3);
    j["carriers_hz"] = s.carriers;
    j["sample_rate_hz"] = s.sample_rate;
    j["n_samples"] = s.n_samples;
    j["noise_variances_w"] = nlohmann::ordered_json::array();
    for (Eigen::Index r = 0; r < s.noise_variances.rows(); ++r)
    {
        auto row = nlohmann::ordered_json::array();
        for (Eigen::Index c = 0; c < s.noise_variances.cols(); ++c)
            row.push_back(s.noise_variances(r, c));
        j["noise_variances_w"].push_back(row);
    }
    j["dnr_avg_db"] = s.dnr_avg_db;
    j["snr_avg_db"] = std::isinf(s.snr_avg_db) ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(s.snr_avg_db);
    if (s.mnr_avg_db)
        j["mnr_avg_db"] = *s.mnr_avg_db;
    return j;
}

Scenario load_scenario(const std::string &path)
{
    return scenario_from_json(parse_json_file(path));
}

ThresholdTable thresholds_from_json(const nlohmann::json &j)
{
    ThresholdTable t;
    try
    {
        t.pfa = j.at("pfa").get<double>();
        t.dnr_eta_db = j.at("dnr_eta_db").get<double>();
        t.n_trials = j.at("n_trials").get<std::uint64_t>();
        t.seed = j.at("seed").get<std::uint64_t>();
        for (const auto &item : j.at("thresholds").items())
        {
            const auto kind = parse_detector(item.key());
            if (!kind)
                throw ConfigError("unknown detector in threshold table: " + item.key());
            const double v = item.value().get<double>();
            if (!std::isfinite(v))
                throw ConfigError("non-finite threshold for " + item.key());
            t.thresholds[*kind] = v;
        }
    }
    catch (const nlohmann::json::exception &e)
    {
        throw ConfigError(std::string("invalid threshold table: ") + e.what());
    }
    if (!(t.pfa > 0.0 && t.pfa < 1.0))
        throw ConfigError("threshold table pfa must lie in (0, 1)");
    if (!std::isfinite(t.dnr_eta_db))
        throw ConfigError("threshold table dnr_eta_db must be finite");
    if (t.thresholds.empty())
        throw ConfigError("threshold table has no detectors");
    return t;
}

nlohmann::ordered_json thresholds_to_json(const ThresholdTable &t)
{
    nlohmann::ordered_json j;
    j["pfa"] = t.pfa;
    j["dnr_eta_db"] = t.dnr_eta_db;
    j["n_trials"] = t.n_trials;
    j["seed"] = t.seed;
    nlohmann::ordered_json values = nlohmann::ordered_json::object();
    for (DetectorKind kind : t.detectors())
        values[std::string(detector_name(kind))] = t.thresholds.at(kind);
    j["thresholds"] = values;
    return j;
}

ThresholdTable load_thresholds(const std::string &path)
{
    return thresholds_from_json(parse_json_file(path));
}

std::string format_double(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string curves_to_csv(const std::vector<CurvePoint> &points)
{
    std::string out = "sweep_db,detector,estimate,ci_low,ci_high,n_trials\r\n";
    for (const auto &p : points)
        for (const auto &e : p.estimates)
        {
            out += format_double(p.sweep_value_db);
            out += ',';
            out += detector_name(e.detector);
            out += ',' + format_double(e.estimate) + ',' + format_double(e.ci_low) + ',' + format_double(e.ci_high) +
                   ',' + std::to_string(p.n_trials) + "\r\n";
        }
    return out;
}

std::vector<double> parse_sweep(const std::string &text)
{
    std::vector<double> parts;
    std::size_t begin = 0;
    for (;;)
    {
        const std::size_t end = text.find(':', begin);
        const std::string token = text.substr(begin, end == std::string::npos ? std::string::npos : end - begin);
        double v = 0.0;
        const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
        if (token.empty() || res.ec != std::errc() || res.ptr != token.data() + token.size() || !std::isfinite(v))
            throw ConfigError("invalid sweep specification: " + text);
        parts.push_back(v);
        if (end == std::string::npos)
            break;
        begin = end + 1;
    }
    if (parts.size() == 1)
        return parts;
    if (parts.size() != 3)
        throw ConfigError("sweep must be start:stop:step");
    const double start = parts[0], stop = parts[1], step = parts[2];
    if (step == 0.0 || (stop - start) / step < 0.0)
        throw ConfigError("sweep step must be non-zero and point from start to stop");
    const double span = (stop - start) / step;
    if (span > 1e5)
        throw ConfigError("sweep has too many points");
    const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
    std::vector<double> out;
    for (std::size_t i = 0; i < count; ++i)
        out.push_back(start + static_cast<double>(i) * step);
    return out;
}

std::string curves_to_svg(const std::vector<CurvePoint> &points, const std::string &x_label,
                          const std::string &y_label)
{
    static const char *palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};
    const double width = 720, height = 440, left = 70, right = 150, top = 20, bottom = 50;
    const double plot_w = width - left - right, plot_h = height - top - bottom;

    double x_min = 0.0, x_max = 1.0, y_max = 0.0;
    if (!points.empty())
    {
        x_min = x_max = points.front().sweep_value_db;
        for (const auto &p : points)
        {
            x_min = std::min(x_min, p.sweep_value_db);
            x_max = std::max(x_max, p.sweep_value_db);
            for (const auto &e : p.estimates)
                y_max = std::max(y_max, e.ci_high);
        }
    }
    if (x_max == x_min)
        x_max = x_min + 1.0;
    y_max = y_max > 0.0 ? y_max * 1.05 : 1.0;
    const auto px = [&](double x) { return left + (x - x_min) / (x_max - x_min) * plot_w; };
    const auto py = [&](double y) { return top + plot_h - y / y_max * plot_h; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\"" << plot_h
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i)
    {
        const double xv = x_min + (x_max - x_min) * i / 4.0, yv = y_max * i / 4.0;
        svg << "<text x=\"" << px(xv) << "\" y=\"" << top + plot_h + 18 << "\" text-anchor=\"middle\">" << xv
            << "</text>\n";
        svg << "<text x=\"" << left - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">" << yv << "</text>\n";
    }
    svg << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 10 << "\" text-anchor=\"middle\">" << xml_escape(x_label)
        << "</text>\n";
    svg << "<text transform=\"translate(16," << top + plot_h / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
        << xml_escape(y_label) << "</text>\n";

    if (!points.empty())
    {
        std::size_t series = 0;
        for (const auto &first : points.front().estimates)
        {
            const char *colour = palette[series % 8];
            svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
            for (const auto &p : points)
            {
                const DetectorEstimate &e = p.at(first.detector);
                svg << px(p.sweep_value_db) << ',' << py(e.estimate) << ' ';
            }
            svg << "\"/>\n";
            const double ly = top + 14 + 18.0 * static_cast<double>(series);
            svg << "<line x1=\"" << left + plot_w + 12 << "\" y1=\"" << ly - 4 << "\" x2=\"" << left + plot_w + 36
                << "\" y2=\"" << ly - 4 << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
            svg << "<text x=\"" << left + plot_w + 42 << "\" y=\"" << ly << "\">" << detector_name(first.detector)
                << "</text>\n";
            ++series;
        }
    }
    svg << "</svg>\n";
    return svg.str();
}

void write_text_file(const std::string &path, const std::string &content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot open " + path + " for writing");
    out << content;
    if (!out)
        throw Error("failed writing " + path);
}

} // namespace pasrad
