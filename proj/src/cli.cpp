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

#include "pasrad/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pasrad/io.hpp"
#include "pasrad/montecarlo.hpp"
#include "pasrad/selftest.hpp"

namespace pasrad
{

namespace
{

struct Settings
{
    std::string command;
    std::vector<std::string> arguments;
    std::string config_path;
    std::string out_dir;
    std::string thresholds_path;
    std::string sweep;
    std::string detectors;
    std::uint64_t seed = 1;
    std::uint64_t trials = 0;
    double pfa = 1e-2;
    std::optional<double> dnr_db;
    unsigned threads = 0;
    bool svg = false;
    std::size_t cases = 200;
    double inject_fault = 0.0;
    bool multipath = false;
};

std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void apply_seed_override(Settings &s)
{
    if (const char *env = std::getenv("PASRAD_SEED"))
    {
        try
        {
            std::size_t used = 0;
            s.seed = std::stoull(env, &used);
            if (used != std::string(env).size())
                throw std::invalid_argument(env);
        }
        catch (const std::exception &)
        {
            throw ConfigError(std::string("PASRAD_SEED is not an unsigned integer: ") + env);
        }
    }
}

Scenario scenario_for(const Settings &s)
{
    return s.config_path.empty() ? default_scenario() : load_scenario(s.config_path);
}

std::vector<DetectorKind> parse_detector_list(const std::string &list)
{
    if (list.empty())
        return {all_detectors.begin(), all_detectors.end()};
    std::vector<DetectorKind> out;
    std::size_t begin = 0;
    for (;;)
    {
        const std::size_t end = list.find(',', begin);
        const std::string name = list.substr(begin, end == std::string::npos ? std::string::npos : end - begin);
        const auto kind = parse_detector(name);
        if (!kind)
            throw ConfigError("unknown detector: " + name);
        if (std::find(out.begin(), out.end(), *kind) == out.end())
            out.push_back(*kind);
        if (end == std::string::npos)
            break;
        begin = end + 1;
    }
    std::sort(out.begin(), out.end());
    return out;
}

void write_manifest(const Settings &s, const std::vector<DetectorKind> &detectors, nlohmann::ordered_json extra)
{
    nlohmann::ordered_json m;
    m["command"] = s.command;
    m["arguments"] = s.arguments;
    m["config_path"] = s.config_path.empty() ? std::string("<built-in default>") : s.config_path;
    m["seed"] = s.seed;
    m["n_trials"] = s.trials;
    m["detector_list"] = nlohmann::ordered_json::array();
    for (DetectorKind kind : detectors)
        m["detector_list"].push_back(std::string(detector_name(kind)));
    m["output_dir"] = s.out_dir;
    m["timestamp"] = utc_timestamp();
    for (auto &item : extra.items())
        m[item.key()] = item.value();
    write_text_file((std::filesystem::path(s.out_dir) / "manifest.json").string(), m.dump(2) + "\n");
}

int cmd_calibrate(const Settings &s, std::ostream &out)
{
    const Scenario scenario = scenario_for(s);
    const auto detectors = parse_detector_list(s.detectors);
    if (static_cast<double>(s.trials) * s.pfa < 50.0)
        throw GuardViolation("n_trials * pfa must be at least 50");
    std::filesystem::create_directories(s.out_dir);
    const ThresholdTable table = calibrate(scenario, detectors, s.pfa, s.trials, s.seed, {s.threads});
    write_text_file((std::filesystem::path(s.out_dir) / "thresholds.json").string(),
                    thresholds_to_json(table).dump(2) + "\n");
    write_manifest(s, detectors, {{"pfa", s.pfa}, {"dnr_eta_db", scenario.dnr_avg_db}});
    for (const auto &[kind, eta] : table.thresholds)
        out << std::setw(8) << std::left << detector_name(kind) << format_double(eta) << "\n";
    return exit_ok;
}

int cmd_curve(const Settings &s, std::ostream &out)
{
    Scenario scenario = scenario_for(s);
    if (s.command == "mnr-curve" && !scenario.scatterer_position)
        throw ConfigError("mnr-curve needs scatterer_position_km and mnr_avg_db in the config");
    if (s.dnr_db)
        scenario.dnr_avg_db = *s.dnr_db;
    const ThresholdTable thresholds = load_thresholds(s.thresholds_path);
    const std::vector<double> sweep = parse_sweep(s.sweep);
    if (s.trials == 0)
        throw ConfigError("--trials must be positive");
    std::filesystem::create_directories(s.out_dir);

    const EngineOptions options{s.threads};
    std::vector<CurvePoint> points;
    std::string stem, x_label, y_label;
    if (s.command == "fap-curve")
    {
        points = fap_curve(scenario, thresholds, sweep, s.trials, s.seed, options);
        stem = "fap_curve", x_label = "DNR (dB)", y_label = "false-alarm probability";
    }
    else if (s.command == "pd-curve")
    {
        points = pd_curve(scenario, thresholds, sweep, s.trials, s.seed, options);
        stem = "pd_curve", x_label = "SNR (dB)", y_label = "detection probability";
    }
    else
    {
        points = mnr_curve(scenario, thresholds, sweep, s.trials, s.seed, options);
        stem = "mnr_curve", x_label = "MNR (dB)", y_label = "false-alarm probability";
    }

    const std::filesystem::path dir(s.out_dir);
    write_text_file((dir / (stem + ".csv")).string(), curves_to_csv(points));
    if (s.svg)
        write_text_file((dir / (stem + ".svg")).string(), curves_to_svg(points, x_label, y_label));
    nlohmann::ordered_json extra = {{"thresholds_path", s.thresholds_path},
                                    {"sweep", s.sweep},
                                    {"dnr_db", scenario.dnr_avg_db}};
    write_manifest(s, thresholds.detectors(), extra);
    out << "wrote " << (dir / (stem + ".csv")).string() << " (" << points.size() << " sweep values)\n";
    return exit_ok;
}

int cmd_selftest(const Settings &s, std::ostream &out)
{
    SelftestOptions options;
    options.cases = s.cases;
    options.seed = s.seed;
    options.durbin_perturbation = s.inject_fault;
    bool ok = true;
    for (const auto &check : run_selftest(options))
    {
        out << (check.passed ? "PASS  " : "FAIL  ") << std::setw(22) << std::left << check.name
            << " cases=" << check.cases << " worst=" << format_double(check.worst)
            << " tol=" << format_double(check.tolerance) << "\n";
        ok = ok && check.passed;
    }
    return ok ? exit_ok : exit_failure;
}

int cmd_emit_default_config(const Settings &s, std::ostream &out)
{
    Scenario scenario = default_scenario();
    if (s.multipath)
    {
        scenario.scatterer_position = Vec2{10e3, 15e3};
        scenario.mnr_avg_db = -10.0;
    }
    const std::string text = scenario_to_json(scenario).dump(2) + "\n";
    if (s.out_dir.empty())
        out << text;
    else
        write_text_file(s.out_dir, text);
    return exit_ok;
}

} // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    Settings s;
    for (int i = 1; i < argc; ++i)
        s.arguments.emplace_back(argv[i]);

    CLI::App app{"Two-channel passive radar detection simulator"};
    app.require_subcommand(1);

    auto *calibrate_cmd = app.add_subcommand("calibrate", "Estimate fixed-level detection thresholds");
    auto *fap_cmd = app.add_subcommand("fap-curve", "False-alarm probability versus DNR");
    auto *pd_cmd = app.add_subcommand("pd-curve", "Detection probability versus SNR");
    auto *mnr_cmd = app.add_subcommand("mnr-curve", "False-alarm probability versus multipath MNR");
    auto *selftest_cmd = app.add_subcommand("selftest", "Check the analytic identities");
    auto *emit_cmd = app.add_subcommand("emit-default-config", "Print the default scenario config");

    calibrate_cmd->add_option("--config", s.config_path, "Scenario JSON (default: built-in)");
    calibrate_cmd->add_option("--pfa", s.pfa, "Target false-alarm probability")->capture_default_str();
    calibrate_cmd->add_option("--trials", s.trials, "Number of H0 trials")->default_val(200000);
    calibrate_cmd->add_option("--seed", s.seed, "Master seed")->capture_default_str();
    calibrate_cmd->add_option("--out", s.out_dir, "Output directory")->required();
    calibrate_cmd->add_option("--detectors", s.detectors, "Comma-separated subset, e.g. LRT,RD");
    calibrate_cmd->add_option("--threads", s.threads, "Worker threads (0: all cores)");

    for (auto *cmd : {fap_cmd, pd_cmd, mnr_cmd})
    {
        cmd->add_option("--config", s.config_path, "Scenario JSON (default: built-in)");
        cmd->add_option("--thresholds", s.thresholds_path, "thresholds.json from calibrate")->required();
        cmd->add_option("--sweep", s.sweep, "start:stop:step in dB, inclusive (use --sweep=-40:0:5)")->required();
        cmd->add_option("--trials", s.trials, "Trials per sweep value")->default_val(10000);
        cmd->add_option("--seed", s.seed, "Master seed")->capture_default_str();
        cmd->add_option("--out", s.out_dir, "Output directory")->required();
        cmd->add_flag("--svg", s.svg, "Also write an SVG plot");
        cmd->add_option("--threads", s.threads, "Worker threads (0: all cores)");
    }
    pd_cmd->add_option("--dnr", s.dnr_db, "Override the config DNR (dB)");

    selftest_cmd->add_option("--seed", s.seed, "Master seed")->capture_default_str();
    selftest_cmd->add_option("--cases", s.cases, "Random cases per identity")->capture_default_str();
    selftest_cmd->add_option("--inject-fault", s.inject_fault, "Relative error added to one path")->group("");

    emit_cmd->add_option("--out", s.out_dir, "Output file (default: stdout)");
    emit_cmd->add_flag("--multipath", s.multipath, "Include a stationary scatterer");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_config;
    }

    try
    {
        apply_seed_override(s);
        if (calibrate_cmd->parsed())
        {
            s.command = "calibrate";
            return cmd_calibrate(s, out);
        }
        if (selftest_cmd->parsed())
        {
            s.command = "selftest";
            return cmd_selftest(s, out);
        }
        if (emit_cmd->parsed())
        {
            s.command = "emit-default-config";
            return cmd_emit_default_config(s, out);
        }
        s.command = fap_cmd->parsed() ? "fap-curve" : pd_cmd->parsed() ? "pd-curve" : "mnr-curve";
        return cmd_curve(s, out);
    }
    catch (const ConfigError &e)
    {
        err << "error: " << e.what() << "\n";
        return exit_config;
    }
    catch (const GuardViolation &e)
    {
        err << "error: " << e.what() << "\n";
        return exit_guard;
    }
    catch (const std::exception &e)
    {
        err << "error: " << e.what() << "\n";
        return exit_failure;
    }
}

} // namespace pasrad
