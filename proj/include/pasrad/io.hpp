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

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "pasrad/montecarlo.hpp"
#include "pasrad/scenario.hpp"

namespace pasrad
{

// Config files use kilometres for positions; an absent snr_avg_db (or null)
// means no target.
Scenario scenario_from_json(const nlohmann::json &j);
nlohmann::ordered_json scenario_to_json(const Scenario &scenario);
Scenario load_scenario(const std::string &path);

ThresholdTable thresholds_from_json(const nlohmann::json &j);
nlohmann::ordered_json thresholds_to_json(const ThresholdTable &table);
ThresholdTable load_thresholds(const std::string &path);

// Header: sweep_db,detector,estimate,ci_low,ci_high,n_trials
std::string curves_to_csv(const std::vector<CurvePoint> &points);

// Line plot with one series per detector.
std::string curves_to_svg(const std::vector<CurvePoint> &points, const std::string &x_label,
                          const std::string &y_label);

// Shortest decimal form that round-trips.
std::string format_double(double v);

// "start:stop:step" in dB, endpoints inclusive.
std::vector<double> parse_sweep(const std::string &text);

void write_text_file(const std::string &path, const std::string &content);

} // namespace pasrad
