// SPDX-License-Identifier: Apache-2.0
//
// mmwsim - drop-based mmWave channel and end-to-end link simulator
// Copyright (C) 2026 mmwsim authors
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

#include "core/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "core/error.hpp"

namespace mmwsim {

namespace {

constexpr double kLowAnchorGhz = 28.0;
constexpr double kHighAnchorGhz = 140.0;

std::string lower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::string trim(std::string_view s)
{
    auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

// RMa uses the height-corrected CI form; the correction folds into an effective PLE.
double rma_ple(double base, double b, double h_gnb_m)
{
    return base * (1.0 - b * (h_gnb_m - 35.0) / 35.0);
}

} // namespace

std::string_view to_string(Scenario s)
{
    switch (s) {
    case Scenario::UMi: return "UMi";
    case Scenario::UMa: return "UMa";
    case Scenario::RMa: return "RMa";
    case Scenario::InH: return "InH";
    }
    fail(ErrorCode::UnsupportedScenario, "unknown scenario value");
}

std::string_view to_string(ChannelModel m)
{
    return m == ChannelModel::NYUSIM ? "NYUSIM" : "3GPP";
}

std::string_view to_string(ConditionMode c)
{
    switch (c) {
    case ConditionMode::FixedLOS: return "los";
    case ConditionMode::FixedNLOS: return "nlos";
    case ConditionMode::Probabilistic: return "prob";
    }
    return "?";
}

std::string_view to_string(LinkCondition c)
{
    return c == LinkCondition::LOS ? "LOS" : "NLOS";
}

std::string_view to_string(O2iMode m)
{
    switch (m) {
    case O2iMode::Off: return "off";
    case O2iMode::Low: return "low";
    case O2iMode::High: return "high";
    }
    return "?";
}

Scenario parse_scenario(std::string_view text)
{
    const auto t = lower(trim(text));
    if (t == "umi" || t == "umi-streetcanyon") return Scenario::UMi;
    if (t == "uma") return Scenario::UMa;
    if (t == "rma") return Scenario::RMa;
    if (t == "inh" || t == "inh-office") return Scenario::InH;
    fail(ErrorCode::UnsupportedScenario, "unsupported scenario '" + std::string(text) + "'");
}

ChannelModel parse_channel_model(std::string_view text)
{
    const auto t = lower(trim(text));
    if (t == "nyusim" || t == "nyu") return ChannelModel::NYUSIM;
    if (t == "3gpp" || t == "scm3gpp" || t == "scm") return ChannelModel::SCM3GPP;
    fail(ErrorCode::InvalidParameter, "unknown channel model '" + std::string(text) + "'");
}

ConditionMode parse_condition_mode(std::string_view text)
{
    const auto t = lower(trim(text));
    if (t == "los") return ConditionMode::FixedLOS;
    if (t == "nlos") return ConditionMode::FixedNLOS;
    if (t == "prob" || t == "probabilistic") return ConditionMode::Probabilistic;
    fail(ErrorCode::InvalidParameter, "unknown condition '" + std::string(text) + "'");
}

LinkCondition parse_link_condition(std::string_view text)
{
    const auto t = lower(trim(text));
    if (t == "los") return LinkCondition::LOS;
    if (t == "nlos") return LinkCondition::NLOS;
    fail(ErrorCode::InvalidParameter, "unknown link condition '" + std::string(text) + "'");
}

O2iMode parse_o2i_mode(std::string_view text)
{
    const auto t = lower(trim(text));
    if (t == "off") return O2iMode::Off;
    if (t == "low") return O2iMode::Low;
    if (t == "high") return O2iMode::High;
    fail(ErrorCode::InvalidParameter, "unknown o2i mode '" + std::string(text) + "'");
}

double ScenarioParams::distance_3d_m() const
{
    const double dh = h_gnb_m - h_ue_m;
    return std::sqrt(distance_2d_m * distance_2d_m + dh * dh);
}

void ScenarioParams::validate() const
{
    if (!std::isfinite(frequency_ghz) || frequency_ghz < 0.5 || frequency_ghz > 150.0) {
        fail(ErrorCode::InvalidParameter, "frequency must lie in [0.5, 150] GHz");
    }
    if (!std::isfinite(bandwidth_hz) || bandwidth_hz <= 0.0) {
        fail(ErrorCode::InvalidParameter, "bandwidth must be positive");
    }
    if (!std::isfinite(distance_2d_m) || distance_2d_m < 1.0) {
        fail(ErrorCode::InvalidDistance, "2D distance must be at least 1 m");
    }
    if (!std::isfinite(h_gnb_m) || !std::isfinite(h_ue_m) || h_gnb_m <= 0.0 || h_ue_m <= 0.0) {
        fail(ErrorCode::InvalidParameter, "antenna heights must be positive");
    }
    if (!std::isfinite(tx_power_dbm)) {
        fail(ErrorCode::InvalidParameter, "transmit power must be finite");
    }
}

double AnchoredValue::at(double frequency_ghz) const
{
    return interpolate_param(at_28ghz, at_140ghz, frequency_ghz);
}

double LargeScaleParamSet::ple(LinkCondition c, double frequency_ghz) const
{
    return (c == LinkCondition::LOS ? ple_los : ple_nlos).at(frequency_ghz);
}

double LargeScaleParamSet::sigma_db(LinkCondition c, double frequency_ghz) const
{
    return (c == LinkCondition::LOS ? sigma_los_db : sigma_nlos_db).at(frequency_ghz);
}

void LargeScaleParamSet::validate() const
{
    for (const auto* v : {&ple_los, &ple_nlos}) {
        if (!(v->at_28ghz >= 1.0) || !(v->at_140ghz >= 1.0)) {
            fail(ErrorCode::InvalidParameter, "path loss exponent must be >= 1");
        }
    }
    for (const auto* v : {&sigma_los_db, &sigma_nlos_db}) {
        if (!(v->at_28ghz >= 0.0) || !(v->at_140ghz >= 0.0)) {
            fail(ErrorCode::InvalidParameter, "shadow fading std must be >= 0");
        }
    }
}

double interpolate_param(double p28, double p140, double frequency_ghz)
{
    if (!std::isfinite(p28) || !std::isfinite(p140) || !std::isfinite(frequency_ghz)) {
        fail(ErrorCode::InvalidParameter, "interpolate_param: non-finite input");
    }
    if (frequency_ghz <= 0.0) {
        fail(ErrorCode::InvalidParameter, "interpolate_param: frequency must be positive");
    }
    if (frequency_ghz <= kLowAnchorGhz) {
        return p28;
    }
    if (frequency_ghz >= kHighAnchorGhz) {
        return p140;
    }
    return (p140 - p28) / (kHighAnchorGhz - kLowAnchorGhz) * frequency_ghz + (5.0 * p28 - p140) / 4.0;
}

ScenarioDefaults scenario_defaults(Scenario scenario, ChannelModel model)
{
    ScenarioDefaults d;
    d.params.scenario = scenario;
    d.params.channel_model = model;
    auto& ls = d.large_scale;
    switch (scenario) {
    case Scenario::UMi:
        d.params.h_gnb_m = 10.0;
        ls.ple_los = {2.0, 2.0};
        ls.ple_nlos = {3.2, 3.2};
        ls.sigma_los_db = {4.0, 4.0};
        ls.sigma_nlos_db = {7.0, 7.0};
        break;
    case Scenario::UMa:
        d.params.h_gnb_m = 25.0;
        ls.ple_los = {2.0, 2.0};
        ls.ple_nlos = {2.9, 2.9};
        ls.sigma_los_db = {4.0, 4.0};
        ls.sigma_nlos_db = {7.0, 7.0};
        break;
    case Scenario::RMa: {
        d.params.h_gnb_m = 25.0;
        const double los = rma_ple(2.31, 0.03, d.params.h_gnb_m);
        const double nlos = rma_ple(3.07, 0.049, d.params.h_gnb_m);
        ls.ple_los = {los, los};
        ls.ple_nlos = {nlos, nlos};
        ls.sigma_los_db = {1.7, 1.7};
        ls.sigma_nlos_db = {6.7, 6.7};
        break;
    }
    case Scenario::InH:
        d.params.h_gnb_m = 3.0;
        ls.ple_los = {1.2, 1.8};
        ls.ple_nlos = {2.7, 2.7};
        ls.sigma_los_db = {3.0, 2.9};
        ls.sigma_nlos_db = {9.8, 6.6};
        break;
    default:
        fail(ErrorCode::UnsupportedScenario, "unsupported scenario");
    }
    return d;
}

ScenarioDefaults scenario_defaults(std::string_view scenario, ChannelModel model)
{
    return scenario_defaults(parse_scenario(scenario), model);
}

ConfigFile ConfigFile::parse(std::string_view text)
{
    ConfigFile cfg;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        const auto stripped = trim(line);
        if (stripped.empty()) {
            continue;
        }
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            fail(ErrorCode::InvalidInput, "config line " + std::to_string(lineno) + ": expected key = value");
        }
        auto key = lower(trim(std::string_view(stripped).substr(0, eq)));
        auto value = trim(std::string_view(stripped).substr(eq + 1));
        if (key.empty()) {
            fail(ErrorCode::InvalidInput, "config line " + std::to_string(lineno) + ": empty key");
        }
        cfg.values_[key] = value;
    }
    return cfg;
}

ConfigFile ConfigFile::load(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        fail(ErrorCode::Io, "cannot open config file '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

bool ConfigFile::has(const std::string& key) const
{
    return values_.count(key) != 0;
}

std::optional<std::string> ConfigFile::get(const std::string& key) const
{
    auto it = values_.find(key);
    if (it == values_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::string ConfigFile::get_string(const std::string& key, const std::string& fallback) const
{
    return get(key).value_or(fallback);
}

double ConfigFile::get_double(const std::string& key, double fallback) const
{
    auto v = get(key);
    if (!v) {
        return fallback;
    }
    try {
        std::size_t used = 0;
        double out = std::stod(*v, &used);
        if (used != v->size()) {
            throw std::invalid_argument(*v);
        }
        return out;
    } catch (const std::exception&) {
        fail(ErrorCode::InvalidInput, "config key '" + key + "': not a number: '" + *v + "'");
    }
}

std::int64_t ConfigFile::get_int(const std::string& key, std::int64_t fallback) const
{
    auto v = get(key);
    if (!v) {
        return fallback;
    }
    std::int64_t out = 0;
    auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
    if (ec != std::errc() || ptr != v->data() + v->size()) {
        fail(ErrorCode::InvalidInput, "config key '" + key + "': not an integer: '" + *v + "'");
    }
    return out;
}

bool ConfigFile::get_bool(const std::string& key, bool fallback) const
{
    auto v = get(key);
    if (!v) {
        return fallback;
    }
    const auto t = lower(*v);
    if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
    if (t == "0" || t == "false" || t == "no" || t == "off") return false;
    fail(ErrorCode::InvalidInput, "config key '" + key + "': not a boolean: '" + *v + "'");
}

std::vector<std::string> ConfigFile::get_list(const std::string& key) const
{
    std::vector<std::string> out;
    auto v = get(key);
    if (!v) {
        return out;
    }
    std::stringstream ss(*v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto t = trim(item);
        if (!t.empty()) {
            out.push_back(t);
        }
    }
    return out;
}

} // namespace mmwsim
