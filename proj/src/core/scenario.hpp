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

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mmwsim {

enum class Scenario { UMi, UMa, RMa, InH };
enum class ChannelModel { NYUSIM, SCM3GPP };
enum class ConditionMode { FixedLOS, FixedNLOS, Probabilistic };
enum class LinkCondition { LOS, NLOS };
enum class O2iMode { Off, Low, High };

inline constexpr Scenario kAllScenarios[] = {Scenario::UMi, Scenario::UMa, Scenario::RMa, Scenario::InH};

std::string_view to_string(Scenario s);
std::string_view to_string(ChannelModel m);
std::string_view to_string(ConditionMode c);
std::string_view to_string(LinkCondition c);
std::string_view to_string(O2iMode m);

// Case-insensitive; accepts the spellings used in config files ("umi", "nyusim", "3gpp", "los", ...).
Scenario parse_scenario(std::string_view text);
ChannelModel parse_channel_model(std::string_view text);
ConditionMode parse_condition_mode(std::string_view text);
LinkCondition parse_link_condition(std::string_view text);
O2iMode parse_o2i_mode(std::string_view text);

/// Per-realization constants of one simulated link.
struct ScenarioParams {
    Scenario scenario = Scenario::UMi;
    ChannelModel channel_model = ChannelModel::NYUSIM;
    ConditionMode condition_mode = ConditionMode::FixedLOS;
    double frequency_ghz = 28.0;
    double bandwidth_hz = 100e6;
    double distance_2d_m = 100.0;
    double h_gnb_m = 10.0;
    double h_ue_m = 1.6;
    double tx_power_dbm = 30.0;

    double distance_3d_m() const;
    /// Throws InvalidParameter / InvalidDistance when an invariant is violated.
    void validate() const;
};

/// A model parameter known at the two measurement anchors (28 and 140 GHz).
struct AnchoredValue {
    double at_28ghz = 0.0;
    double at_140ghz = 0.0;

    double at(double frequency_ghz) const;
};

struct LargeScaleParamSet {
    AnchoredValue ple_los;
    AnchoredValue ple_nlos;
    AnchoredValue sigma_los_db;
    AnchoredValue sigma_nlos_db;

    double ple(LinkCondition c, double frequency_ghz) const;
    double sigma_db(LinkCondition c, double frequency_ghz) const;
    void validate() const;
};

/// Piecewise-linear frequency interpolation between the 28 and 140 GHz anchors,
/// clamped to the anchor values outside that band.
double interpolate_param(double p28, double p140, double frequency_ghz);

struct ScenarioDefaults {
    ScenarioParams params;
    LargeScaleParamSet large_scale;
};

ScenarioDefaults scenario_defaults(Scenario scenario, ChannelModel model);
ScenarioDefaults scenario_defaults(std::string_view scenario, ChannelModel model);

/// Flat `key = value` configuration text. `#` starts a comment; blank lines are ignored.
class ConfigFile {
public:
    static ConfigFile parse(std::string_view text);
    static ConfigFile load(const std::string& path);

    bool has(const std::string& key) const;
    std::optional<std::string> get(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    /// Comma-separated list, trimmed; empty when the key is absent.
    std::vector<std::string> get_list(const std::string& key) const;

    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

} // namespace mmwsim
