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

#include "core/random.hpp"
#include "core/scenario.hpp"

namespace mmwsim {

inline constexpr double kSpeedOfLight = 299792458.0;

enum class LosModelKind { NyuSquaredUMi, NyuSquaredUMa, FiveGcmInH, Tr38901 };

/// LOS probability as a function of 2D distance. For the Tr38901 kind the
/// scenario selects the row of the standard's LOS probability table.
struct LosProbabilityModel {
    LosModelKind kind = LosModelKind::NyuSquaredUMi;
    double d1_m = 22.0;
    double d2_m = 100.0;
    double h_ue_m = 1.6;
    Scenario scenario = Scenario::UMi;

    static LosProbabilityModel nyu_umi();
    static LosProbabilityModel nyu_uma(double h_ue_m);
    static LosProbabilityModel five_gcm_inh();
    static LosProbabilityModel tr38901(Scenario scenario, double h_ue_m);
};

/// LOS probability model used by each channel-model family for a scenario.
LosProbabilityModel los_model_for(Scenario scenario, ChannelModel model, double h_ue_m);

/// UMa height/distance correction C(d2D, hUT); zero for UEs at or below 13 m.
double uma_correction(double d2d_m, double h_ue_m);

double los_probability(const LosProbabilityModel& model, double d2d_m);

/// Free-space path loss at 1 m, in dB.
double fspl_1m_db(double frequency_ghz);

struct PathLossBreakdown {
    double fspl_1m_db = 0.0;
    double distance_db = 0.0;
    double at_db = 0.0;
    double o2i_db = 0.0;
    double fl_db = 0.0;
    double shadow_db = 0.0;
    double total_db = 0.0;

    double component_sum() const { return fspl_1m_db + distance_db + at_db + o2i_db + fl_db + shadow_db; }
};

struct ExtraLosses {
    double o2i_db = 0.0;
    double foliage_db = 0.0;
};

/// Close-in free-space reference model with a 1 m reference distance.
/// Atmospheric attenuation is fixed at 0 dB.
PathLossBreakdown path_loss_ci(const ScenarioParams& params, const LargeScaleParamSet& lsp,
                               LinkCondition condition, double shadow_db, ExtraLosses extra = {});

double foliage_loss_db(double alpha_db_per_m, double depth_m);

/// Building penetration loss from the low/high-loss parabolic models.
double o2i_loss_db(O2iMode mode, double frequency_ghz, Rng& rng);

/// TR 38.901 Table 7.4.1-1 mean path loss (no shadowing), in dB.
double mean_path_loss_3gpp_db(const ScenarioParams& params, LinkCondition condition);
double shadow_sigma_3gpp_db(const ScenarioParams& params, LinkCondition condition);

/// For the 3GPP family the breakdown reports the excess over 1 m free-space loss as distance_db.
PathLossBreakdown path_loss_3gpp(const ScenarioParams& params, LinkCondition condition, double shadow_db,
                                 ExtraLosses extra = {});
PathLossBreakdown path_loss_3gpp(const ScenarioParams& params, LinkCondition condition, Rng& rng,
                                 ExtraLosses extra = {});

LinkCondition sample_condition(double p_los, ConditionMode mode, Rng& rng);

} // namespace mmwsim
