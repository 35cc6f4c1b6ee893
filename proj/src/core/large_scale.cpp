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

#include "core/large_scale.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "core/error.hpp"

namespace mmwsim {

namespace {

double clamp01(double p)
{
    return std::clamp(p, 0.0, 1.0);
}

// min(d1/d, 1)(1 - exp(-d/d2)) + exp(-d/d2), the common 3GPP-style LOS expression.
double los_base(double d1, double d2, double d)
{
    const double e = std::exp(-d / d2);
    return std::min(d1 / d, 1.0) * (1.0 - e) + e;
}

double inh_mixed_office(double d)
{
    if (d <= 1.2) {
        return 1.0;
    }
    if (d < 6.5) {
        return std::exp(-(d - 1.2) / 4.7);
    }
    return 0.32 * std::exp(-(d - 6.5) / 32.6);
}

double upper_range_m(Scenario s, LinkCondition c)
{
    switch (s) {
    case Scenario::UMi:
    case Scenario::UMa: return 5000.0;
    case Scenario::RMa: return c == LinkCondition::LOS ? 10000.0 : 5000.0;
    case Scenario::InH: return 150.0;
    }
    return 0.0;
}

double rma_breakpoint_m(const ScenarioParams& p)
{
    return 2.0 * std::numbers::pi * p.h_gnb_m * p.h_ue_m * p.frequency_ghz * 1e9 / kSpeedOfLight;
}

// Effective-height breakpoint distance for UMi/UMa (environment height 1 m).
double effective_breakpoint_m(const ScenarioParams& p)
{
    return 4.0 * (p.h_gnb_m - 1.0) * (p.h_ue_m - 1.0) * p.frequency_ghz * 1e9 / kSpeedOfLight;
}

constexpr double kRmaBuildingHeight = 5.0;
constexpr double kRmaStreetWidth = 20.0;

double rma_pl1(const ScenarioParams& p, double d3d)
{
    const double h = kRmaBuildingHeight;
    const double fc = p.frequency_ghz;
    return 20.0 * std::log10(40.0 * std::numbers::pi * d3d * fc / 3.0)
        + std::min(0.03 * std::pow(h, 1.72), 10.0) * std::log10(d3d)
        - std::min(0.044 * std::pow(h, 1.72), 14.77) + 0.002 * std::log10(h) * d3d;
}

double rma_los(const ScenarioParams& p)
{
    const double d3d = p.distance_3d_m();
    const double dbp = rma_breakpoint_m(p);
    if (p.distance_2d_m <= dbp) {
        return rma_pl1(p, d3d);
    }
    return rma_pl1(p, dbp) + 40.0 * std::log10(d3d / dbp);
}

double umi_los(const ScenarioParams& p)
{
    const double d3d = p.distance_3d_m();
    const double fc = p.frequency_ghz;
    const double dbp = effective_breakpoint_m(p);
    if (p.distance_2d_m <= dbp) {
        return 32.4 + 21.0 * std::log10(d3d) + 20.0 * std::log10(fc);
    }
    const double dh = p.h_gnb_m - p.h_ue_m;
    return 32.4 + 40.0 * std::log10(d3d) + 20.0 * std::log10(fc) - 9.5 * std::log10(dbp * dbp + dh * dh);
}

double uma_los(const ScenarioParams& p)
{
    const double d3d = p.distance_3d_m();
    const double fc = p.frequency_ghz;
    const double dbp = effective_breakpoint_m(p);
    if (p.distance_2d_m <= dbp) {
        return 28.0 + 22.0 * std::log10(d3d) + 20.0 * std::log10(fc);
    }
    const double dh = p.h_gnb_m - p.h_ue_m;
    return 28.0 + 40.0 * std::log10(d3d) + 20.0 * std::log10(fc) - 9.0 * std::log10(dbp * dbp + dh * dh);
}

double inh_los(const ScenarioParams& p)
{
    return 32.4 + 17.3 * std::log10(p.distance_3d_m()) + 20.0 * std::log10(p.frequency_ghz);
}

} // namespace

LosProbabilityModel LosProbabilityModel::nyu_umi()
{
    return {LosModelKind::NyuSquaredUMi, 22.0, 100.0, 1.6, Scenario::UMi};
}

LosProbabilityModel LosProbabilityModel::nyu_uma(double h_ue_m)
{
    return {LosModelKind::NyuSquaredUMa, 20.0, 160.0, h_ue_m, Scenario::UMa};
}

LosProbabilityModel LosProbabilityModel::five_gcm_inh()
{
    return {LosModelKind::FiveGcmInH, 1.2, 4.7, 1.6, Scenario::InH};
}

LosProbabilityModel LosProbabilityModel::tr38901(Scenario scenario, double h_ue_m)
{
    switch (scenario) {
    case Scenario::UMi: return {LosModelKind::Tr38901, 18.0, 36.0, h_ue_m, scenario};
    case Scenario::UMa: return {LosModelKind::Tr38901, 18.0, 63.0, h_ue_m, scenario};
    case Scenario::RMa: return {LosModelKind::Tr38901, 10.0, 1000.0, h_ue_m, scenario};
    case Scenario::InH: return {LosModelKind::Tr38901, 1.2, 4.7, h_ue_m, scenario};
    }
    fail(ErrorCode::UnsupportedScenario, "unsupported scenario");
}

LosProbabilityModel los_model_for(Scenario scenario, ChannelModel model, double h_ue_m)
{
    if (model == ChannelModel::SCM3GPP) {
        return LosProbabilityModel::tr38901(scenario, h_ue_m);
    }
    switch (scenario) {
    case Scenario::UMi: return LosProbabilityModel::nyu_umi();
    case Scenario::UMa: return LosProbabilityModel::nyu_uma(h_ue_m);
    case Scenario::InH: return LosProbabilityModel::five_gcm_inh();
    case Scenario::RMa: return LosProbabilityModel::tr38901(Scenario::RMa, h_ue_m);
    }
    fail(ErrorCode::UnsupportedScenario, "unsupported scenario");
}

double uma_correction(double d2d_m, double h_ue_m)
{
    if (h_ue_m <= 13.0 || d2d_m <= 18.0) {
        return 0.0;
    }
    const double c_prime = std::pow((std::min(h_ue_m, 23.0) - 13.0) / 10.0, 1.5);
    return c_prime * 1.25 * std::pow(d2d_m / 100.0, 3.0) * std::exp(-d2d_m / 150.0);
}

double los_probability(const LosProbabilityModel& model, double d2d_m)
{
    if (!(d2d_m > 0.0) || !std::isfinite(d2d_m)) {
        fail(ErrorCode::InvalidDistance, "los_probability: 2D distance must be positive");
    }
    if (!(model.d1_m > 0.0) || !(model.d2_m > 0.0)) {
        fail(ErrorCode::InvalidParameter, "los_probability: d1 and d2 must be positive");
    }
    const double d = d2d_m;
    switch (model.kind) {
    case LosModelKind::NyuSquaredUMi: {
        const double b = los_base(model.d1_m, model.d2_m, d);
        return clamp01(b * b);
    }
    case LosModelKind::NyuSquaredUMa: {
        const double b = los_base(model.d1_m, model.d2_m, d) * (1.0 + uma_correction(d, model.h_ue_m));
        return clamp01(b * b);
    }
    case LosModelKind::FiveGcmInH:
        return inh_mixed_office(d);
    case LosModelKind::Tr38901:
        switch (model.scenario) {
        case Scenario::UMi:
            return d <= 18.0 ? 1.0 : clamp01(los_base(18.0, 36.0, d));
        case Scenario::UMa:
            return d <= 18.0 ? 1.0 : clamp01(los_base(18.0, 63.0, d) * (1.0 + uma_correction(d, model.h_ue_m)));
        case Scenario::RMa:
            return d <= 10.0 ? 1.0 : std::exp(-(d - 10.0) / 1000.0);
        case Scenario::InH:
            return inh_mixed_office(d);
        }
    }
    fail(ErrorCode::InvalidParameter, "unknown LOS probability model");
}

double fspl_1m_db(double frequency_ghz)
{
    if (!(frequency_ghz > 0.0) || !std::isfinite(frequency_ghz)) {
        fail(ErrorCode::InvalidParameter, "fspl: frequency must be positive");
    }
    return 20.0 * std::log10(4.0 * std::numbers::pi * frequency_ghz * 1e9 / kSpeedOfLight);
}

PathLossBreakdown path_loss_ci(const ScenarioParams& params, const LargeScaleParamSet& lsp,
                               LinkCondition condition, double shadow_db, ExtraLosses extra)
{
    if (!(params.distance_2d_m >= 1.0)) {
        fail(ErrorCode::InvalidDistance, "CI path loss needs d >= 1 m (reference distance)");
    }
    if (extra.o2i_db < 0.0 || extra.foliage_db < 0.0) {
        fail(ErrorCode::InvalidParameter, "O2I and foliage losses must be non-negative");
    }
    PathLossBreakdown pl;
    pl.fspl_1m_db = fspl_1m_db(params.frequency_ghz);
    pl.distance_db = 10.0 * lsp.ple(condition, params.frequency_ghz) * std::log10(params.distance_2d_m);
    pl.at_db = 0.0;
    pl.o2i_db = extra.o2i_db;
    pl.fl_db = extra.foliage_db;
    pl.shadow_db = shadow_db;
    pl.total_db = pl.component_sum();
    return pl;
}

double foliage_loss_db(double alpha_db_per_m, double depth_m)
{
    if (!(alpha_db_per_m >= 0.0 && alpha_db_per_m <= 10.0)) {
        fail(ErrorCode::InvalidParameter, "foliage attenuation must lie in [0, 10] dB/m");
    }
    if (!(depth_m >= 0.0)) {
        fail(ErrorCode::InvalidParameter, "foliage depth must be non-negative");
    }
    return alpha_db_per_m * depth_m;
}

double o2i_loss_db(O2iMode mode, double frequency_ghz, Rng& rng)
{
    const double f2 = frequency_ghz * frequency_ghz;
    switch (mode) {
    case O2iMode::Off:
        return 0.0;
    case O2iMode::Low:
        return std::max(0.0, 10.0 * std::log10(5.0 + 0.03 * f2) + gaussian(rng, 0.0, 4.0));
    case O2iMode::High:
        return std::max(0.0, 10.0 * std::log10(10.0 + 5.0 * f2) + gaussian(rng, 0.0, 6.0));
    }
    return 0.0;
}

double mean_path_loss_3gpp_db(const ScenarioParams& params, LinkCondition condition)
{
    params.validate();
    const double d2d = params.distance_2d_m;
    const double d3d = params.distance_3d_m();
    if (d2d > upper_range_m(params.scenario, condition) || (params.scenario == Scenario::InH && d3d > 150.0)) {
        fail(ErrorCode::OutOfRange, "distance outside the 3GPP model validity range for " +
                                        std::string(to_string(params.scenario)));
    }
    const double fc = params.frequency_ghz;
    const double hut = params.h_ue_m;
    switch (params.scenario) {
    case Scenario::UMi: {
        const double los = umi_los(params);
        if (condition == LinkCondition::LOS) {
            return los;
        }
        const double nlos = 35.3 * std::log10(d3d) + 22.4 + 21.3 * std::log10(fc) - 0.3 * (hut - 1.5);
        return std::max(los, nlos);
    }
    case Scenario::UMa: {
        const double los = uma_los(params);
        if (condition == LinkCondition::LOS) {
            return los;
        }
        const double nlos = 13.54 + 39.08 * std::log10(d3d) + 20.0 * std::log10(fc) - 0.6 * (hut - 1.5);
        return std::max(los, nlos);
    }
    case Scenario::RMa: {
        const double los = rma_los(params);
        if (condition == LinkCondition::LOS) {
            return los;
        }
        const double h = kRmaBuildingHeight;
        const double w = kRmaStreetWidth;
        const double hbs = params.h_gnb_m;
        const double lg_hbs = std::log10(hbs);
        const double nlos = 161.04 - 7.1 * std::log10(w) + 7.5 * std::log10(h)
            - (24.37 - 3.7 * (h / hbs) * (h / hbs)) * lg_hbs
            + (43.42 - 3.1 * lg_hbs) * (std::log10(d3d) - 3.0) + 20.0 * std::log10(fc)
            - (3.2 * std::pow(std::log10(11.75 * hut), 2.0) - 4.97);
        return std::max(los, nlos);
    }
    case Scenario::InH: {
        const double los = inh_los(params);
        if (condition == LinkCondition::LOS) {
            return los;
        }
        const double nlos = 38.3 * std::log10(d3d) + 17.30 + 24.9 * std::log10(fc);
        return std::max(los, nlos);
    }
    }
    fail(ErrorCode::UnsupportedScenario, "unsupported scenario");
}

double shadow_sigma_3gpp_db(const ScenarioParams& params, LinkCondition condition)
{
    const bool los = condition == LinkCondition::LOS;
    switch (params.scenario) {
    case Scenario::UMi: return los ? 4.0 : 7.82;
    case Scenario::UMa: return los ? 4.0 : 6.0;
    case Scenario::RMa:
        if (!los) {
            return 8.0;
        }
        return params.distance_2d_m <= rma_breakpoint_m(params) ? 4.0 : 6.0;
    case Scenario::InH: return los ? 3.0 : 8.03;
    }
    fail(ErrorCode::UnsupportedScenario, "unsupported scenario");
}

PathLossBreakdown path_loss_3gpp(const ScenarioParams& params, LinkCondition condition, double shadow_db,
                                 ExtraLosses extra)
{
    if (extra.o2i_db < 0.0 || extra.foliage_db < 0.0) {
        fail(ErrorCode::InvalidParameter, "O2I and foliage losses must be non-negative");
    }
    const double mean = mean_path_loss_3gpp_db(params, condition);
    PathLossBreakdown pl;
    pl.fspl_1m_db = fspl_1m_db(params.frequency_ghz);
    pl.distance_db = mean - pl.fspl_1m_db;
    pl.o2i_db = extra.o2i_db;
    pl.fl_db = extra.foliage_db;
    pl.shadow_db = shadow_db;
    pl.total_db = pl.component_sum();
    return pl;
}

PathLossBreakdown path_loss_3gpp(const ScenarioParams& params, LinkCondition condition, Rng& rng,
                                 ExtraLosses extra)
{
    const double shadow = gaussian(rng, 0.0, shadow_sigma_3gpp_db(params, condition));
    return path_loss_3gpp(params, condition, shadow, extra);
}

LinkCondition sample_condition(double p_los, ConditionMode mode, Rng& rng)
{
    switch (mode) {
    case ConditionMode::FixedLOS: return LinkCondition::LOS;
    case ConditionMode::FixedNLOS: return LinkCondition::NLOS;
    case ConditionMode::Probabilistic:
        if (!(p_los >= 0.0 && p_los <= 1.0)) {
            fail(ErrorCode::InvalidParameter, "LOS probability must lie in [0, 1]");
        }
        return uniform01(rng) < p_los ? LinkCondition::LOS : LinkCondition::NLOS;
    }
    return LinkCondition::NLOS;
}

} // namespace mmwsim
