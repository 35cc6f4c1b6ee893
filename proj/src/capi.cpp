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

#include "mmwsim/mmwsim.h"

#include <cctype>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "core/campaign.hpp"
#include "core/error.hpp"
#include "core/large_scale.hpp"
#include "core/link.hpp"
#include "core/scenario.hpp"

struct mmw_config {
    mmwsim::ConfigFile file;
};

struct mmw_campaign {
    mmwsim::CampaignResult result;
};

namespace {

thread_local std::string g_last_error;

mmw_status set_error(mmw_status status, const std::string& message)
{
    g_last_error = message;
    return status;
}

// Runs fn, translating exceptions into status codes at the C boundary.
template <typename Fn>
mmw_status guarded(Fn&& fn)
{
    try {
        g_last_error.clear();
        fn();
        return MMW_OK;
    } catch (const mmwsim::Error& e) {
        return set_error(static_cast<mmw_status>(static_cast<int>(e.code())), e.what());
    } catch (const std::bad_alloc&) {
        return set_error(MMW_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return set_error(MMW_ERR_INTERNAL, e.what());
    } catch (...) {
        return set_error(MMW_ERR_INTERNAL, "unknown failure");
    }
}

char* copy_string(const std::string& s)
{
    auto* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out == nullptr) {
        throw std::bad_alloc();
    }
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

std::string render_table(const mmwsim::CampaignResult& result, mmw_table_format format)
{
    const auto table = mmwsim::emit_comparison_table(result);
    return format == MMW_TABLE_CSV ? table.to_csv() : table.to_text();
}

} // namespace

extern "C" {

const char* mmw_version(void) { return "0.1.0"; }

const char* mmw_status_string(mmw_status status)
{
    switch (status) {
    case MMW_OK: return "ok";
    case MMW_ERR_INVALID_PARAMETER: return "invalid parameter";
    case MMW_ERR_INVALID_DISTANCE: return "invalid distance";
    case MMW_ERR_UNSUPPORTED_SCENARIO: return "unsupported scenario";
    case MMW_ERR_OUT_OF_RANGE: return "out of range";
    case MMW_ERR_INVALID_ARRAY: return "invalid array";
    case MMW_ERR_INVALID_INPUT: return "invalid input";
    case MMW_ERR_IO: return "i/o error";
    case MMW_ERR_INCOMPLETE_CAMPAIGN: return "incomplete campaign";
    case MMW_ERR_GENERATION: return "generation failed";
    case MMW_ERR_UNDEFINED_LATENCY: return "undefined latency";
    case MMW_ERR_NULL_ARGUMENT: return "null argument";
    case MMW_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* mmw_last_error(void) { return g_last_error.c_str(); }

mmw_status mmw_config_load(const char* path, mmw_config** out)
{
    if (path == nullptr || out == nullptr) {
        return set_error(MMW_ERR_NULL_ARGUMENT, "path and out must not be NULL");
    }
    *out = nullptr;
    return guarded([&] { *out = new mmw_config{mmwsim::ConfigFile::load(path)}; });
}

mmw_status mmw_config_from_string(const char* text, mmw_config** out)
{
    if (text == nullptr || out == nullptr) {
        return set_error(MMW_ERR_NULL_ARGUMENT, "text and out must not be NULL");
    }
    *out = nullptr;
    return guarded([&] { *out = new mmw_config{mmwsim::ConfigFile::parse(text)}; });
}

mmw_status mmw_config_set(mmw_config* cfg, const char* key, const char* value)
{
    if (cfg == nullptr || key == nullptr || value == nullptr) {
        return set_error(MMW_ERR_NULL_ARGUMENT, "cfg, key and value must not be NULL");
    }
    return guarded([&] {
        std::string k(key);
        for (auto& c : k) {
            c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        }
        cfg->file.set(k, value);
    });
}

mmw_status mmw_config_has(const mmw_config* cfg, const char* key, int* out)
{
    if (cfg == nullptr || key == nullptr || out == nullptr) {
        return set_error(MMW_ERR_NULL_ARGUMENT, "cfg, key and out must not be NULL");
    }
    *out = cfg->file.has(key) ? 1 : 0;
    return MMW_OK;
}

mmw_status mmw_config_set_seed(mmw_config* cfg, uint64_t seed)
{
    if (cfg == nullptr) {
        return set_error(MMW_ERR_NULL_ARGUMENT, "cfg must not be NULL");
    }
    return guarded([&] { cfg->file.set("seed", std::to_string(seed)); });
}

void mmw_config_free(mmw_config* cfg) { delete cfg; }

mmw_status mmw_run_campaign(const mmw_config* cfg, const char* out_dir, int workers, mmw_campaign** out)
{
    if (cfg == nullptr || out == nullptr) {
        return set_error(MMW_ERR_NULL_ARGUMENT, "cfg and out must not be NULL");
    }
    *out = nullptr;
    return guarded([&] {
        auto spec = mmwsim::CampaignSpec::from_config(cfg->file);
        if (out_dir != nullptr) {
            spec.output_dir = out_dir;
        }
        if (workers > 0) {
            spec.workers = workers;
        }
        auto handle = std::make_unique<mmw_campaign>();
        handle->result = mmwsim::run_campaign(spec);
        *out = handle.release();
    });
}

mmw_status mmw_campaign_record_count(const mmw_campaign* campaign, size_t* out)
{
    if (campaign == nullptr || out == nullptr) {
        return set_error(MMW_ERR_NULL_ARGUMENT, "campaign and out must not be NULL");
    }
    *out = campaign->result.record_count();
    return MMW_OK;
}

mmw_status mmw_campaign_table(const mmw_campaign* campaign, mmw_table_format format, char** out)
{
    if (campaign == nullptr || out == nullptr) {
        return set_error(MMW_ERR_NULL_ARGUMENT, "campaign and out must not be NULL");
    }
    *out = nullptr;
    return guarded([&] { *out = copy_string(render_table(campaign->result, format)); });
}

void mmw_campaign_free(mmw_campaign* campaign) { delete campaign; }

mmw_status mmw_table_from_dir(const char* dir, mmw_table_format format, char** out)
{
    if (dir == nullptr || out == nullptr) {
        return set_error(MMW_ERR_NULL_ARGUMENT, "dir and out must not be NULL");
    }
    *out = nullptr;
    return guarded([&] { *out = copy_string(render_table(mmwsim::load_campaign(dir), format)); });
}

mmw_status mmw_ecdf_from_dir(const char* dir, const char* metric, char** out)
{
    if (dir == nullptr || metric == nullptr || out == nullptr) {
        return set_error(MMW_ERR_NULL_ARGUMENT, "dir, metric and out must not be NULL");
    }
    *out = nullptr;
    return guarded([&] {
        const auto m = mmwsim::parse_metric(metric);
        *out = copy_string(mmwsim::ecdf_csv(mmwsim::load_campaign(dir), m));
    });
}

void mmw_string_free(char* s) { std::free(s); }

mmw_status mmw_los_probability(const char* scenario, const char* channel_model, double d2d_m, double h_ue_m,
                               double* out)
{
    if (scenario == nullptr || channel_model == nullptr || out == nullptr) {
        return set_error(MMW_ERR_NULL_ARGUMENT, "scenario, channel_model and out must not be NULL");
    }
    return guarded([&] {
        const auto model = mmwsim::los_model_for(mmwsim::parse_scenario(scenario),
                                                 mmwsim::parse_channel_model(channel_model), h_ue_m);
        *out = mmwsim::los_probability(model, d2d_m);
    });
}

mmw_status mmw_phy_throughput_mbps(double tb_bytes, double slot_duration_s, double* out)
{
    if (out == nullptr) {
        return set_error(MMW_ERR_NULL_ARGUMENT, "out must not be NULL");
    }
    return guarded([&] { *out = mmwsim::phy_throughput_mbps(tb_bytes, slot_duration_s); });
}

mmw_status mmw_interpolate_param(double p28, double p140, double frequency_ghz, double* out)
{
    if (out == nullptr) {
        return set_error(MMW_ERR_NULL_ARGUMENT, "out must not be NULL");
    }
    return guarded([&] { *out = mmwsim::interpolate_param(p28, p140, frequency_ghz); });
}

} // extern "C"
