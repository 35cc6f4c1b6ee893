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

#include "core/link.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "core/error.hpp"

namespace mmwsim {

namespace {

struct RawEntry {
    int mod;
    double rate_x1024;
};

// Thresholds for the six lowest entries are anchored by hand; above that a
// Shannon gap of 5 dB is used.
constexpr double kLowThresholds[] = {0.0, 1.5, 2.5, 3.5, 4.5, 5.5};

McsTable build_default_table()
{
    static constexpr RawEntry raw[] = {
        {2, 157},   {2, 193}, {2, 251}, {2, 308}, {2, 379}, {2, 480}, {2, 602}, {4, 378}, {4, 434}, {4, 490},
        {4, 553},   {4, 616}, {4, 658}, {6, 466}, {6, 517}, {6, 567}, {6, 616}, {6, 666}, {6, 719}, {6, 772},
        {6, 822},   {6, 873}, {8, 682.5}, {8, 711}, {8, 754}, {8, 797}, {8, 841}, {8, 885}, {8, 948}};
    McsTable t;
    int i = 0;
    for (const auto& r : raw) {
        McsEntry e;
        e.index = i;
        e.modulation_order = r.mod;
        e.code_rate = r.rate_x1024 / 1024.0;
        e.spectral_efficiency = r.mod * r.rate_x1024 / 1024.0;
        if (i < 6) {
            e.min_sinr_db = kLowThresholds[i];
        } else {
            const double gap = 10.0 * std::log10(std::pow(2.0, e.spectral_efficiency) - 1.0) + 5.0;
            e.min_sinr_db = std::round(gap * 100.0) / 100.0;
        }
        t.push_back(e);
        ++i;
    }
    return t;
}

} // namespace

const McsTable& default_mcs_table()
{
    static const McsTable table = build_default_table();
    return table;
}

void validate_mcs_table(const McsTable& table)
{
    if (table.empty()) {
        fail(ErrorCode::InvalidParameter, "MCS table is empty");
    }
    for (std::size_t i = 0; i < table.size(); ++i) {
        const auto& e = table[i];
        if (!(e.spectral_efficiency > 0.0) || !std::isfinite(e.min_sinr_db)) {
            fail(ErrorCode::InvalidParameter, "MCS entry " + std::to_string(e.index) + " is malformed");
        }
        if (i > 0 && (e.spectral_efficiency <= table[i - 1].spectral_efficiency ||
                      e.min_sinr_db <= table[i - 1].min_sinr_db)) {
            fail(ErrorCode::InvalidParameter, "MCS table must increase strictly in efficiency and threshold");
        }
    }
}

McsTable parse_mcs_table_csv(std::istream& is)
{
    McsTable table;
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream fields(line);
        McsEntry e;
        if (!(fields >> e.index >> e.modulation_order >> e.code_rate >> e.spectral_efficiency >> e.min_sinr_db)) {
            if (table.empty() && line_no == 1) {
                continue; // header row
            }
            fail(ErrorCode::InvalidParameter, "malformed MCS table row " + std::to_string(line_no));
        }
        table.push_back(e);
    }
    validate_mcs_table(table);
    return table;
}

McsTable load_mcs_table_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        fail(ErrorCode::Io, "cannot open MCS table " + path);
    }
    return parse_mcs_table_csv(in);
}

int SlotConfig::prb_count() const
{
    return static_cast<int>(std::floor(bandwidth_hz / (12.0 * scs_hz)));
}

void SlotConfig::validate() const
{
    if (!(scs_hz > 0.0) || !(bandwidth_hz > 0.0) || symbols_per_slot < 1 || !(overhead >= 0.0 && overhead < 1.0)) {
        fail(ErrorCode::InvalidParameter, "invalid slot configuration");
    }
    if (prb_count() < 1) {
        fail(ErrorCode::InvalidParameter, "bandwidth too small for one resource block");
    }
}

double noise_floor_dbm(double bandwidth_hz, double noise_figure_db)
{
    if (!(bandwidth_hz > 0.0)) {
        fail(ErrorCode::InvalidParameter, "bandwidth must be positive");
    }
    return -174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
}

double compute_sinr(double p_tx_dbm, double bf_gain, double noise_figure_db, double bandwidth_hz)
{
    return p_tx_dbm + 10.0 * std::log10(bf_gain) - noise_floor_dbm(bandwidth_hz, noise_figure_db);
}

const McsEntry& select_mcs(double sinr_db, const McsTable& table)
{
    if (table.empty()) {
        fail(ErrorCode::InvalidParameter, "MCS table is empty");
    }
    const McsEntry* best = &table.front();
    for (const auto& e : table) {
        if (e.min_sinr_db <= sinr_db) {
            best = &e;
        }
    }
    return *best;
}

std::int64_t tb_size(const McsEntry& mcs, const SlotConfig& slot)
{
    const double bits = mcs.spectral_efficiency * slot.prb_count() * 12.0 * slot.symbols_per_slot * (1.0 - slot.overhead);
    return static_cast<std::int64_t>(std::floor(bits / 8.0));
}

double phy_throughput_mbps(double tb_bytes, double slot_duration_s)
{
    if (tb_bytes < 0.0 || !(slot_duration_s > 0.0)) {
        fail(ErrorCode::InvalidParameter, "throughput needs tb_bytes >= 0 and a positive slot duration");
    }
    return 8.0 * tb_bytes / slot_duration_s / 1e6;
}

double BlerModel::error_probability(double sinr_db, const McsEntry& mcs, int attempt) const
{
    if (attempt < 1) {
        fail(ErrorCode::InvalidParameter, "attempt numbers start at 1");
    }
    const double effective = sinr_db + harq_bonus_db * (attempt - 1);
    const double midpoint = mcs.min_sinr_db + midpoint_offset_db;
    return 1.0 / (1.0 + std::exp((effective - midpoint) / slope_db));
}

bool block_error(double sinr_db, const McsEntry& mcs, int attempt, const BlerModel& bler, Rng& rng)
{
    return uniform01(rng) < bler.error_probability(sinr_db, mcs, attempt);
}

HarqProcess::HarqProcess(std::uint64_t tb_id, int max_attempts, double bonus_db_per_retx)
    : tb_id_(tb_id), max_attempts_(max_attempts), bonus_db_(bonus_db_per_retx)
{
    if (max_attempts < 1) {
        fail(ErrorCode::InvalidParameter, "HARQ needs at least one attempt");
    }
}

bool HarqProcess::record(bool error)
{
    if (released_) {
        fail(ErrorCode::InvalidParameter, "HARQ process already released");
    }
    ++attempts_;
    if (!error) {
        acked_ = true;
        released_ = true;
    } else if (attempts_ >= max_attempts_) {
        released_ = true;
    }
    return released_;
}

HarqOutcome harq_run(int max_attempts, const std::function<bool(int)>& draw)
{
    HarqProcess proc(0, max_attempts, 0.0);
    while (!proc.record(draw(proc.attempts() + 1))) {
    }
    return {proc.acknowledged(), proc.attempts()};
}

HarqOutcome harq_run(double sinr_db, const McsEntry& mcs, int max_attempts, const BlerModel& bler, Rng& rng)
{
    return harq_run(max_attempts, [&](int attempt) { return block_error(sinr_db, mcs, attempt, bler, rng); });
}

} // namespace mmwsim
