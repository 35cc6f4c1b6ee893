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
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "core/random.hpp"

namespace mmwsim {

struct McsEntry {
    int index = 0;
    int modulation_order = 2;
    double code_rate = 0.0;
    double spectral_efficiency = 0.0;
    double min_sinr_db = 0.0;
};

using McsTable = std::vector<McsEntry>;

/// 29-entry table, QPSK to 256QAM.
const McsTable& default_mcs_table();

/// Columns: index, mod_order, code_rate, se, min_sinr_db. A header line is optional.
McsTable parse_mcs_table_csv(std::istream& is);
McsTable load_mcs_table_csv(const std::string& path);

/// Both spectral efficiency and threshold must increase strictly with index.
void validate_mcs_table(const McsTable& table);

struct SlotConfig {
    double scs_hz = 60e3;
    double bandwidth_hz = 100e6;
    int symbols_per_slot = 14;
    double overhead = 0.40545;

    double slot_duration_s() const { return 1e-3 / (scs_hz / 15e3); }
    int prb_count() const;
    void validate() const;
};

double noise_floor_dbm(double bandwidth_hz, double noise_figure_db);

double compute_sinr(double p_tx_dbm, double bf_gain, double noise_figure_db, double bandwidth_hz);

const McsEntry& select_mcs(double sinr_db, const McsTable& table);

std::int64_t tb_size(const McsEntry& mcs, const SlotConfig& slot);

double phy_throughput_mbps(double tb_bytes, double slot_duration_s);
inline double phy_throughput_mbps(double tb_bytes, const SlotConfig& slot)
{
    return phy_throughput_mbps(tb_bytes, slot.slot_duration_s());
}

/// Logistic block-error curve around (min_sinr + midpoint_offset). Each
/// retransmission adds harq_bonus_db to the effective SINR.
struct BlerModel {
    double midpoint_offset_db = -1.0;
    double slope_db = 0.5;
    double harq_bonus_db = 3.0;

    double error_probability(double sinr_db, const McsEntry& mcs, int attempt) const;
};

/// True when the block is received in error.
bool block_error(double sinr_db, const McsEntry& mcs, int attempt, const BlerModel& bler, Rng& rng);

class HarqProcess {
public:
    HarqProcess(std::uint64_t tb_id, int max_attempts, double bonus_db_per_retx);

    std::uint64_t tb_id() const { return tb_id_; }
    int attempts() const { return attempts_; }
    int max_attempts() const { return max_attempts_; }
    bool released() const { return released_; }
    bool acknowledged() const { return acked_; }
    /// SINR gain accumulated from soft combining at the next attempt.
    double combining_bonus_db() const { return bonus_db_ * attempts_; }

    /// Records the outcome of one more attempt. Returns true once released.
    bool record(bool error);

private:
    std::uint64_t tb_id_;
    int max_attempts_;
    double bonus_db_;
    int attempts_ = 0;
    bool released_ = false;
    bool acked_ = false;
};

struct HarqOutcome {
    bool delivered = false;
    int attempts = 0;
};

HarqOutcome harq_run(double sinr_db, const McsEntry& mcs, int max_attempts, const BlerModel& bler, Rng& rng);

/// Same loop with an arbitrary error source; draw(attempt) returns true on error.
HarqOutcome harq_run(int max_attempts, const std::function<bool(int)>& draw);

} // namespace mmwsim
