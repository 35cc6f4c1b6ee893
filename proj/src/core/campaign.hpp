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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core/e2e.hpp"
#include "core/scenario.hpp"

namespace mmwsim {

struct CellKey {
    Scenario scenario = Scenario::UMi;
    ChannelModel model = ChannelModel::NYUSIM;
    ConditionMode condition = ConditionMode::FixedLOS;

    /// File-name friendly label, e.g. "NYUSIM_UMi_los".
    std::string label() const;
    bool operator==(const CellKey&) const = default;
};

/// Settings shared by every cell; unset fields keep the per-scenario defaults.
struct CampaignOverrides {
    std::optional<double> frequency_ghz;
    std::optional<double> bandwidth_hz;
    std::optional<double> distance_m;
    std::optional<double> tx_power_dbm;
    std::optional<double> ue_height_m;
    std::optional<double> gnb_height_m;
    std::optional<double> ple_los;
    std::optional<double> ple_nlos;
    std::optional<double> sigma_los;
    std::optional<double> sigma_nlos;
    double foliage_db_per_m = 0.0;
    double foliage_depth_m = -1.0;
    O2iMode o2i_mode = O2iMode::Off;
    double noise_figure_db = 5.0;
    int harq_max_attempts = 3;
    std::int64_t rlc_buffer_bytes = 3'000'000;
    int tx_rows = 8, tx_cols = 8;
    int rx_rows = 4, rx_cols = 4;
    std::string mcs_table_path;
};

struct CampaignSpec {
    std::vector<Scenario> scenarios;
    std::vector<ChannelModel> models;
    std::vector<ConditionMode> conditions;
    int realizations = 50;
    double duration_s = 9.0;
    double warmup_s = 0.0;
    std::uint64_t base_seed = 1;
    std::string output_dir;
    int workers = 1;
    bool dump_pathloss = false;
    bool dump_mpc = false;
    CampaignOverrides overrides;
    /// Loaded once from overrides.mcs_table_path, or the built-in table.
    McsTable mcs_table = default_mcs_table();

    /// Every scenario under both models with fixed LOS and NLOS conditions.
    static CampaignSpec full_grid();
    static CampaignSpec from_config(const ConfigFile& cfg);

    std::vector<CellKey> cells() const;
    RealizationConfig cell_config(const CellKey& cell) const;
    void validate() const;
};

std::uint64_t realization_seed(std::uint64_t base_seed, const CellKey& cell, int index);

/// Flat per-realization record as persisted in the JSON-lines files.
struct RealizationRecord {
    CellKey cell;
    int index = 0;
    std::uint64_t seed = 0;
    LinkCondition link_condition = LinkCondition::LOS;
    double los_probability = 0.0;
    PathLossBreakdown path_loss;
    std::int64_t multipaths = 0;
    double bf_gain_db = 0.0;
    double sinr_db = 0.0;
    SinrTraceSummary sinr_trace;
    int mcs = 0;
    std::int64_t tb_bytes = 0;
    double throughput_mbps = 0.0;
    std::optional<double> mean_latency_ms;
    double drop_pct = 0.0;
    std::int64_t packets_tx = 0;
    std::int64_t packets_rx = 0;
    std::int64_t drops_overflow = 0;
    std::int64_t drops_corrupted = 0;
    std::int64_t drops_residual = 0;
    std::int64_t tbs_sent = 0;
    std::int64_t tbs_failed = 0;
    std::int64_t harq_retransmissions = 0;

    static RealizationRecord from_result(const CellKey& cell, int index, const RealizationResult& r);
    std::string to_json_line() const;
    static RealizationRecord from_json_line(const std::string& line);
};

struct CellResult {
    CellKey key;
    std::vector<RealizationRecord> records;

    double mean_throughput_mbps() const;
    /// Mean over realizations that delivered at least one packet.
    std::optional<double> mean_latency_ms() const;
    double mean_drop_pct() const;
};

struct CampaignResult {
    std::vector<CellKey> grid;
    int realizations = 0;
    std::uint64_t base_seed = 0;
    std::vector<CellResult> cells;

    const CellResult* find(const CellKey& key) const;
    std::size_t record_count() const;
};

/// Runs every cell with up to spec.workers threads. When output_dir is set the
/// directory is checked for writability before any simulation starts, and all
/// files are written after the workers finish.
CampaignResult run_campaign(const CampaignSpec& spec);

CampaignResult load_campaign(const std::string& dir);

/// Sorted (value, cumulative fraction) pairs.
std::vector<std::pair<double, double>> ecdf(std::vector<double> values);

enum class Metric { Sinr, Throughput, Latency, Drop };
Metric parse_metric(std::string_view name);
std::string ecdf_csv(const CampaignResult& result, Metric metric);

struct ComparisonTable {
    std::vector<Scenario> rows;
    /// Column order: metric (throughput, latency, drop) x condition (LOS, NLOS) x model (NYUSIM, 3GPP).
    std::vector<std::string> columns;
    std::vector<std::vector<std::optional<double>>> values;

    std::string to_csv() const;
    std::string to_text() const;
    static ComparisonTable from_csv(const std::string& text);
};

/// Raises IncompleteCampaign, naming the cells that are short of records.
ComparisonTable emit_comparison_table(const CampaignResult& result);

} // namespace mmwsim
