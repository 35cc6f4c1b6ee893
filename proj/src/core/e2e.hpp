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
#include <deque>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "core/antenna.hpp"
#include "core/large_scale.hpp"
#include "core/link.hpp"
#include "core/random.hpp"
#include "core/scenario.hpp"
#include "core/small_scale.hpp"

namespace mmwsim {

enum class PacketStatus { Queued, InFlight, Delivered, Dropped };

struct PacketRecord {
    std::uint64_t id = 0;
    std::int64_t size = 0;
    double t_generated = 0.0;
    std::optional<double> t_delivered;
    /// Bytes not yet placed into a transport block.
    std::int64_t bytes_remaining = 0;
    PacketStatus status = PacketStatus::Queued;
    bool corrupted = false;
    double last_segment_done = 0.0;
};

/// Unacknowledged-mode RLC transmit buffer holding whole and partially sent SDUs.
class RlcBuffer {
public:
    explicit RlcBuffer(std::int64_t capacity_bytes);

    std::int64_t capacity() const { return capacity_; }
    std::int64_t occupancy() const { return occupancy_; }
    bool empty() const { return fifo_.empty(); }

    /// Returns false (and marks the packet dropped) when it would overflow.
    bool enqueue(PacketRecord& pkt, std::size_t handle);

    struct Segment {
        std::size_t handle;
        std::int64_t bytes;
    };
    /// Pulls up to tb_bytes from the head, segmenting the last SDU if needed.
    std::vector<Segment> dequeue(std::int64_t tb_bytes, std::vector<PacketRecord>& packets);

    const std::deque<std::size_t>& fifo() const { return fifo_; }

private:
    std::int64_t capacity_;
    std::int64_t occupancy_ = 0;
    std::deque<std::size_t> fifo_;
};

struct SinrTraceSummary {
    std::int64_t slots = 0;
    double min_db = std::numeric_limits<double>::infinity();
    double max_db = -std::numeric_limits<double>::infinity();
    double sum_db = 0.0;

    void add(double sinr_db);
    double mean_db() const { return slots > 0 ? sum_db / static_cast<double>(slots) : 0.0; }
};

struct MetricsAccumulator {
    std::int64_t bits_delivered = 0;
    std::vector<double> latencies_s;
    std::int64_t packets_tx = 0;
    std::int64_t packets_rx = 0;
    std::int64_t drops_overflow = 0;
    std::int64_t drops_corrupted = 0;
    std::int64_t drops_residual = 0;
    std::int64_t tbs_sent = 0;
    std::int64_t tbs_failed = 0;
    std::int64_t harq_retransmissions = 0;
    SinrTraceSummary sinr_trace;
    double window_s = 0.0;

    std::int64_t drops() const { return drops_overflow + drops_corrupted + drops_residual; }
};

struct LinkSimConfig {
    SlotConfig slot;
    McsTable mcs_table = default_mcs_table();
    BlerModel bler;
    int harq_max_attempts = 3;
    int harq_rtt_slots = 4;
    std::int64_t rlc_buffer_bytes = 3'000'000;
    std::int64_t packet_bytes = 62500;
    double packet_interval_s = 0.010;
    double duration_s = 9.0;
    double warmup_s = 0.0;

    void validate() const;
};

/// Runs the slot engine against a fixed SINR (the channel is static per drop).
MetricsAccumulator simulate_link(const LinkSimConfig& cfg, double sinr_db, Rng& rng);

double throughput_mbps(const MetricsAccumulator& acc, double duration_s);

struct LatencyStats {
    std::size_t count = 0;
    double mean_ms = 0.0;
    double p50_ms = 0.0;
    double p95_ms = 0.0;
    double max_ms = 0.0;
};

/// Raises UndefinedLatency when nothing was delivered.
LatencyStats latency_stats(const MetricsAccumulator& acc);

double packet_drop_rate(const MetricsAccumulator& acc);

struct RealizationConfig {
    ScenarioParams params;
    LargeScaleParamSet large_scale;
    O2iMode o2i_mode = O2iMode::Off;
    double foliage_db_per_m = 0.0;
    /// Foliage depth in metres; negative means uniform on (0, d2d).
    double foliage_depth_m = -1.0;
    double noise_figure_db = 5.0;
    AntennaArray tx_array = AntennaArray::uniform_planar(8, 8);
    AntennaArray rx_array = AntennaArray::uniform_planar(4, 4, 0.5, std::numbers::pi);
    LinkSimConfig link;
    bool keep_multipaths = false;

    static RealizationConfig defaults(Scenario scenario, ChannelModel model);
    void validate() const;
};

struct RealizationResult {
    std::uint64_t seed = 0;
    LinkCondition condition = LinkCondition::LOS;
    double los_probability = 0.0;
    PathLossBreakdown path_loss;
    std::size_t multipath_count = 0;
    double bf_gain = 0.0;
    double sinr_db = 0.0;
    int mcs_index = 0;
    std::int64_t tb_bytes = 0;
    MetricsAccumulator metrics;
    double throughput_mbps = 0.0;
    std::optional<double> mean_latency_ms;
    double drop_pct = 0.0;
    std::vector<Multipath> multipaths;
};

/// Large-scale draw, multipath generation, beamforming, SINR and slot engine for one drop.
RealizationResult run_realization(const RealizationConfig& cfg, std::uint64_t seed);

} // namespace mmwsim
