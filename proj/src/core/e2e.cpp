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

#include "core/e2e.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "core/error.hpp"

namespace mmwsim {

namespace {

// Timing comparisons are made on slot boundaries; this absorbs rounding in k * interval.
constexpr double kTimeEps = 1e-9;

double percentile_ms(const std::vector<double>& sorted_s, double q)
{
    const auto n = sorted_s.size();
    const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
    return sorted_s[std::min(n, std::max<std::size_t>(rank, 1)) - 1] * 1e3;
}

} // namespace

RlcBuffer::RlcBuffer(std::int64_t capacity_bytes) : capacity_(capacity_bytes)
{
    if (capacity_bytes < 1) {
        fail(ErrorCode::InvalidParameter, "RLC buffer capacity must be positive");
    }
}

bool RlcBuffer::enqueue(PacketRecord& pkt, std::size_t handle)
{
    if (occupancy_ + pkt.bytes_remaining > capacity_) {
        pkt.status = PacketStatus::Dropped;
        return false;
    }
    occupancy_ += pkt.bytes_remaining;
    fifo_.push_back(handle);
    return true;
}

std::vector<RlcBuffer::Segment> RlcBuffer::dequeue(std::int64_t tb_bytes, std::vector<PacketRecord>& packets)
{
    std::vector<Segment> out;
    while (tb_bytes > 0 && !fifo_.empty()) {
        auto& pkt = packets[fifo_.front()];
        const std::int64_t take = std::min(tb_bytes, pkt.bytes_remaining);
        pkt.bytes_remaining -= take;
        pkt.status = PacketStatus::InFlight;
        occupancy_ -= take;
        tb_bytes -= take;
        out.push_back({fifo_.front(), take});
        if (pkt.bytes_remaining == 0) {
            fifo_.pop_front();
        }
    }
    return out;
}

void SinrTraceSummary::add(double sinr_db)
{
    ++slots;
    min_db = std::min(min_db, sinr_db);
    max_db = std::max(max_db, sinr_db);
    sum_db += sinr_db;
}

void LinkSimConfig::validate() const
{
    slot.validate();
    validate_mcs_table(mcs_table);
    if (harq_max_attempts < 1 || harq_rtt_slots < 1) {
        fail(ErrorCode::InvalidParameter, "HARQ needs at least one attempt and a positive round-trip time");
    }
    if (rlc_buffer_bytes < 1 || packet_bytes < 1 || !(packet_interval_s > 0.0)) {
        fail(ErrorCode::InvalidParameter, "traffic source and RLC buffer must be positive");
    }
    if (!(duration_s > 0.0) || !std::isfinite(duration_s)) {
        fail(ErrorCode::InvalidParameter, "simulation duration must be positive");
    }
    if (!(warmup_s >= 0.0) || warmup_s >= duration_s) {
        fail(ErrorCode::InvalidParameter, "warmup must be non-negative and shorter than the run");
    }
}

MetricsAccumulator simulate_link(const LinkSimConfig& cfg, double sinr_db, Rng& rng)
{
    cfg.validate();
    if (std::isnan(sinr_db)) {
        fail(ErrorCode::InvalidParameter, "SINR is not a number");
    }
    const double t_slot = cfg.slot.slot_duration_s();
    const auto n_slots = static_cast<std::int64_t>(std::llround(cfg.duration_s / t_slot));
    const double end_time = static_cast<double>(n_slots) * t_slot;

    const McsEntry& mcs = select_mcs(sinr_db, cfg.mcs_table);
    const std::int64_t tb_bytes = tb_size(mcs, cfg.slot);
    if (tb_bytes < 1) {
        fail(ErrorCode::InvalidParameter, "transport block holds no payload");
    }

    MetricsAccumulator acc;
    acc.window_s = end_time - cfg.warmup_s;
    std::vector<PacketRecord> packets;
    RlcBuffer buffer(cfg.rlc_buffer_bytes);
    std::vector<char> reserved(static_cast<std::size_t>(n_slots), 0);
    std::uint64_t next_packet = 0;

    for (std::int64_t n = 0; n < n_slots; ++n) {
        const double slot_start = static_cast<double>(n) * t_slot;
        while (true) {
            const double t_gen = static_cast<double>(next_packet) * cfg.packet_interval_s;
            if (t_gen > slot_start + kTimeEps || t_gen >= end_time - kTimeEps) {
                break;
            }
            PacketRecord pkt;
            pkt.id = next_packet++;
            pkt.size = cfg.packet_bytes;
            pkt.bytes_remaining = cfg.packet_bytes;
            pkt.t_generated = t_gen;
            packets.push_back(pkt);
            buffer.enqueue(packets.back(), packets.size() - 1);
        }

        acc.sinr_trace.add(sinr_db);
        if (reserved[static_cast<std::size_t>(n)] || buffer.empty()) {
            continue;
        }

        const auto segments = buffer.dequeue(tb_bytes, packets);
        const HarqOutcome outcome = harq_run(sinr_db, mcs, cfg.harq_max_attempts, cfg.bler, rng);
        ++acc.tbs_sent;
        acc.harq_retransmissions += outcome.attempts - 1;
        if (!outcome.delivered) {
            ++acc.tbs_failed;
        }
        for (int a = 1; a < outcome.attempts; ++a) {
            const std::int64_t r = n + static_cast<std::int64_t>(a) * cfg.harq_rtt_slots;
            if (r < n_slots) {
                reserved[static_cast<std::size_t>(r)] = 1;
            }
        }
        const double done =
            static_cast<double>(n + static_cast<std::int64_t>(outcome.attempts - 1) * cfg.harq_rtt_slots + 1) * t_slot;
        for (const auto& seg : segments) {
            auto& pkt = packets[seg.handle];
            pkt.last_segment_done = std::max(pkt.last_segment_done, done);
            if (!outcome.delivered) {
                pkt.corrupted = true;
            }
        }
    }

    for (auto& pkt : packets) {
        const bool counted = pkt.t_generated >= cfg.warmup_s - kTimeEps;
        if (pkt.status == PacketStatus::Dropped) {
            if (counted) {
                ++acc.packets_tx;
                ++acc.drops_overflow;
            }
            continue;
        }
        if (pkt.bytes_remaining > 0 || pkt.last_segment_done > end_time + kTimeEps) {
            pkt.status = PacketStatus::Dropped;
            if (counted) {
                ++acc.packets_tx;
                ++acc.drops_residual;
            }
            continue;
        }
        if (pkt.corrupted) {
            pkt.status = PacketStatus::Dropped;
            if (counted) {
                ++acc.packets_tx;
                ++acc.drops_corrupted;
            }
            continue;
        }
        pkt.status = PacketStatus::Delivered;
        pkt.t_delivered = pkt.last_segment_done;
        if (counted) {
            ++acc.packets_tx;
            ++acc.packets_rx;
            acc.bits_delivered += 8 * pkt.size;
            acc.latencies_s.push_back(*pkt.t_delivered - pkt.t_generated);
        }
    }
    return acc;
}

double throughput_mbps(const MetricsAccumulator& acc, double duration_s)
{
    if (!(duration_s > 0.0)) {
        fail(ErrorCode::InvalidParameter, "throughput window must be positive");
    }
    return static_cast<double>(acc.bits_delivered) / duration_s / 1e6;
}

LatencyStats latency_stats(const MetricsAccumulator& acc)
{
    if (acc.latencies_s.empty()) {
        fail(ErrorCode::UndefinedLatency, "no packet was delivered, latency is undefined");
    }
    std::vector<double> sorted = acc.latencies_s;
    std::sort(sorted.begin(), sorted.end());
    LatencyStats s;
    s.count = sorted.size();
    double sum = 0.0;
    for (double v : sorted) {
        sum += v;
    }
    s.mean_ms = sum / static_cast<double>(sorted.size()) * 1e3;
    s.p50_ms = percentile_ms(sorted, 0.50);
    s.p95_ms = percentile_ms(sorted, 0.95);
    s.max_ms = sorted.back() * 1e3;
    return s;
}

double packet_drop_rate(const MetricsAccumulator& acc)
{
    if (acc.packets_tx <= 0) {
        fail(ErrorCode::InvalidParameter, "no packets were transmitted");
    }
    return 100.0 * static_cast<double>(acc.packets_tx - acc.packets_rx) / static_cast<double>(acc.packets_tx);
}

RealizationConfig RealizationConfig::defaults(Scenario scenario, ChannelModel model)
{
    const auto d = scenario_defaults(scenario, model);
    RealizationConfig cfg;
    cfg.params = d.params;
    cfg.large_scale = d.large_scale;
    cfg.rx_array = AntennaArray::uniform_planar(4, 4, 0.5, std::numbers::pi);
    cfg.link.slot.bandwidth_hz = cfg.params.bandwidth_hz;
    return cfg;
}

void RealizationConfig::validate() const
{
    params.validate();
    large_scale.validate();
    tx_array.validate();
    rx_array.validate();
    link.validate();
    if (!(foliage_db_per_m >= 0.0 && foliage_db_per_m <= 10.0)) {
        fail(ErrorCode::InvalidParameter, "foliage attenuation must lie in [0, 10] dB/m");
    }
    if (!std::isfinite(noise_figure_db)) {
        fail(ErrorCode::InvalidParameter, "noise figure must be finite");
    }
}

RealizationResult run_realization(const RealizationConfig& cfg, std::uint64_t seed)
{
    cfg.validate();
    const ScenarioParams& p = cfg.params;
    Rng rng(seed);
    RealizationResult r;
    r.seed = seed;

    r.los_probability = los_probability(los_model_for(p.scenario, p.channel_model, p.h_ue_m), p.distance_2d_m);
    r.condition = sample_condition(r.los_probability, p.condition_mode, rng);

    ExtraLosses extra;
    extra.o2i_db = o2i_loss_db(cfg.o2i_mode, p.frequency_ghz, rng);
    if (cfg.foliage_db_per_m > 0.0) {
        const double depth = cfg.foliage_depth_m >= 0.0 ? cfg.foliage_depth_m : uniform(rng, 0.0, p.distance_2d_m);
        extra.foliage_db = foliage_loss_db(cfg.foliage_db_per_m, depth);
    }
    if (p.channel_model == ChannelModel::NYUSIM) {
        const double shadow = gaussian(rng, 0.0, cfg.large_scale.sigma_db(r.condition, p.frequency_ghz));
        r.path_loss = path_loss_ci(p, cfg.large_scale, r.condition, shadow, extra);
    } else {
        r.path_loss = path_loss_3gpp(p, r.condition, rng, extra);
    }

    MultipathSet mpcs = generate_multipaths(p, r.condition, -r.path_loss.total_db, rng);
    r.multipath_count = mpcs.paths.size();
    const ChannelMatrix h = assemble_channel_matrix(mpcs.paths, cfg.tx_array, cfg.rx_array, p.frequency_ghz);
    r.bf_gain = beamform_gain(h);
    r.sinr_db = compute_sinr(p.tx_power_dbm, r.bf_gain, cfg.noise_figure_db, p.bandwidth_hz);

    LinkSimConfig link = cfg.link;
    link.slot.bandwidth_hz = p.bandwidth_hz;
    const McsEntry& mcs = select_mcs(r.sinr_db, link.mcs_table);
    r.mcs_index = mcs.index;
    r.tb_bytes = tb_size(mcs, link.slot);
    r.metrics = simulate_link(link, r.sinr_db, rng);
    r.throughput_mbps = throughput_mbps(r.metrics, r.metrics.window_s);
    if (!r.metrics.latencies_s.empty()) {
        r.mean_latency_ms = latency_stats(r.metrics).mean_ms;
    }
    r.drop_pct = r.metrics.packets_tx > 0 ? packet_drop_rate(r.metrics) : 0.0;
    if (cfg.keep_multipaths) {
        r.multipaths = std::move(mpcs.paths);
    }
    return r;
}

} // namespace mmwsim
