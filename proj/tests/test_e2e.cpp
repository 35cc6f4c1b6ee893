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

#include <doctest.h>

#include <cmath>
#include <limits>

#include "core/error.hpp"
#include "core/e2e.hpp"

using namespace mmwsim;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// One-entry table whose transport block carries `tb_bytes` per 0.25 ms slot.
LinkSimConfig fixed_rate(double tb_bytes)
{
    LinkSimConfig cfg;
    const SlotConfig s;
    const double bits_per_se = s.prb_count() * 12.0 * s.symbols_per_slot * (1.0 - s.overhead);
    McsEntry e;
    e.index = 0;
    e.modulation_order = 2;
    e.spectral_efficiency = (tb_bytes + 0.5) * 8.0 / bits_per_se;
    e.code_rate = e.spectral_efficiency / 2.0;
    e.min_sinr_db = -100.0;
    cfg.mcs_table = {e};
    return cfg;
}

void check_conservation(const MetricsAccumulator& acc)
{
    CHECK(acc.packets_tx == acc.packets_rx + acc.drops());
    CHECK(acc.bits_delivered == acc.packets_rx * 8 * 62500);
    CHECK(acc.latencies_s.size() == static_cast<std::size_t>(acc.packets_rx));
    CHECK(acc.tbs_failed <= acc.tbs_sent);
}

} // namespace

TEST_SUITE("e2e-sim")
{
    TEST_CASE("error-free link carries the full offered load")
    {
        LinkSimConfig cfg;
        Rng rng(1);
        const auto acc = simulate_link(cfg, kInf, rng);
        CHECK(acc.packets_tx == 900);
        CHECK(acc.packets_rx == 900);
        CHECK(acc.drops() == 0);
        CHECK(acc.harq_retransmissions == 0);
        CHECK(throughput_mbps(acc, 9.0) == doctest::Approx(50.0).epsilon(1e-12));
        const auto lat = latency_stats(acc);
        CHECK(lat.mean_ms == doctest::Approx(1.25).epsilon(1e-9));
        CHECK(lat.max_ms == doctest::Approx(1.25).epsilon(1e-9));
        CHECK(packet_drop_rate(acc) == 0.0);
        CHECK(acc.sinr_trace.slots == 36000);
        check_conservation(acc);
    }

    TEST_CASE("lowest MCS saturates the buffer")
    {
        LinkSimConfig cfg;
        Rng rng(2);
        const auto acc = simulate_link(cfg, kInf, rng);
        cfg.mcs_table = {default_mcs_table().front()};
        cfg.mcs_table[0].min_sinr_db = -100.0;
        Rng rng2(2);
        const auto slow = simulate_link(cfg, 1e3, rng2);
        CHECK(phy_throughput_mbps(static_cast<double>(tb_size(cfg.mcs_table[0], cfg.slot)), cfg.slot) ==
              doctest::Approx(16.896));
        CHECK(packet_drop_rate(slow) == doctest::Approx(68.0).epsilon(5.0 / 68.0));
        CHECK(throughput_mbps(slow, 9.0) < 16.9);
        CHECK(slow.drops_overflow > 0);
        CHECK(latency_stats(slow).mean_ms > latency_stats(acc).mean_ms);
        check_conservation(slow);
    }

    TEST_CASE("half-rate link drops about half the packets")
    {
        auto cfg = fixed_rate(781.0);
        Rng rng(3);
        const auto acc = simulate_link(cfg, 0.0, rng);
        CHECK(packet_drop_rate(acc) == doctest::Approx(50.0).epsilon(0.1));
        CHECK(throughput_mbps(acc, 9.0) == doctest::Approx(25.0).epsilon(0.05));
        check_conservation(acc);
    }

    TEST_CASE("buffer overflow needs a small buffer")
    {
        auto cfg = fixed_rate(781.0);
        cfg.rlc_buffer_bytes = 62500;
        Rng rng(3);
        const auto acc = simulate_link(cfg, 0.0, rng);
        CHECK(acc.drops_overflow > 0);
        // A one-packet buffer bounds queueing delay to a single packet service time.
        CHECK(latency_stats(acc).max_ms < 2.0 * 62500.0 / 781.0 * 0.25 + 1.0);
        check_conservation(acc);
    }

    TEST_CASE("throughput arithmetic")
    {
        MetricsAccumulator acc;
        acc.bits_delivered = 450'000'000;
        CHECK(throughput_mbps(acc, 9.0) == doctest::Approx(50.0).epsilon(1e-15));
        acc.bits_delivered = 0;
        CHECK(throughput_mbps(acc, 9.0) == 0.0);
        CHECK_THROWS_AS(throughput_mbps(acc, 0.0), Error);
    }

    TEST_CASE("latency is undefined without deliveries")
    {
        MetricsAccumulator acc;
        try {
            latency_stats(acc);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::UndefinedLatency);
        }
        CHECK_THROWS_AS(packet_drop_rate(acc), Error);
    }

    TEST_CASE("latency percentiles")
    {
        MetricsAccumulator acc;
        for (int i = 1; i <= 20; ++i) {
            acc.latencies_s.push_back(i * 1e-3);
        }
        const auto s = latency_stats(acc);
        CHECK(s.count == 20);
        CHECK(s.mean_ms == doctest::Approx(10.5));
        CHECK(s.p50_ms == doctest::Approx(10.0));
        CHECK(s.p95_ms == doctest::Approx(19.0));
        CHECK(s.max_ms == doctest::Approx(20.0));
    }

    TEST_CASE("the slot engine is deterministic in its seed")
    {
        LinkSimConfig cfg;
        Rng a(77), b(77);
        const auto x = simulate_link(cfg, 6.3, a);
        const auto y = simulate_link(cfg, 6.3, b);
        CHECK(x.bits_delivered == y.bits_delivered);
        CHECK(x.tbs_failed == y.tbs_failed);
        CHECK(x.latencies_s == y.latencies_s);
        CHECK(x.harq_retransmissions > 0);
        check_conservation(x);
    }

    TEST_CASE("more HARQ attempts never lose more packets")
    {
        double prev = 101.0;
        for (int attempts : {1, 2, 3, 4}) {
            LinkSimConfig cfg;
            cfg.harq_max_attempts = attempts;
            double drops = 0.0;
            for (int s = 0; s < 5; ++s) {
                Rng rng(500 + s);
                drops += packet_drop_rate(simulate_link(cfg, 6.0, rng));
            }
            drops /= 5.0;
            CHECK(drops <= prev);
            prev = drops;
        }
    }

    TEST_CASE("retransmissions delay completion by the round-trip time")
    {
        LinkSimConfig cfg;
        cfg.duration_s = 0.01;
        cfg.packet_bytes = 100;
        cfg.bler.harq_bonus_db = 100.0;
        Rng rng(4);
        // Far below the only entry's midpoint the first attempt always fails and the second succeeds.
        cfg.mcs_table = {default_mcs_table()[0]};
        const auto acc = simulate_link(cfg, -40.0, rng);
        REQUIRE(acc.packets_rx == 1);
        CHECK(acc.harq_retransmissions == 1);
        CHECK(latency_stats(acc).mean_ms == doctest::Approx((4.0 + 1.0) * 0.25).epsilon(1e-9));
    }

    TEST_CASE("warmup excludes early packets")
    {
        LinkSimConfig cfg;
        cfg.warmup_s = 1.0;
        Rng rng(5);
        const auto acc = simulate_link(cfg, kInf, rng);
        CHECK(acc.packets_tx == 800);
        CHECK(acc.window_s == doctest::Approx(8.0));
        CHECK(throughput_mbps(acc, acc.window_s) == doctest::Approx(50.0).epsilon(1e-12));
        cfg.warmup_s = 9.0;
        CHECK_THROWS_AS(simulate_link(cfg, kInf, rng), Error);
    }

    TEST_CASE("RLC buffer segmentation")
    {
        std::vector<PacketRecord> packets(2);
        for (auto& p : packets) {
            p.size = p.bytes_remaining = 1000;
        }
        RlcBuffer buf(1500);
        CHECK(buf.enqueue(packets[0], 0));
        CHECK_FALSE(buf.enqueue(packets[1], 1));
        CHECK(packets[1].status == PacketStatus::Dropped);
        auto segs = buf.dequeue(600, packets);
        REQUIRE(segs.size() == 1);
        CHECK(segs[0].bytes == 600);
        CHECK(buf.occupancy() == 400);
        CHECK_FALSE(buf.empty());
        segs = buf.dequeue(600, packets);
        CHECK(segs[0].bytes == 400);
        CHECK(buf.empty());
        CHECK_THROWS_AS(RlcBuffer(0), Error);
    }

    TEST_CASE("configuration validation")
    {
        LinkSimConfig cfg;
        cfg.harq_max_attempts = 0;
        CHECK_THROWS_AS(cfg.validate(), Error);
        cfg = LinkSimConfig{};
        cfg.packet_interval_s = 0.0;
        CHECK_THROWS_AS(cfg.validate(), Error);
        Rng rng(1);
        CHECK_THROWS_AS(simulate_link(LinkSimConfig{}, std::nan(""), rng), Error);
    }

    TEST_CASE("one realization end to end")
    {
        auto cfg = RealizationConfig::defaults(Scenario::UMi, ChannelModel::NYUSIM);
        cfg.params.condition_mode = ConditionMode::FixedLOS;
        cfg.keep_multipaths = true;
        const auto a = run_realization(cfg, 42);
        const auto b = run_realization(cfg, 42);
        CHECK(a.condition == LinkCondition::LOS);
        CHECK(a.sinr_db == b.sinr_db);
        CHECK(a.metrics.latencies_s == b.metrics.latencies_s);
        CHECK(a.multipath_count == a.multipaths.size());
        CHECK(a.path_loss.total_db == doctest::Approx(a.path_loss.component_sum()));
        const double expected_sinr = compute_sinr(cfg.params.tx_power_dbm, a.bf_gain, 5.0, cfg.params.bandwidth_hz);
        CHECK(a.sinr_db == doctest::Approx(expected_sinr).epsilon(1e-12));
        CHECK(a.mcs_index == select_mcs(a.sinr_db, default_mcs_table()).index);
        CHECK(a.throughput_mbps <= 50.0 + 1e-9);
        CHECK(a.drop_pct >= 0.0);

        cfg.params.condition_mode = ConditionMode::FixedNLOS;
        const auto n = run_realization(cfg, 42);
        CHECK(n.condition == LinkCondition::NLOS);
    }

    TEST_CASE("foliage and building losses lower the SINR")
    {
        auto cfg = RealizationConfig::defaults(Scenario::UMa, ChannelModel::SCM3GPP);
        cfg.params.condition_mode = ConditionMode::FixedNLOS;
        const auto base = run_realization(cfg, 9);
        cfg.foliage_db_per_m = 0.4;
        cfg.foliage_depth_m = 20.0;
        const auto leafy = run_realization(cfg, 9);
        CHECK(leafy.path_loss.fl_db == doctest::Approx(8.0));
        CHECK(leafy.sinr_db == doctest::Approx(base.sinr_db - 8.0).epsilon(1e-9));
        cfg.foliage_db_per_m = 11.0;
        CHECK_THROWS_AS(run_realization(cfg, 9), Error);
    }
}
