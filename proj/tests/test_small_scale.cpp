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

#include <algorithm>
#include <cmath>
#include <array>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "core/error.hpp"
#include "core/large_scale.hpp"
#include "core/small_scale.hpp"

using namespace mmwsim;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

ScenarioParams params_for(Scenario s, ChannelModel m)
{
    auto p = scenario_defaults(s, m).params;
    if (s == Scenario::InH) {
        p.distance_2d_m = 30.0;
    }
    return p;
}

Multipath single_path(double amplitude, double aod_az, double aod_zen, double aoa_az, double aoa_zen)
{
    Multipath mp;
    mp.amplitude = amplitude;
    mp.aod_az = aod_az;
    mp.aod_zen = aod_zen;
    mp.aoa_az = aoa_az;
    mp.aoa_zen = aoa_zen;
    mp.phase = {0.3, 1.1, 2.2, 4.0};
    return mp;
}

double lambda_at(double f_ghz)
{
    return kSpeedOfLight / (f_ghz * 1e9);
}

} // namespace

TEST_SUITE("small-scale")
{
    TEST_CASE("generated power matches the requested total for every cell")
    {
        for (auto model : {ChannelModel::NYUSIM, ChannelModel::SCM3GPP}) {
            for (auto s : kAllScenarios) {
                for (auto c : {LinkCondition::LOS, LinkCondition::NLOS}) {
                    Rng rng(1234);
                    const auto p = params_for(s, model);
                    for (double target_db : {-120.0, -85.5, 0.0}) {
                        const auto set = generate_multipaths(p, c, target_db, rng);
                        REQUIRE_FALSE(set.paths.empty());
                        const double want = std::pow(10.0, target_db / 10.0);
                        CHECK(std::abs(set.total_power() - want) <= 1e-12 * want);
                    }
                }
            }
        }
    }

    TEST_CASE("multipath fields lie in their documented ranges")
    {
        for (auto model : {ChannelModel::NYUSIM, ChannelModel::SCM3GPP}) {
            for (auto s : kAllScenarios) {
                Rng rng(77);
                const auto set = generate_multipaths(params_for(s, model), LinkCondition::NLOS, -100.0, rng);
                double prev_delay = -1.0;
                for (const auto& mp : set.paths) {
                    CHECK(mp.delay_s >= 0.0);
                    CHECK(mp.delay_s >= prev_delay);
                    prev_delay = mp.delay_s;
                    CHECK(mp.amplitude > 0.0);
                    for (double zen : {mp.aoa_zen, mp.aod_zen}) {
                        CHECK(zen >= 0.0);
                        CHECK(zen <= kPi);
                    }
                    for (double az : {mp.aoa_az, mp.aod_az}) {
                        CHECK(az >= 0.0);
                        CHECK(az < kTwoPi);
                    }
                    for (double ph : mp.phase) {
                        CHECK(ph > 0.0);
                        CHECK(ph < kTwoPi);
                    }
                    CHECK(mp.cluster >= 0);
                    CHECK(static_cast<std::size_t>(mp.cluster) < set.clusters.size());
                }
            }
        }
    }

    TEST_CASE("cluster bookkeeping covers every path exactly once")
    {
        Rng rng(5);
        const auto set = generate_multipaths(params_for(Scenario::UMi, ChannelModel::NYUSIM), LinkCondition::NLOS,
                                             -90.0, rng);
        std::vector<int> seen(set.paths.size(), 0);
        double fractions = 0.0;
        for (std::size_t c = 0; c < set.clusters.size(); ++c) {
            fractions += set.clusters[c].power_fraction;
            for (auto idx : set.clusters[c].members) {
                REQUIRE(idx < set.paths.size());
                CHECK(set.paths[idx].cluster == static_cast<int>(c));
                ++seen[idx];
            }
        }
        CHECK(fractions == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::all_of(seen.begin(), seen.end(), [](int v) { return v == 1; }));

        std::size_t lobe_members = 0;
        for (const auto& l : set.aod_lobes) {
            lobe_members += l.members.size();
        }
        CHECK(lobe_members == set.paths.size());
    }

    TEST_CASE("generation is deterministic in the seed")
    {
        for (auto model : {ChannelModel::NYUSIM, ChannelModel::SCM3GPP}) {
            const auto p = params_for(Scenario::UMa, model);
            Rng a(2024), b(2024), c(2025);
            const auto sa = generate_multipaths(p, LinkCondition::NLOS, -95.0, a);
            const auto sb = generate_multipaths(p, LinkCondition::NLOS, -95.0, b);
            const auto sc = generate_multipaths(p, LinkCondition::NLOS, -95.0, c);
            REQUIRE(sa.paths.size() == sb.paths.size());
            for (std::size_t i = 0; i < sa.paths.size(); ++i) {
                CHECK(sa.paths[i].delay_s == sb.paths[i].delay_s);
                CHECK(sa.paths[i].amplitude == sb.paths[i].amplitude);
                CHECK(sa.paths[i].aoa_az == sb.paths[i].aoa_az);
                CHECK(sa.paths[i].phase == sb.paths[i].phase);
            }
            bool differs = sa.paths.size() != sc.paths.size();
            for (std::size_t i = 0; !differs && i < sa.paths.size(); ++i) {
                differs = sa.paths[i].amplitude != sc.paths[i].amplitude;
            }
            CHECK(differs);
        }
    }

    TEST_CASE("LOS direct path arrives first along the geometric direction")
    {
        for (auto model : {ChannelModel::NYUSIM, ChannelModel::SCM3GPP}) {
            const auto p = params_for(Scenario::UMi, model);
            const auto los = los_angles(p);
            int strongest = 0;
            constexpr int kDraws = 200;
            for (int i = 0; i < kDraws; ++i) {
                Rng rng(900 + i);
                const auto set = generate_multipaths(p, LinkCondition::LOS, -80.0, rng);
                const auto& first = set.paths.front();
                // Delays are absolute, so the direct path arrives after the geometric flight time.
                CHECK(first.delay_s == doctest::Approx(p.distance_3d_m() / kSpeedOfLight).epsilon(1e-12));
                for (const auto& mp : set.paths) {
                    CHECK(mp.delay_s >= first.delay_s);
                }
                CHECK(first.aod_zen == doctest::Approx(los.aod_zen).epsilon(1e-12));
                CHECK(first.aoa_zen == doctest::Approx(los.aoa_zen).epsilon(1e-12));
                CHECK(std::isinf(first.xpd_theta_phi));
                const auto top = std::max_element(set.paths.begin(), set.paths.end(),
                                                  [](const Multipath& a, const Multipath& b) {
                                                      return a.power() < b.power();
                                                  });
                strongest += top == set.paths.begin();
            }
            CHECK(strongest >= static_cast<int>(0.9 * kDraws));
        }
    }

    TEST_CASE("LOS geometry angles")
    {
        ScenarioParams p;
        p.distance_2d_m = 100.0;
        p.h_gnb_m = 11.6;
        p.h_ue_m = 1.6;
        const auto a = los_angles(p);
        const double tilt = std::atan(10.0 / 100.0);
        CHECK(a.aod_az == 0.0);
        CHECK(a.aoa_az == doctest::Approx(kPi));
        CHECK(a.aod_zen == doctest::Approx(kPi / 2.0 + tilt).epsilon(1e-14));
        CHECK(a.aoa_zen == doctest::Approx(kPi / 2.0 - tilt).epsilon(1e-14));
    }

    TEST_CASE("phases are uniform on (0, 2pi)")
    {
        Rng rng(31);
        std::array<int, 4> quarter{};
        int n = 0;
        double sum = 0.0;
        const auto p = params_for(Scenario::UMi, ChannelModel::NYUSIM);
        while (n < 20000) {
            const auto set = generate_multipaths(p, LinkCondition::NLOS, -90.0, rng);
            for (const auto& mp : set.paths) {
                for (double ph : mp.phase) {
                    sum += ph;
                    ++quarter[std::min(3, static_cast<int>(ph / (kTwoPi / 4.0)))];
                    ++n;
                }
            }
        }
        CHECK(sum / n == doctest::Approx(kPi).epsilon(0.02));
        for (int q : quarter) {
            CHECK(static_cast<double>(q) / n == doctest::Approx(0.25).epsilon(0.05));
        }
    }

    TEST_CASE("non-finite power target is rejected")
    {
        Rng rng(1);
        const auto p = params_for(Scenario::UMi, ChannelModel::NYUSIM);
        CHECK_THROWS_AS(generate_multipaths(p, LinkCondition::NLOS, std::nan(""), rng), Error);
    }

    TEST_CASE("cluster spread scaling tables")
    {
        CHECK(scm_c_phi_nlos(12) == 1.146);
        CHECK(scm_c_phi_nlos(20) == 1.289);
        CHECK(scm_c_theta_nlos(12) == 1.104);
        CHECK(scm_c_theta_nlos(19) == 1.184);
        const auto& off = scm_ray_offsets();
        double sum = 0.0;
        for (double o : off) {
            sum += o;
        }
        CHECK(std::abs(sum) < 1e-12);
        CHECK(std::find(off.begin(), off.end(), 2.1551) != off.end());
        CHECK(std::find(off.begin(), off.end(), -0.0447) != off.end());
    }

    TEST_CASE("single element link reproduces the path amplitude")
    {
        const auto one = AntennaArray::uniform_planar(1, 1);
        auto mp = single_path(0.37, 0.4, 1.2, 2.0, 1.7);
        const auto h = assemble_channel_matrix({mp}, one, one, 28.0);
        REQUIRE(h.rx_elements() == 1);
        REQUIRE(h.tx_elements() == 1);
        CHECK(std::abs(h.at(0, 0, 0)) == doctest::Approx(0.37).epsilon(1e-14));
        CHECK(std::arg(h.at(0, 0, 0)) == doctest::Approx(0.3).epsilon(1e-14));
    }

    TEST_CASE("broadside arrival is in phase on every element")
    {
        const auto tx = AntennaArray::uniform_planar(1, 4);
        const auto rx = AntennaArray::uniform_planar(1, 1);
        const auto h = assemble_channel_matrix({single_path(1.0, 0.0, kPi / 2.0, 0.0, kPi / 2.0)}, tx, rx, 28.0);
        for (std::size_t s = 1; s < 4; ++s) {
            CHECK(std::abs(h.at(0, s, 0) - h.at(0, 0, 0)) < 1e-12);
        }
    }

    TEST_CASE("two-element phase progression follows the path azimuth")
    {
        const auto tx = AntennaArray::uniform_planar(1, 2);
        const auto rx = AntennaArray::uniform_planar(1, 1);
        for (double az : {0.2, 0.7, 1.3, 2.9}) {
            const auto h = assemble_channel_matrix({single_path(1.0, az, kPi / 2.0, 0.0, kPi / 2.0)}, tx, rx, 60.0);
            const auto ratio = h.at(0, 1, 0) / h.at(0, 0, 0);
            const auto want = std::polar(1.0, kPi * std::sin(az));
            CHECK(std::abs(ratio - want) < 1e-12);
        }
    }

    TEST_CASE("channel coefficients match a direct evaluation")
    {
        Rng rng(404);
        const auto p = params_for(Scenario::UMa, ChannelModel::NYUSIM);
        const auto set = generate_multipaths(p, LinkCondition::NLOS, -90.0, rng);
        const auto tx = AntennaArray::uniform_planar(8, 8);
        const auto rx = AntennaArray::uniform_planar(4, 4, 0.5, kPi);
        const auto h = assemble_channel_matrix(set.paths, tx, rx, p.frequency_ghz);

        const double lambda = lambda_at(p.frequency_ghz);
        const double d = 0.5 * lambda;
        double worst = 0.0;
        for (std::size_t m = 0; m < set.paths.size(); ++m) {
            const auto& mp = set.paths[m];
            const double rtx[3] = {std::sin(mp.aod_zen) * std::cos(mp.aod_az), std::sin(mp.aod_zen) * std::sin(mp.aod_az),
                                   std::cos(mp.aod_zen)};
            const double rrx[3] = {std::sin(mp.aoa_zen) * std::cos(mp.aoa_az), std::sin(mp.aoa_zen) * std::sin(mp.aoa_az),
                                   std::cos(mp.aoa_zen)};
            for (int ur = 0; ur < 4; ++ur) {
                for (int uc = 0; uc < 4; ++uc) {
                    // A panel turned by pi mirrors the column axis.
                    const double prx[3] = {0.0, -uc * d, ur * d};
                    const double phase_rx = kTwoPi / lambda * (rrx[0] * prx[0] + rrx[1] * prx[1] + rrx[2] * prx[2]);
                    for (int sr = 0; sr < 8; ++sr) {
                        for (int sc = 0; sc < 8; ++sc) {
                            const double ptx[3] = {0.0, sc * d, sr * d};
                            const double phase_tx =
                                kTwoPi / lambda * (rtx[0] * ptx[0] + rtx[1] * ptx[1] + rtx[2] * ptx[2]);
                            const std::complex<double> want =
                                mp.amplitude * std::exp(std::complex<double>(0.0, mp.phase[0] + phase_rx + phase_tx));
                            const auto got = h.at(static_cast<std::size_t>(ur * 4 + uc),
                                                  static_cast<std::size_t>(sr * 8 + sc), m);
                            worst = std::max(worst, std::abs(got - want) / mp.amplitude);
                        }
                    }
                }
            }
            CHECK(h.delays_s()[m] == mp.delay_s);
        }
        CHECK(worst < 1e-12);
    }

    TEST_CASE("single path beamforming gain is the full array gain")
    {
        const auto tx = AntennaArray::uniform_planar(8, 8);
        const auto rx = AntennaArray::uniform_planar(4, 4, 0.5, kPi);
        const double alpha = 2.5e-5;
        const auto h = assemble_channel_matrix({single_path(alpha, 0.3, 1.4, 3.5, 1.7)}, tx, rx, 28.0);
        CHECK(beamform_gain(h) == doctest::Approx(16.0 * 64.0 * alpha * alpha).epsilon(1e-12));
    }

    TEST_CASE("beamforming gain ignores a common phase rotation")
    {
        Rng rng(8);
        auto set = generate_multipaths(params_for(Scenario::UMi, ChannelModel::SCM3GPP), LinkCondition::NLOS, -70.0,
                                       rng);
        const auto tx = AntennaArray::uniform_planar(8, 8);
        const auto rx = AntennaArray::uniform_planar(4, 4, 0.5, kPi);
        const double g0 = beamform_gain(assemble_channel_matrix(set.paths, tx, rx, 28.0));
        for (auto& mp : set.paths) {
            mp.phase[0] = std::fmod(mp.phase[0] + 1.234, kTwoPi);
        }
        const double g1 = beamform_gain(assemble_channel_matrix(set.paths, tx, rx, 28.0));
        CHECK(g1 == doctest::Approx(g0).epsilon(1e-10));
        CHECK(g0 > 0.0);
        CHECK(g0 <= 16.0 * 64.0 * set.total_power() * (1.0 + 1e-12));
    }

    TEST_CASE("large cross-polar discrimination converges to the co-polar limit")
    {
        auto tx = AntennaArray::uniform_planar(1, 1);
        auto rx = tx;
        tx.polarization_slant_rad = kPi / 4.0;
        rx.polarization_slant_rad = kPi / 4.0;
        auto mp = single_path(1.0, 0.0, kPi / 2.0, kPi, kPi / 2.0);
        mp.xpd_theta_phi = mp.xpd_phi_theta = std::numeric_limits<double>::infinity();
        const auto limit = assemble_channel_matrix({mp}, tx, rx, 28.0).at(0, 0, 0);
        // Only the two co-polar terms survive: 0.5 (e^{j phi_tt} + e^{j phi_pp}).
        CHECK(std::abs(limit - 0.5 * (std::polar(1.0, 0.3) + std::polar(1.0, 4.0))) < 1e-14);
        mp.xpd_theta_phi = mp.xpd_phi_theta = 1e14;
        const auto finite = assemble_channel_matrix({mp}, tx, rx, 28.0).at(0, 0, 0);
        CHECK(std::abs(finite - limit) < 1e-6);
    }

    TEST_CASE("channel assembly rejects bad inputs")
    {
        const auto a = AntennaArray::uniform_planar(2, 2);
        try {
            assemble_channel_matrix({}, a, a, 28.0);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::InvalidArray);
        }
        AntennaArray bad = a;
        bad.rows = 0;
        CHECK_THROWS_AS(assemble_channel_matrix({single_path(1, 0, 1, 0, 1)}, bad, a, 28.0), Error);
        CHECK_THROWS_AS(AntennaArray::uniform_planar(1, 1, 0.0), Error);
        CHECK_THROWS_AS(assemble_channel_matrix({single_path(1, 0, 1, 0, 1)}, a, a, 0.0), Error);
    }

    TEST_CASE("MPC table export")
    {
        std::ostringstream os;
        auto mp = single_path(0.1, 0.0, kPi / 2.0, kPi, kPi / 2.0);
        mp.delay_s = 12.5e-9;
        write_mpc_csv(os, {mp});
        std::istringstream is(os.str());
        std::string header, row;
        std::getline(is, header);
        std::getline(is, row);
        CHECK(header == "m,delay_ns,power_db,aoa_az_deg,aoa_zen_deg,aod_az_deg,aod_zen_deg");
        CHECK(row == "1,12.5,-20,180,90,0,90");
    }
}
