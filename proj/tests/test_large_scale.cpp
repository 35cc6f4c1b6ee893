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
#include <numbers>
#include <vector>

#include "core/error.hpp"
#include "core/large_scale.hpp"

using namespace mmwsim;

namespace {

// Unsquared exponential-blend LOS expression, coded independently of the library.
double blend(double d1, double d2, double d)
{
    const double near = d1 / d < 1.0 ? d1 / d : 1.0;
    return near * (1.0 - std::exp(-d / d2)) + std::exp(-d / d2);
}

double sample_std(const std::vector<double>& v)
{
    double m = 0.0;
    for (double x : v) {
        m += x;
    }
    m /= static_cast<double>(v.size());
    double s = 0.0;
    for (double x : v) {
        s += (x - m) * (x - m);
    }
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

ScenarioParams at(Scenario s, double d)
{
    auto p = scenario_defaults(s, ChannelModel::SCM3GPP).params;
    p.distance_2d_m = d;
    return p;
}

} // namespace

TEST_SUITE("large-scale")
{
    TEST_CASE("NYU squared LOS probability goldens")
    {
        const auto umi = LosProbabilityModel::nyu_umi();
        for (double d : {0.5, 1.0, 10.0, 22.0}) {
            CHECK(los_probability(umi, d) == 1.0);
        }
        CHECK(std::abs(los_probability(umi, 100.0) - 0.256994210531194166519893) < 1e-12);
        CHECK(std::abs(los_probability(LosProbabilityModel::nyu_uma(1.6), 100.0) - 0.394646727116598541634) < 1e-12);
    }

    TEST_CASE("NYU squared model is the square of the unsquared blend")
    {
        for (double d = 0.25; d < 2000.0; d *= 1.07) {
            const double umi = blend(22.0, 100.0, d);
            const double uma = blend(20.0, 160.0, d);
            CHECK(los_probability(LosProbabilityModel::nyu_umi(), d) == doctest::Approx(umi * umi).epsilon(1e-13));
            CHECK(los_probability(LosProbabilityModel::nyu_uma(1.6), d) == doctest::Approx(uma * uma).epsilon(1e-13));
        }
    }

    TEST_CASE("3GPP and 5GCM LOS probability goldens")
    {
        CHECK(los_probability(LosProbabilityModel::tr38901(Scenario::UMi, 1.6), 100.0) ==
              doctest::Approx(0.230984749698135375).epsilon(1e-12));
        CHECK(los_probability(LosProbabilityModel::tr38901(Scenario::UMa, 1.6), 100.0) ==
              doctest::Approx(0.347670836844231201).epsilon(1e-12));
        CHECK(los_probability(LosProbabilityModel::tr38901(Scenario::RMa, 1.6), 100.0) ==
              doctest::Approx(0.913931185271228186).epsilon(1e-12));
        CHECK(los_probability(LosProbabilityModel::tr38901(Scenario::RMa, 1.6), 5.0) == 1.0);
        const auto inh = LosProbabilityModel::five_gcm_inh();
        CHECK(los_probability(inh, 1.0) == 1.0);
        CHECK(los_probability(inh, 3.0) == doctest::Approx(0.681827406097749410).epsilon(1e-12));
        CHECK(los_probability(inh, 20.0) == doctest::Approx(0.211496947624328828).epsilon(1e-12));
    }

    TEST_CASE("UMa height correction only applies to tall UEs")
    {
        CHECK(uma_correction(100.0, 1.6) == 0.0);
        CHECK(uma_correction(100.0, 13.0) == 0.0);
        const double c = std::pow(0.5, 1.5) * 1.25 * 1.0 * std::exp(-100.0 / 150.0);
        CHECK(uma_correction(100.0, 18.0) == doctest::Approx(c).epsilon(1e-14));
    }

    TEST_CASE("LOS probability stays in [0,1] and never increases with distance")
    {
        std::vector<LosProbabilityModel> models = {LosProbabilityModel::nyu_umi(), LosProbabilityModel::nyu_uma(1.6),
                                                   LosProbabilityModel::five_gcm_inh()};
        for (auto s : kAllScenarios) {
            models.push_back(LosProbabilityModel::tr38901(s, 1.6));
        }
        for (const auto& m : models) {
            double prev = 1.0;
            for (double d = 1e-3; d <= 1e5; d *= 1.05) {
                const double p = los_probability(m, d);
                CHECK(p >= 0.0);
                CHECK(p <= 1.0);
                CHECK(p <= prev + 1e-15);
                prev = p;
            }
        }
    }

    TEST_CASE("LOS probability rejects non-positive distance")
    {
        try {
            los_probability(LosProbabilityModel::nyu_umi(), 0.0);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::InvalidDistance);
        }
        CHECK_THROWS_AS(los_probability(LosProbabilityModel::nyu_umi(), -5.0), Error);
    }

    TEST_CASE("free-space loss at one metre")
    {
        CHECK(fspl_1m_db(28.0) == doctest::Approx(61.3909438487277582).epsilon(1e-13));
        CHECK(fspl_1m_db(140.0) == doctest::Approx(75.3703439354481343).epsilon(1e-13));
        const double unity_ghz = kSpeedOfLight / (4.0 * std::numbers::pi) / 1e9;
        CHECK(std::abs(fspl_1m_db(unity_ghz)) < 1e-12);
        CHECK_THROWS_AS(fspl_1m_db(0.0), Error);
    }

    TEST_CASE("close-in path loss composition")
    {
        ScenarioParams p;
        LargeScaleParamSet lsp;
        lsp.ple_los = {2.0, 2.0};
        lsp.ple_nlos = {3.2, 3.2};
        lsp.sigma_los_db = {4.0, 4.0};
        lsp.sigma_nlos_db = {7.0, 7.0};

        auto pl = path_loss_ci(p, lsp, LinkCondition::NLOS, 0.0);
        CHECK(pl.total_db == doctest::Approx(61.3909438487277582 + 64.0).epsilon(1e-13));
        CHECK(pl.at_db == 0.0);
        pl = path_loss_ci(p, lsp, LinkCondition::NLOS, 8.0);
        CHECK(pl.total_db == doctest::Approx(61.3909438487277582 + 72.0).epsilon(1e-13));
        CHECK(pl.total_db == doctest::Approx(pl.component_sum()).epsilon(1e-15));

        p.distance_2d_m = 1.0;
        CHECK(path_loss_ci(p, lsp, LinkCondition::NLOS, 0.0).total_db == fspl_1m_db(28.0));

        ExtraLosses extra{3.5, 4.0};
        p.distance_2d_m = 100.0;
        pl = path_loss_ci(p, lsp, LinkCondition::LOS, -2.0, extra);
        CHECK(pl.o2i_db == 3.5);
        CHECK(pl.fl_db == 4.0);
        CHECK(pl.total_db == doctest::Approx(61.3909438487277582 + 40.0 + 3.5 + 4.0 - 2.0).epsilon(1e-13));

        p.distance_2d_m = 0.9;
        try {
            path_loss_ci(p, lsp, LinkCondition::LOS, 0.0);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::InvalidDistance);
        }
    }

    TEST_CASE("close-in path loss grows with distance")
    {
        const auto d = scenario_defaults(Scenario::UMi, ChannelModel::NYUSIM);
        ScenarioParams p = d.params;
        double prev = -1e9;
        for (double x = 1.0; x < 5000.0; x *= 1.1) {
            p.distance_2d_m = x;
            const double v = path_loss_ci(p, d.large_scale, LinkCondition::NLOS, 1.5).total_db;
            CHECK(v > prev);
            prev = v;
        }
    }

    TEST_CASE("shadow fading spread matches the configured sigma")
    {
        const auto d = scenario_defaults(Scenario::UMa, ChannelModel::NYUSIM);
        Rng rng(42);
        std::vector<double> totals;
        for (int i = 0; i < 10000; ++i) {
            const double s = gaussian(rng, 0.0, d.large_scale.sigma_db(LinkCondition::NLOS, 28.0));
            totals.push_back(path_loss_ci(d.params, d.large_scale, LinkCondition::NLOS, s).total_db);
        }
        CHECK(sample_std(totals) == doctest::Approx(7.0).epsilon(0.05));

        std::vector<double> g;
        for (int i = 0; i < 10000; ++i) {
            g.push_back(path_loss_3gpp(at(Scenario::InH, 30.0), LinkCondition::NLOS, rng).total_db);
        }
        CHECK(sample_std(g) == doctest::Approx(8.03).epsilon(0.05));
    }

    TEST_CASE("foliage loss")
    {
        CHECK(foliage_loss_db(0.0, 50.0) == 0.0);
        CHECK(foliage_loss_db(0.4, 10.0) == doctest::Approx(4.0).epsilon(1e-15));
        CHECK(foliage_loss_db(10.0, 1.0) == 10.0);
        CHECK_THROWS_AS(foliage_loss_db(10.5, 1.0), Error);
        CHECK_THROWS_AS(foliage_loss_db(-0.1, 1.0), Error);
        CHECK_THROWS_AS(foliage_loss_db(1.0, -1.0), Error);
    }

    TEST_CASE("building penetration loss")
    {
        Rng rng(7);
        CHECK(o2i_loss_db(O2iMode::Off, 28.0, rng) == 0.0);

        // With the random term removed the low-loss model is 10log10(5 + 0.03 f^2).
        const double low_mean = 10.0 * std::log10(5.0 + 0.03 * 28.0 * 28.0);
        Rng a(99), b(99);
        const double v1 = o2i_loss_db(O2iMode::Low, 28.0, a);
        const double v2 = o2i_loss_db(O2iMode::Low, 28.0, b);
        CHECK(v1 == v2);
        CHECK(v1 > 0.0);

        double sum_low = 0.0, sum_high = 0.0;
        for (int i = 0; i < 10000; ++i) {
            sum_low += o2i_loss_db(O2iMode::Low, 28.0, rng);
            sum_high += o2i_loss_db(O2iMode::High, 28.0, rng);
        }
        CHECK(sum_high > sum_low);
        CHECK(sum_low / 10000.0 == doctest::Approx(low_mean).epsilon(0.05));
    }

    TEST_CASE("3GPP path loss goldens at 28 GHz")
    {
        CHECK(mean_path_loss_3gpp_db(at(Scenario::UMi, 100.0), LinkCondition::LOS) ==
              doctest::Approx(103.375223650631653).epsilon(1e-12));
        CHECK(mean_path_loss_3gpp_db(at(Scenario::UMi, 100.0), LinkCondition::NLOS) ==
              doctest::Approx(123.848362483765008).epsilon(1e-12));
        CHECK(mean_path_loss_3gpp_db(at(Scenario::UMa, 100.0), LinkCondition::LOS) ==
              doctest::Approx(101.197832676933368).epsilon(1e-12));
        CHECK(mean_path_loss_3gpp_db(at(Scenario::UMa, 100.0), LinkCondition::NLOS) ==
              doctest::Approx(121.035550795820630).epsilon(1e-12));
        CHECK(mean_path_loss_3gpp_db(at(Scenario::RMa, 100.0), LinkCondition::LOS) ==
              doctest::Approx(102.020442880718310).epsilon(1e-12));
        CHECK(mean_path_loss_3gpp_db(at(Scenario::RMa, 100.0), LinkCondition::NLOS) ==
              doctest::Approx(113.268167600506270).epsilon(1e-12));
        CHECK(mean_path_loss_3gpp_db(at(Scenario::InH, 50.0), LinkCondition::LOS) ==
              doctest::Approx(90.7382857593961689).epsilon(1e-12));
        CHECK(mean_path_loss_3gpp_db(at(Scenario::InH, 50.0), LinkCondition::NLOS) ==
              doctest::Approx(118.411303915492544).epsilon(1e-12));
    }

    TEST_CASE("3GPP path loss range handling")
    {
        const auto pl = path_loss_3gpp(at(Scenario::UMi, 1.0), LinkCondition::LOS, 0.0);
        CHECK(std::isfinite(pl.total_db));
        CHECK(pl.total_db > 0.0);
        try {
            path_loss_3gpp(at(Scenario::InH, 200.0), LinkCondition::LOS, 0.0);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::OutOfRange);
        }
        CHECK_THROWS_AS(path_loss_3gpp(at(Scenario::UMa, 6000.0), LinkCondition::NLOS, 0.0), Error);
    }

    TEST_CASE("indoor NLOS loss exceeds urban micro NLOS loss at 100 m")
    {
        auto inh = at(Scenario::InH, 100.0);
        CHECK(mean_path_loss_3gpp_db(inh, LinkCondition::NLOS) >
              mean_path_loss_3gpp_db(at(Scenario::UMi, 100.0), LinkCondition::NLOS));
    }

    TEST_CASE("NLOS is lossier than LOS on average for both model families")
    {
        for (auto s : kAllScenarios) {
            const auto nyu = scenario_defaults(s, ChannelModel::NYUSIM);
            CHECK(path_loss_ci(nyu.params, nyu.large_scale, LinkCondition::NLOS, 0.0).total_db >
                  path_loss_ci(nyu.params, nyu.large_scale, LinkCondition::LOS, 0.0).total_db);

            Rng rng(3);
            double los = 0.0, nlos = 0.0;
            const auto p = at(s, 100.0);
            for (int i = 0; i < 2000; ++i) {
                los += path_loss_3gpp(p, LinkCondition::LOS, rng).total_db;
                nlos += path_loss_3gpp(p, LinkCondition::NLOS, rng).total_db;
            }
            CHECK(nlos > los);
        }
    }

    TEST_CASE("3GPP breakdown is additive")
    {
        const auto pl = path_loss_3gpp(at(Scenario::UMa, 250.0), LinkCondition::NLOS, 2.5, ExtraLosses{1.0, 2.0});
        CHECK(pl.total_db == doctest::Approx(pl.component_sum()).epsilon(1e-15));
        CHECK(pl.fspl_1m_db > 0.0);
        CHECK(pl.total_db == doctest::Approx(mean_path_loss_3gpp_db(at(Scenario::UMa, 250.0), LinkCondition::NLOS) +
                                             5.5)
                                 .epsilon(1e-13));
    }

    TEST_CASE("condition sampling")
    {
        Rng rng(11);
        CHECK(sample_condition(0.1, ConditionMode::FixedLOS, rng) == LinkCondition::LOS);
        CHECK(sample_condition(0.9, ConditionMode::FixedNLOS, rng) == LinkCondition::NLOS);
        CHECK(sample_condition(1.0, ConditionMode::Probabilistic, rng) == LinkCondition::LOS);
        int los = 0;
        for (int i = 0; i < 100000; ++i) {
            los += sample_condition(0.5, ConditionMode::Probabilistic, rng) == LinkCondition::LOS;
        }
        CHECK(los / 100000.0 == doctest::Approx(0.5).epsilon(0.02));
        CHECK_THROWS_AS(sample_condition(1.5, ConditionMode::Probabilistic, rng), Error);
    }
}
