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

#include "core/small_scale.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>

#include "core/error.hpp"
#include "core/large_scale.hpp"

namespace mmwsim {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kMaxGenerationAttempts = 16;

double to_rad(double deg) { return deg * kPi / 180.0; }
double to_deg(double rad) { return rad * 180.0 / kPi; }

double wrap_azimuth(double az)
{
    double r = std::fmod(az, kTwoPi);
    if (r < 0.0) {
        r += kTwoPi;
    }
    if (r >= kTwoPi) {
        r = 0.0;
    }
    return r;
}

double fold_zenith(double zen)
{
    double r = std::fmod(zen, kTwoPi);
    if (r < 0.0) {
        r += kTwoPi;
    }
    if (r > kPi) {
        r = kTwoPi - r;
    }
    return std::clamp(r, 0.0, kPi);
}

int bounded_poisson(Rng& rng, double mean, int max_value)
{
    if (!(mean > 0.0)) {
        return 1;
    }
    const int draw = std::poisson_distribution<int>(mean)(rng);
    return std::clamp(draw, 1, std::max(1, max_value));
}

// Drops empty paths, sorts by delay, compacts cluster/lobe indices and fills
// membership lists. Returns false when the set carries no usable power.
bool finalize(MultipathSet& set, double target_power)
{
    std::erase_if(set.paths, [](const Multipath& p) { return !(p.amplitude > 0.0) || !std::isfinite(p.amplitude); });
    if (set.paths.empty()) {
        return false;
    }
    double sum = 0.0;
    for (const auto& p : set.paths) {
        sum += p.power();
    }
    if (!(sum > 0.0) || !std::isfinite(sum)) {
        return false;
    }
    const double scale = std::sqrt(target_power / sum);
    for (auto& p : set.paths) {
        p.amplitude *= scale;
    }
    if (std::any_of(set.paths.begin(), set.paths.end(),
                    [](const Multipath& p) { return !(p.amplitude > 0.0) || !std::isfinite(p.amplitude); })) {
        return false;
    }

    std::stable_sort(set.paths.begin(), set.paths.end(),
                     [](const Multipath& a, const Multipath& b) { return a.delay_s < b.delay_s; });

    auto compact = [](std::size_t count, auto index_of, auto set_index, std::vector<Multipath>& paths) {
        std::vector<int> remap(count, -1);
        int next = 0;
        for (auto& p : paths) {
            const auto old = static_cast<std::size_t>(index_of(p));
            if (remap[old] < 0) {
                remap[old] = next++;
            }
        }
        for (auto& p : paths) {
            set_index(p, remap[static_cast<std::size_t>(index_of(p))]);
        }
        return remap;
    };

    auto rebuild_lobes = [&](std::vector<SpatialLobe>& lobes, auto index_of, auto set_index) {
        const auto remap = compact(lobes.size(), index_of, set_index, set.paths);
        std::vector<SpatialLobe> out;
        for (std::size_t i = 0; i < lobes.size(); ++i) {
            if (remap[i] >= 0) {
                out.resize(std::max(out.size(), static_cast<std::size_t>(remap[i]) + 1));
                out[static_cast<std::size_t>(remap[i])] = lobes[i];
                out[static_cast<std::size_t>(remap[i])].members.clear();
            }
        }
        for (std::size_t k = 0; k < set.paths.size(); ++k) {
            out[static_cast<std::size_t>(index_of(set.paths[k]))].members.push_back(k);
        }
        lobes = std::move(out);
    };

    {
        const auto remap = compact(
            set.clusters.size(), [](const Multipath& p) { return p.cluster; },
            [](Multipath& p, int v) { p.cluster = v; }, set.paths);
        std::vector<TimeCluster> out;
        for (std::size_t i = 0; i < set.clusters.size(); ++i) {
            if (remap[i] >= 0) {
                out.resize(std::max(out.size(), static_cast<std::size_t>(remap[i]) + 1));
                out[static_cast<std::size_t>(remap[i])] = set.clusters[i];
            }
        }
        for (auto& c : out) {
            c.members.clear();
            c.power_fraction = 0.0;
        }
        double total = 0.0;
        for (std::size_t k = 0; k < set.paths.size(); ++k) {
            auto& c = out[static_cast<std::size_t>(set.paths[k].cluster)];
            c.members.push_back(k);
            c.power_fraction += set.paths[k].power();
            total += set.paths[k].power();
        }
        for (auto& c : out) {
            c.power_fraction /= total;
        }
        set.clusters = std::move(out);
    }
    rebuild_lobes(
        set.aod_lobes, [](const Multipath& p) { return p.aod_lobe; }, [](Multipath& p, int v) { p.aod_lobe = v; });
    rebuild_lobes(
        set.aoa_lobes, [](const Multipath& p) { return p.aoa_lobe; }, [](Multipath& p, int v) { p.aoa_lobe = v; });
    return true;
}

void draw_phases(Multipath& p, Rng& rng)
{
    for (auto& ph : p.phase) {
        ph = uniform_phase(rng);
    }
}

MultipathSet draw_nyusim_once(const ScenarioParams& params, LinkCondition condition, const NyuSmallScaleParams& ssp,
                              Rng& rng)
{
    const bool los = condition == LinkCondition::LOS;
    const LosAngles geo = los_angles(params);
    const double base_delay_s = params.distance_3d_m() / kSpeedOfLight;

    const int n_clusters = uniform_int(rng, 1, std::max(1, ssp.max_clusters));
    std::vector<int> n_sub(static_cast<std::size_t>(n_clusters));
    for (auto& m : n_sub) {
        m = uniform_int(rng, 1, std::max(1, ssp.max_subpaths));
    }

    // Intra-cluster delays on a bandwidth-limited grid, stretched by a random exponent.
    const double resolution_ns = 1e9 / ssp.rf_bandwidth_hz;
    std::vector<std::vector<double>> rho(static_cast<std::size_t>(n_clusters));
    for (int n = 0; n < n_clusters; ++n) {
        const double x = uniform(rng, 0.0, ssp.intra_cluster_x_max);
        auto& r = rho[static_cast<std::size_t>(n)];
        for (int m = 0; m < n_sub[static_cast<std::size_t>(n)]; ++m) {
            r.push_back(std::pow(m * resolution_ns, 1.0 + x));
        }
    }

    std::vector<double> raw(static_cast<std::size_t>(n_clusters));
    std::exponential_distribution<double> expo(1.0 / ssp.mean_excess_delay_ns);
    for (auto& t : raw) {
        t = expo(rng);
    }
    std::sort(raw.begin(), raw.end());
    std::vector<double> tau(static_cast<std::size_t>(n_clusters), 0.0);
    for (std::size_t n = 1; n < tau.size(); ++n) {
        tau[n] = tau[n - 1] + rho[n - 1].back() + (raw[n] - raw[0]) + ssp.min_void_ns;
    }

    std::vector<double> cluster_power(tau.size());
    for (std::size_t n = 0; n < tau.size(); ++n) {
        cluster_power[n] =
            std::exp(-tau[n] / ssp.cluster_decay_ns) * std::pow(10.0, gaussian(rng, 0.0, ssp.cluster_shadow_db) / 10.0);
    }

    MultipathSet set;
    auto make_lobes = [&](std::vector<SpatialLobe>& lobes, double mean_count, double los_az, double los_el,
                          double el_mean_deg, double el_std_deg, double az_spread_deg) {
        const int count = bounded_poisson(rng, mean_count, ssp.max_lobes);
        for (int i = 0; i < count; ++i) {
            SpatialLobe lobe;
            const double sector = kTwoPi / count;
            lobe.mean_azimuth = wrap_azimuth(los_az + uniform(rng, sector * i, sector * (i + 1)));
            lobe.mean_elevation = to_rad(gaussian(rng, el_mean_deg, el_std_deg));
            lobe.angular_spread = to_rad(az_spread_deg);
            lobes.push_back(lobe);
        }
        if (los) {
            lobes.front().mean_azimuth = wrap_azimuth(los_az);
            lobes.front().mean_elevation = los_el;
        }
    };
    make_lobes(set.aod_lobes, ssp.mean_aod_lobes, geo.aod_az, kPi / 2.0 - geo.aod_zen, ssp.aod_elevation_mean_deg,
               ssp.aod_elevation_std_deg, ssp.aod_az_spread_deg);
    make_lobes(set.aoa_lobes, ssp.mean_aoa_lobes, geo.aoa_az, kPi / 2.0 - geo.aoa_zen, ssp.aoa_elevation_mean_deg,
               ssp.aoa_elevation_std_deg, ssp.aoa_az_spread_deg);

    double cluster_sum = 0.0;
    for (double p : cluster_power) {
        cluster_sum += p;
    }
    for (int n = 0; n < n_clusters; ++n) {
        const auto nn = static_cast<std::size_t>(n);
        TimeCluster tc;
        tc.excess_delay_s = tau[nn] * 1e-9;
        set.clusters.push_back(tc);

        std::vector<double> sub_power(rho[nn].size());
        double sub_sum = 0.0;
        for (std::size_t m = 0; m < sub_power.size(); ++m) {
            sub_power[m] = std::exp(-rho[nn][m] / ssp.subpath_decay_ns) *
                           std::pow(10.0, gaussian(rng, 0.0, ssp.subpath_shadow_db) / 10.0);
            sub_sum += sub_power[m];
        }
        for (std::size_t m = 0; m < sub_power.size(); ++m) {
            Multipath p;
            p.cluster = n;
            p.delay_s = base_delay_s + (tau[nn] + rho[nn][m]) * 1e-9;
            const double share = (cluster_sum > 0.0 && sub_sum > 0.0)
                                     ? cluster_power[nn] / cluster_sum * sub_power[m] / sub_sum
                                     : 0.0;
            p.amplitude = std::sqrt(share);

            p.aod_lobe = uniform_int(rng, 0, static_cast<int>(set.aod_lobes.size()) - 1);
            p.aoa_lobe = uniform_int(rng, 0, static_cast<int>(set.aoa_lobes.size()) - 1);
            const auto& dl = set.aod_lobes[static_cast<std::size_t>(p.aod_lobe)];
            const auto& al = set.aoa_lobes[static_cast<std::size_t>(p.aoa_lobe)];
            p.aod_az = wrap_azimuth(dl.mean_azimuth + to_rad(gaussian(rng, 0.0, ssp.aod_az_spread_deg)));
            p.aod_zen = fold_zenith(kPi / 2.0 - dl.mean_elevation - to_rad(gaussian(rng, 0.0, ssp.aod_el_spread_deg)));
            p.aoa_az = wrap_azimuth(al.mean_azimuth + to_rad(gaussian(rng, 0.0, ssp.aoa_az_spread_deg)));
            p.aoa_zen = fold_zenith(kPi / 2.0 - al.mean_elevation - to_rad(gaussian(rng, 0.0, ssp.aoa_el_spread_deg)));

            draw_phases(p, rng);
            p.xpd_theta_phi = std::pow(10.0, gaussian(rng, ssp.xpd_mean_db, ssp.xpd_std_db) / 10.0);
            p.xpd_phi_theta = std::pow(10.0, gaussian(rng, ssp.xpd_mean_db, ssp.xpd_std_db) / 10.0);
            p.xpd_phi_phi = 1.0;
            set.paths.push_back(p);
        }
    }

    if (los) {
        // The first subpath of the first cluster is the direct ray.
        auto& direct = set.paths.front();
        direct.aod_lobe = 0;
        direct.aoa_lobe = 0;
        direct.aod_az = wrap_azimuth(geo.aod_az);
        direct.aod_zen = geo.aod_zen;
        direct.aoa_az = wrap_azimuth(geo.aoa_az);
        direct.aoa_zen = geo.aoa_zen;
        direct.xpd_theta_phi = std::numeric_limits<double>::infinity();
        direct.xpd_phi_theta = std::numeric_limits<double>::infinity();

        const double k_lin = std::pow(10.0, gaussian(rng, ssp.k_factor_mean_db, ssp.k_factor_std_db) / 10.0);
        double rest = 0.0;
        for (std::size_t k = 1; k < set.paths.size(); ++k) {
            rest += set.paths[k].power();
        }
        if (rest > 0.0) {
            const double rest_scale = std::sqrt((1.0 / (k_lin + 1.0)) / rest);
            for (std::size_t k = 1; k < set.paths.size(); ++k) {
                set.paths[k].amplitude *= rest_scale;
            }
            direct.amplitude = std::sqrt(k_lin / (k_lin + 1.0));
        } else {
            direct.amplitude = 1.0;
        }
    }
    return set;
}

double ray_coupled(double center_deg, double spread_deg, double offset) { return center_deg + spread_deg * offset; }

MultipathSet draw_scm_once(const ScenarioParams& params, LinkCondition condition, const ScmParams& scm, Rng& rng)
{
    const bool los = condition == LinkCondition::LOS;
    const LosAngles geo = los_angles(params);
    const double base_delay_s = params.distance_3d_m() / kSpeedOfLight;

    const double ds = std::pow(10.0, gaussian(rng, scm.lg_ds_mu, scm.lg_ds_sigma));
    const double asd = std::min(std::pow(10.0, gaussian(rng, scm.lg_asd_mu, scm.lg_asd_sigma)), 104.0);
    const double asa = std::min(std::pow(10.0, gaussian(rng, scm.lg_asa_mu, scm.lg_asa_sigma)), 104.0);
    const double zsa = std::min(std::pow(10.0, gaussian(rng, scm.lg_zsa_mu, scm.lg_zsa_sigma)), 52.0);
    const double zsd = std::min(std::pow(10.0, gaussian(rng, scm.lg_zsd_mu, scm.lg_zsd_sigma)), 52.0);
    const double k_db = los ? gaussian(rng, scm.k_mu_db, scm.k_sigma_db) : 0.0;
    const double k_r = std::pow(10.0, k_db / 10.0);

    const int n = std::max(1, scm.n_clusters);
    std::vector<double> tau(static_cast<std::size_t>(n));
    for (auto& t : tau) {
        t = -scm.delay_scaling * ds * std::log(1.0 - uniform01(rng));
    }
    std::sort(tau.begin(), tau.end());
    const double tau_min = tau.front();
    for (auto& t : tau) {
        t -= tau_min;
    }

    std::vector<double> power(tau.size());
    double psum = 0.0;
    for (std::size_t i = 0; i < tau.size(); ++i) {
        power[i] = std::exp(-tau[i] * (scm.delay_scaling - 1.0) / (scm.delay_scaling * ds)) *
                   std::pow(10.0, -gaussian(rng, 0.0, scm.cluster_shadow_db) / 10.0);
        psum += power[i];
    }
    for (auto& p : power) {
        p /= psum;
    }

    // Cluster powers seen by the angle mapping include the specular share in LOS.
    std::vector<double> angle_power = power;
    if (los) {
        for (auto& p : angle_power) {
            p /= (k_r + 1.0);
        }
        angle_power.front() += k_r / (k_r + 1.0);
    }

    const double pmax = *std::max_element(power.begin(), power.end());
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < power.size(); ++i) {
        if (power[i] >= pmax * std::pow(10.0, -2.5)) {
            kept.push_back(i);
        }
    }

    double c_tau = 1.0;
    double c_phi = scm_c_phi_nlos(n);
    double c_theta = scm_c_theta_nlos(n);
    if (los) {
        c_tau = 0.7705 - 0.0433 * k_db + 0.0002 * k_db * k_db + 0.000017 * k_db * k_db * k_db;
        c_phi *= 1.1035 - 0.028 * k_db - 0.002 * k_db * k_db + 0.0001 * k_db * k_db * k_db;
        c_theta *= 1.3086 + 0.0339 * k_db - 0.0077 * k_db * k_db + 0.0002 * k_db * k_db * k_db;
    }
    const double amax = *std::max_element(angle_power.begin(), angle_power.end());

    // Cluster centre angles in degrees, first entry anchored on the LOS direction when present.
    auto cluster_angles = [&](double spread, bool azimuth, double los_dir_deg, double offset_deg) {
        std::vector<double> out(kept.size());
        double first = 0.0;
        for (std::size_t k = 0; k < kept.size(); ++k) {
            const double ratio = angle_power[kept[k]] / amax;
            const double prime = azimuth ? 2.0 * (spread / 1.4) * std::sqrt(-std::log(ratio)) / c_phi
                                         : -spread * std::log(ratio) / c_theta;
            const double sign = uniform01(rng) < 0.5 ? -1.0 : 1.0;
            const double y = gaussian(rng, 0.0, spread / 7.0);
            out[k] = sign * prime + y;
            if (k == 0) {
                first = out[k];
            }
        }
        for (auto& a : out) {
            a = los ? a - first + los_dir_deg : a + los_dir_deg + offset_deg;
        }
        return out;
    };
    const auto phi_aoa = cluster_angles(asa, true, to_deg(geo.aoa_az), 0.0);
    const auto phi_aod = cluster_angles(asd, true, to_deg(geo.aod_az), 0.0);
    const auto theta_zoa = cluster_angles(zsa, false, to_deg(geo.aoa_zen), 0.0);
    const auto theta_zod = cluster_angles(zsd, false, to_deg(geo.aod_zen), 0.0);

    const auto& offsets = scm_ray_offsets();
    const int rays = std::clamp(scm.rays_per_cluster, 1, 20);
    const double zsd_ray_spread = 3.0 / 8.0 * std::pow(10.0, scm.lg_zsd_mu);

    MultipathSet set;
    for (std::size_t k = 0; k < kept.size(); ++k) {
        const std::size_t c = kept[k];
        TimeCluster tc;
        tc.excess_delay_s = tau[c] / c_tau;
        set.clusters.push_back(tc);

        SpatialLobe dl;
        dl.mean_azimuth = wrap_azimuth(to_rad(phi_aod[k]));
        dl.mean_elevation = kPi / 2.0 - fold_zenith(to_rad(theta_zod[k]));
        dl.angular_spread = to_rad(scm.c_asd_deg);
        set.aod_lobes.push_back(dl);
        SpatialLobe al;
        al.mean_azimuth = wrap_azimuth(to_rad(phi_aoa[k]));
        al.mean_elevation = kPi / 2.0 - fold_zenith(to_rad(theta_zoa[k]));
        al.angular_spread = to_rad(scm.c_asa_deg);
        set.aoa_lobes.push_back(al);

        std::vector<int> perm_aod(static_cast<std::size_t>(rays)), perm_zoa(perm_aod.size()), perm_zod(perm_aod.size());
        for (int r = 0; r < rays; ++r) {
            perm_aod[static_cast<std::size_t>(r)] = perm_zoa[static_cast<std::size_t>(r)] =
                perm_zod[static_cast<std::size_t>(r)] = r;
        }
        std::shuffle(perm_aod.begin(), perm_aod.end(), rng);
        std::shuffle(perm_zoa.begin(), perm_zoa.end(), rng);
        std::shuffle(perm_zod.begin(), perm_zod.end(), rng);

        const double ray_power = (los ? power[c] / (k_r + 1.0) : power[c]) / rays;
        for (int r = 0; r < rays; ++r) {
            const auto rr = static_cast<std::size_t>(r);
            Multipath p;
            p.cluster = static_cast<int>(k);
            p.aod_lobe = static_cast<int>(k);
            p.aoa_lobe = static_cast<int>(k);
            p.delay_s = base_delay_s + tau[c] / c_tau;
            p.amplitude = std::sqrt(ray_power);
            p.aoa_az = wrap_azimuth(to_rad(ray_coupled(phi_aoa[k], scm.c_asa_deg, offsets[rr])));
            p.aod_az = wrap_azimuth(
                to_rad(ray_coupled(phi_aod[k], scm.c_asd_deg, offsets[static_cast<std::size_t>(perm_aod[rr])])));
            p.aoa_zen = fold_zenith(
                to_rad(ray_coupled(theta_zoa[k], scm.c_zsa_deg, offsets[static_cast<std::size_t>(perm_zoa[rr])])));
            p.aod_zen = fold_zenith(
                to_rad(ray_coupled(theta_zod[k], zsd_ray_spread, offsets[static_cast<std::size_t>(perm_zod[rr])])));
            draw_phases(p, rng);
            const double xpr = std::pow(10.0, gaussian(rng, scm.xpr_mu_db, scm.xpr_sigma_db) / 10.0);
            p.xpd_theta_phi = xpr;
            p.xpd_phi_theta = xpr;
            p.xpd_phi_phi = 1.0;
            set.paths.push_back(p);
        }
    }

    if (los) {
        Multipath spec;
        spec.cluster = 0;
        spec.aod_lobe = 0;
        spec.aoa_lobe = 0;
        spec.delay_s = base_delay_s;
        spec.amplitude = std::sqrt(k_r / (k_r + 1.0));
        spec.aod_az = wrap_azimuth(geo.aod_az);
        spec.aod_zen = geo.aod_zen;
        spec.aoa_az = wrap_azimuth(geo.aoa_az);
        spec.aoa_zen = geo.aoa_zen;
        draw_phases(spec, rng);
        spec.xpd_theta_phi = std::numeric_limits<double>::infinity();
        spec.xpd_phi_theta = std::numeric_limits<double>::infinity();
        spec.xpd_phi_phi = 1.0;
        set.paths.insert(set.paths.begin(), spec);
    }
    return set;
}

} // namespace

double MultipathSet::total_power() const
{
    double sum = 0.0;
    for (const auto& p : paths) {
        sum += p.power();
    }
    return sum;
}

NyuSmallScaleParams nyu_small_scale_defaults(Scenario scenario, LinkCondition condition)
{
    NyuSmallScaleParams p;
    const bool los = condition == LinkCondition::LOS;
    if (scenario == Scenario::InH) {
        p.max_clusters = los ? 3 : 4;
        p.max_subpaths = 10;
        p.mean_excess_delay_ns = los ? 17.3 : 10.9;
        p.intra_cluster_x_max = los ? 0.2 : 0.5;
        p.min_void_ns = 6.0;
        p.cluster_decay_ns = los ? 20.7 : 23.6;
        p.cluster_shadow_db = los ? 10.0 : 10.0;
        p.subpath_decay_ns = los ? 2.0 : 2.7;
        p.subpath_shadow_db = los ? 5.0 : 7.0;
        p.mean_aod_lobes = los ? 1.4 : 1.7;
        p.mean_aoa_lobes = los ? 1.5 : 1.8;
        p.aod_elevation_mean_deg = los ? -6.8 : -5.0;
        p.aoa_elevation_mean_deg = los ? 7.4 : 5.9;
        p.aod_az_spread_deg = los ? 10.6 : 11.0;
        p.aod_el_spread_deg = los ? 4.9 : 3.2;
        p.aoa_az_spread_deg = los ? 16.6 : 21.0;
        p.aoa_el_spread_deg = los ? 6.2 : 6.6;
        p.k_factor_mean_db = 7.0;
        p.k_factor_std_db = 4.0;
        return p;
    }
    if (los) {
        p.mean_excess_delay_ns = 123.0;
        p.intra_cluster_x_max = 0.2;
        p.cluster_decay_ns = 25.9;
        p.cluster_shadow_db = 1.0;
        p.subpath_decay_ns = 16.9;
        p.subpath_shadow_db = 6.0;
        p.mean_aod_lobes = 1.9;
        p.mean_aoa_lobes = 1.8;
        p.aod_elevation_mean_deg = -12.0;
        p.aoa_elevation_mean_deg = 10.8;
        p.aod_az_spread_deg = 8.5;
        p.aod_el_spread_deg = 2.5;
        p.aoa_az_spread_deg = 10.5;
        p.aoa_el_spread_deg = 11.5;
    } else {
        p.mean_excess_delay_ns = 83.0;
        p.intra_cluster_x_max = 0.5;
        p.cluster_decay_ns = 51.0;
        p.cluster_shadow_db = 3.0;
        p.subpath_decay_ns = 15.5;
        p.subpath_shadow_db = 6.0;
        p.mean_aod_lobes = 1.6;
        p.mean_aoa_lobes = 1.6;
        p.aod_elevation_mean_deg = -4.9;
        p.aoa_elevation_mean_deg = 3.6;
        p.aod_az_spread_deg = 11.0;
        p.aod_el_spread_deg = 3.0;
        p.aoa_az_spread_deg = 7.5;
        p.aoa_el_spread_deg = 6.0;
    }
    switch (scenario) {
    case Scenario::UMa:
        p.k_factor_mean_db = 9.0;
        p.k_factor_std_db = 3.5;
        break;
    case Scenario::RMa:
        p.k_factor_mean_db = 7.0;
        p.k_factor_std_db = 4.0;
        break;
    default:
        p.k_factor_mean_db = 9.0;
        p.k_factor_std_db = 5.0;
        break;
    }
    return p;
}

ScmParams scm_params(Scenario scenario, LinkCondition condition, double fc, double d2d, double h_ue, double h_gnb)
{
    ScmParams s;
    const bool los = condition == LinkCondition::LOS;
    const double lf1 = std::log10(1.0 + fc);
    const double lf = std::log10(fc);
    const double dkm = d2d / 1000.0;
    switch (scenario) {
    case Scenario::UMi:
        if (los) {
            s.lg_ds_mu = -0.24 * lf1 - 7.14;
            s.lg_ds_sigma = 0.38;
            s.lg_asd_mu = -0.05 * lf1 + 1.21;
            s.lg_asd_sigma = 0.41;
            s.lg_asa_mu = -0.08 * lf1 + 1.73;
            s.lg_asa_sigma = 0.014 * lf1 + 0.28;
            s.lg_zsa_mu = -0.1 * lf1 + 0.73;
            s.lg_zsa_sigma = -0.04 * lf1 + 0.34;
            s.lg_zsd_mu = std::max(-0.21, -14.8 * dkm + 0.01 * std::abs(h_ue - h_gnb) + 0.83);
            s.lg_zsd_sigma = 0.35;
            s.k_mu_db = 9.0;
            s.k_sigma_db = 5.0;
            s.delay_scaling = 3.0;
            s.n_clusters = 12;
            s.c_asd_deg = 3.0;
            s.c_asa_deg = 17.0;
            s.c_zsa_deg = 7.0;
            s.xpr_mu_db = 9.0;
            s.xpr_sigma_db = 3.0;
        } else {
            s.lg_ds_mu = -0.24 * lf1 - 6.83;
            s.lg_ds_sigma = 0.16 * lf1 + 0.28;
            s.lg_asd_mu = -0.23 * lf1 + 1.53;
            s.lg_asd_sigma = 0.11 * lf1 + 0.33;
            s.lg_asa_mu = -0.08 * lf1 + 1.81;
            s.lg_asa_sigma = 0.05 * lf1 + 0.3;
            s.lg_zsa_mu = -0.04 * lf1 + 0.92;
            s.lg_zsa_sigma = -0.07 * lf1 + 0.41;
            s.lg_zsd_mu = std::max(-0.5, -3.1 * dkm + 0.01 * std::max(h_ue - h_gnb, 0.0) + 0.2);
            s.lg_zsd_sigma = 0.35;
            s.delay_scaling = 2.1;
            s.n_clusters = 19;
            s.c_asd_deg = 10.0;
            s.c_asa_deg = 22.0;
            s.c_zsa_deg = 7.0;
            s.xpr_mu_db = 8.0;
            s.xpr_sigma_db = 3.0;
        }
        s.cluster_shadow_db = 3.0;
        break;
    case Scenario::UMa:
        if (los) {
            s.lg_ds_mu = -6.955 - 0.0963 * lf;
            s.lg_ds_sigma = 0.66;
            s.lg_asd_mu = 1.06 + 0.1114 * lf;
            s.lg_asd_sigma = 0.28;
            s.lg_asa_mu = 1.81;
            s.lg_asa_sigma = 0.20;
            s.lg_zsa_mu = 0.95;
            s.lg_zsa_sigma = 0.16;
            s.lg_zsd_mu = std::max(-0.5, -2.1 * dkm - 0.01 * (h_ue - 1.5) + 0.75);
            s.lg_zsd_sigma = 0.40;
            s.k_mu_db = 9.0;
            s.k_sigma_db = 3.5;
            s.delay_scaling = 2.5;
            s.n_clusters = 12;
            s.c_asd_deg = 5.0;
            s.c_asa_deg = 11.0;
            s.c_zsa_deg = 7.0;
            s.xpr_mu_db = 8.0;
            s.xpr_sigma_db = 4.0;
        } else {
            s.lg_ds_mu = -6.28 - 0.204 * lf;
            s.lg_ds_sigma = 0.39;
            s.lg_asd_mu = 1.5 - 0.1144 * lf;
            s.lg_asd_sigma = 0.28;
            s.lg_asa_mu = 2.08 - 0.27 * lf;
            s.lg_asa_sigma = 0.11;
            s.lg_zsa_mu = 1.512 - 0.3236 * lf;
            s.lg_zsa_sigma = 0.16;
            s.lg_zsd_mu = std::max(-0.5, -2.1 * dkm - 0.01 * (h_ue - 1.5) + 0.9);
            s.lg_zsd_sigma = 0.49;
            s.delay_scaling = 2.3;
            s.n_clusters = 20;
            s.c_asd_deg = 2.0;
            s.c_asa_deg = 15.0;
            s.c_zsa_deg = 7.0;
            s.xpr_mu_db = 7.0;
            s.xpr_sigma_db = 3.0;
        }
        s.cluster_shadow_db = 3.0;
        break;
    case Scenario::RMa:
        if (los) {
            s.lg_ds_mu = -7.49;
            s.lg_ds_sigma = 0.55;
            s.lg_asd_mu = 0.90;
            s.lg_asd_sigma = 0.38;
            s.lg_asa_mu = 1.52;
            s.lg_asa_sigma = 0.24;
            s.lg_zsa_mu = 0.47;
            s.lg_zsa_sigma = 0.40;
            s.lg_zsd_mu = std::max(-1.0, -0.17 * dkm - 0.01 * (h_ue - 1.5) + 0.22);
            s.lg_zsd_sigma = 0.34;
            s.k_mu_db = 7.0;
            s.k_sigma_db = 4.0;
            s.delay_scaling = 3.8;
            s.n_clusters = 11;
            s.xpr_mu_db = 12.0;
            s.xpr_sigma_db = 4.0;
        } else {
            s.lg_ds_mu = -7.43;
            s.lg_ds_sigma = 0.48;
            s.lg_asd_mu = 0.95;
            s.lg_asd_sigma = 0.45;
            s.lg_asa_mu = 1.52;
            s.lg_asa_sigma = 0.13;
            s.lg_zsa_mu = 0.58;
            s.lg_zsa_sigma = 0.37;
            s.lg_zsd_mu = std::max(-1.0, -0.19 * dkm - 0.01 * (h_ue - 1.5) + 0.28);
            s.lg_zsd_sigma = 0.30;
            s.delay_scaling = 1.7;
            s.n_clusters = 10;
            s.xpr_mu_db = 7.0;
            s.xpr_sigma_db = 3.0;
        }
        s.c_asd_deg = 2.0;
        s.c_asa_deg = 3.0;
        s.c_zsa_deg = 3.0;
        s.cluster_shadow_db = 3.0;
        break;
    case Scenario::InH:
        if (los) {
            s.lg_ds_mu = -0.01 * lf1 - 7.692;
            s.lg_ds_sigma = 0.18;
            s.lg_asd_mu = 1.60;
            s.lg_asd_sigma = 0.18;
            s.lg_asa_mu = -0.19 * lf1 + 1.781;
            s.lg_asa_sigma = 0.12 * lf1 + 0.119;
            s.lg_zsa_mu = -0.26 * lf1 + 1.44;
            s.lg_zsa_sigma = -0.04 * lf1 + 0.264;
            s.lg_zsd_mu = -1.43 * lf1 + 2.228;
            s.lg_zsd_sigma = 0.13 * lf1 + 0.30;
            s.k_mu_db = 7.0;
            s.k_sigma_db = 4.0;
            s.delay_scaling = 3.6;
            s.n_clusters = 15;
            s.c_asa_deg = 8.0;
            s.cluster_shadow_db = 6.0;
            s.xpr_mu_db = 11.0;
            s.xpr_sigma_db = 4.0;
        } else {
            s.lg_ds_mu = -0.28 * lf1 - 7.173;
            s.lg_ds_sigma = 0.1 * lf1 + 0.055;
            s.lg_asd_mu = 1.62;
            s.lg_asd_sigma = 0.25;
            s.lg_asa_mu = -0.11 * lf1 + 1.863;
            s.lg_asa_sigma = 0.12 * lf1 + 0.059;
            s.lg_zsa_mu = -0.15 * lf1 + 1.387;
            s.lg_zsa_sigma = -0.09 * lf1 + 0.746;
            s.lg_zsd_mu = 1.08;
            s.lg_zsd_sigma = 0.36;
            s.delay_scaling = 3.0;
            s.n_clusters = 19;
            s.c_asa_deg = 11.0;
            s.cluster_shadow_db = 3.0;
            s.xpr_mu_db = 10.0;
            s.xpr_sigma_db = 4.0;
        }
        s.c_asd_deg = 5.0;
        s.c_zsa_deg = 9.0;
        break;
    }
    s.rays_per_cluster = 20;
    // Some sigma expressions turn negative far above their measured band.
    s.lg_asa_sigma = std::max(s.lg_asa_sigma, 0.0);
    s.lg_zsa_sigma = std::max(s.lg_zsa_sigma, 0.0);
    return s;
}

double scm_c_phi_nlos(int n)
{
    static constexpr std::pair<int, double> table[] = {{4, 0.779},   {5, 0.860},   {8, 1.018},   {10, 1.090},
                                                       {11, 1.123},  {12, 1.146},  {14, 1.190},  {15, 1.211},
                                                       {16, 1.226},  {19, 1.273},  {20, 1.289},  {25, 1.358}};
    const auto* best = &table[0];
    for (const auto& e : table) {
        if (std::abs(e.first - n) < std::abs(best->first - n)) {
            best = &e;
        }
    }
    return best->second;
}

double scm_c_theta_nlos(int n)
{
    static constexpr std::pair<int, double> table[] = {{8, 0.889},   {10, 0.957}, {11, 1.031}, {12, 1.104},
                                                       {15, 1.1088}, {19, 1.184}, {20, 1.178}, {25, 1.282}};
    const auto* best = &table[0];
    for (const auto& e : table) {
        if (std::abs(e.first - n) < std::abs(best->first - n)) {
            best = &e;
        }
    }
    return best->second;
}

const std::array<double, 20>& scm_ray_offsets()
{
    static const std::array<double, 20> offsets = {0.0447, -0.0447, 0.1413, -0.1413, 0.2492, -0.2492, 0.3715,
                                                   -0.3715, 0.5129, -0.5129, 0.6797, -0.6797, 0.8844, -0.8844,
                                                   1.1481, -1.1481, 1.5195, -1.5195, 2.1551, -2.1551};
    return offsets;
}

LosAngles los_angles(const ScenarioParams& params)
{
    const double tilt = std::atan2(params.h_gnb_m - params.h_ue_m, params.distance_2d_m);
    LosAngles a;
    a.aod_az = 0.0;
    a.aod_zen = kPi / 2.0 + tilt;
    a.aoa_az = kPi;
    a.aoa_zen = kPi / 2.0 - tilt;
    return a;
}

MultipathSet generate_nyusim(const ScenarioParams& params, LinkCondition condition, double total_power_db,
                             const NyuSmallScaleParams& ssp, Rng& rng)
{
    if (!std::isfinite(total_power_db)) {
        fail(ErrorCode::InvalidParameter, "total received power must be finite");
    }
    if (ssp.max_clusters < 1 || ssp.max_subpaths < 1 || !(ssp.rf_bandwidth_hz > 0.0) ||
        !(ssp.mean_excess_delay_ns > 0.0) || !(ssp.cluster_decay_ns > 0.0) || !(ssp.subpath_decay_ns > 0.0)) {
        fail(ErrorCode::InvalidParameter, "invalid small-scale distribution parameters");
    }
    const double target = std::pow(10.0, total_power_db / 10.0);
    for (int attempt = 0; attempt < kMaxGenerationAttempts; ++attempt) {
        auto set = draw_nyusim_once(params, condition, ssp, rng);
        if (finalize(set, target)) {
            return set;
        }
    }
    fail(ErrorCode::Generation, "multipath generation produced no usable clusters");
}

MultipathSet generate_scm3gpp(const ScenarioParams& params, LinkCondition condition, double total_power_db,
                              const ScmParams& scm, Rng& rng)
{
    if (!std::isfinite(total_power_db)) {
        fail(ErrorCode::InvalidParameter, "total received power must be finite");
    }
    if (scm.n_clusters < 1 || scm.rays_per_cluster < 1 || !(scm.delay_scaling > 1.0)) {
        fail(ErrorCode::InvalidParameter, "invalid cluster parameters");
    }
    const double target = std::pow(10.0, total_power_db / 10.0);
    for (int attempt = 0; attempt < kMaxGenerationAttempts; ++attempt) {
        auto set = draw_scm_once(params, condition, scm, rng);
        if (finalize(set, target)) {
            return set;
        }
    }
    fail(ErrorCode::Generation, "multipath generation produced no usable clusters");
}

MultipathSet generate_multipaths(const ScenarioParams& params, LinkCondition condition, double total_power_db,
                                 Rng& rng)
{
    if (params.channel_model == ChannelModel::SCM3GPP) {
        return generate_scm3gpp(params, condition, total_power_db,
                                scm_params(params.scenario, condition, params.frequency_ghz, params.distance_2d_m,
                                           params.h_ue_m, params.h_gnb_m),
                                rng);
    }
    return generate_nyusim(params, condition, total_power_db, nyu_small_scale_defaults(params.scenario, condition),
                           rng);
}

ChannelMatrix::ChannelMatrix(std::size_t rx, std::size_t tx, std::size_t paths)
    : rx_(rx), tx_(tx), paths_(paths), data_(rx * tx * paths), delays_(paths, 0.0)
{
}

std::array<std::complex<double>, 4> polarization_matrix(const Multipath& mp)
{
    auto cross = [](double k) { return std::isinf(k) ? 0.0 : std::sqrt(1.0 / k); };
    return {std::polar(1.0, mp.phase[0]), std::polar(cross(mp.xpd_theta_phi), mp.phase[1]),
            std::polar(cross(mp.xpd_phi_theta), mp.phase[2]), std::polar(cross(mp.xpd_phi_phi), mp.phase[3])};
}

ChannelMatrix assemble_channel_matrix(const std::vector<Multipath>& mpcs, const AntennaArray& tx,
                                      const AntennaArray& rx, double frequency_ghz)
{
    if (mpcs.empty()) {
        fail(ErrorCode::InvalidArray, "channel matrix needs at least one multipath component");
    }
    tx.validate();
    rx.validate();
    if (!(frequency_ghz > 0.0) || !std::isfinite(frequency_ghz)) {
        fail(ErrorCode::InvalidParameter, "carrier frequency must be positive");
    }
    const double lambda = kSpeedOfLight / (frequency_ghz * 1e9);
    const auto pos_rx = rx.element_positions(lambda);
    const auto pos_tx = tx.element_positions(lambda);
    ChannelMatrix h(pos_rx.size(), pos_tx.size(), mpcs.size());
    const double k = kTwoPi / lambda;

    std::vector<std::complex<double>> a_rx(pos_rx.size()), a_tx(pos_tx.size());
    for (std::size_t m = 0; m < mpcs.size(); ++m) {
        const auto& p = mpcs[m];
        const auto pol = polarization_matrix(p);
        const FieldPattern fr = rx.field(p.aoa_zen, p.aoa_az);
        const FieldPattern ft = tx.field(p.aod_zen, p.aod_az);
        const std::complex<double> coupling =
            p.amplitude * (fr.theta * (pol[0] * ft.theta + pol[1] * ft.phi) + fr.phi * (pol[2] * ft.theta + pol[3] * ft.phi));

        const Vec3 r_rx = spherical_unit(p.aoa_zen, p.aoa_az);
        const Vec3 r_tx = spherical_unit(p.aod_zen, p.aod_az);
        for (std::size_t u = 0; u < pos_rx.size(); ++u) {
            a_rx[u] = std::polar(1.0, k * r_rx.dot(pos_rx[u]));
        }
        for (std::size_t s = 0; s < pos_tx.size(); ++s) {
            a_tx[s] = std::polar(1.0, k * r_tx.dot(pos_tx[s]));
        }
        for (std::size_t u = 0; u < pos_rx.size(); ++u) {
            const std::complex<double> cu = coupling * a_rx[u];
            for (std::size_t s = 0; s < pos_tx.size(); ++s) {
                h.at(u, s, m) = cu * a_tx[s];
            }
        }
        h.delays_s()[m] = p.delay_s;
    }
    return h;
}

double beamform_gain(const ChannelMatrix& h)
{
    const std::size_t U = h.rx_elements(), S = h.tx_elements(), M = h.paths();
    if (M == 0 || U == 0 || S == 0) {
        return 0.0;
    }

    std::size_t best = 0;
    double best_power = -1.0;
    for (std::size_t m = 0; m < M; ++m) {
        double pw = 0.0;
        for (std::size_t u = 0; u < U; ++u) {
            for (std::size_t s = 0; s < S; ++s) {
                pw += std::norm(h.at(u, s, m));
            }
        }
        if (pw > best_power) {
            best_power = pw;
            best = m;
        }
    }
    if (!(best_power > 0.0)) {
        return 0.0;
    }

    // The strongest slice is rank one; its dominant row and column are the steering vectors.
    std::size_t u0 = 0, s0 = 0;
    double peak = -1.0;
    for (std::size_t u = 0; u < U; ++u) {
        for (std::size_t s = 0; s < S; ++s) {
            const double v = std::norm(h.at(u, s, best));
            if (v > peak) {
                peak = v;
                u0 = u;
                s0 = s;
            }
        }
    }
    std::vector<std::complex<double>> wr(U), wt(S);
    double nr = 0.0, nt = 0.0;
    for (std::size_t u = 0; u < U; ++u) {
        wr[u] = h.at(u, s0, best);
        nr += std::norm(wr[u]);
    }
    for (std::size_t s = 0; s < S; ++s) {
        wt[s] = std::conj(h.at(u0, s, best));
        nt += std::norm(wt[s]);
    }
    nr = std::sqrt(nr);
    nt = std::sqrt(nt);
    for (auto& w : wr) {
        w /= nr;
    }
    for (auto& w : wt) {
        w /= nt;
    }

    double gain = 0.0;
    for (std::size_t m = 0; m < M; ++m) {
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t u = 0; u < U; ++u) {
            std::complex<double> row{0.0, 0.0};
            for (std::size_t s = 0; s < S; ++s) {
                row += h.at(u, s, m) * wt[s];
            }
            acc += std::conj(wr[u]) * row;
        }
        gain += std::norm(acc);
    }
    return gain;
}

void write_mpc_csv(std::ostream& os, const std::vector<Multipath>& mpcs)
{
    const auto flags = os.flags();
    const auto prec = os.precision();
    os << "m,delay_ns,power_db,aoa_az_deg,aoa_zen_deg,aod_az_deg,aod_zen_deg\n";
    os << std::setprecision(12);
    for (std::size_t m = 0; m < mpcs.size(); ++m) {
        const auto& p = mpcs[m];
        os << (m + 1) << ',' << p.delay_s * 1e9 << ',' << 10.0 * std::log10(p.power()) << ',' << to_deg(p.aoa_az)
           << ',' << to_deg(p.aoa_zen) << ',' << to_deg(p.aod_az) << ',' << to_deg(p.aod_zen) << '\n';
    }
    os.flags(flags);
    os.precision(prec);
}

} // namespace mmwsim
