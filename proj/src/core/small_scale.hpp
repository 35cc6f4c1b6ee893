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

#include <array>
#include <complex>
#include <cstddef>
#include <iosfwd>
#include <vector>

#include "core/antenna.hpp"
#include "core/random.hpp"
#include "core/scenario.hpp"

namespace mmwsim {

/// One resolvable multipath component. Angles are radians in the global frame,
/// zenith in [0, pi] and azimuth in [0, 2 pi).
struct Multipath {
    double delay_s = 0.0;
    double amplitude = 0.0;
    double aoa_az = 0.0;
    double aoa_zen = 0.0;
    double aod_az = 0.0;
    double aod_zen = 0.0;
    /// theta-theta, theta-phi, phi-theta, phi-phi.
    std::array<double, 4> phase{};
    double xpd_theta_phi = 1.0;
    double xpd_phi_theta = 1.0;
    double xpd_phi_phi = 1.0;

    int cluster = 0;
    int aod_lobe = 0;
    int aoa_lobe = 0;

    double power() const { return amplitude * amplitude; }
};

struct TimeCluster {
    double excess_delay_s = 0.0;
    std::vector<std::size_t> members;
    double power_fraction = 0.0;
};

struct SpatialLobe {
    double mean_azimuth = 0.0;
    double mean_elevation = 0.0;
    double angular_spread = 0.0;
    std::vector<std::size_t> members;
};

struct MultipathSet {
    std::vector<Multipath> paths;
    std::vector<TimeCluster> clusters;
    std::vector<SpatialLobe> aod_lobes;
    std::vector<SpatialLobe> aoa_lobes;

    double total_power() const;
};

/// Distributions of the time-cluster / spatial-lobe generator. Delays in ns,
/// angles in degrees; "elevation" is measured up from the horizon.
struct NyuSmallScaleParams {
    int max_clusters = 6;
    int max_subpaths = 30;
    double mean_excess_delay_ns = 123.0;
    double rf_bandwidth_hz = 400e6;
    double intra_cluster_x_max = 0.2;
    double min_void_ns = 25.0;
    double cluster_decay_ns = 25.9;
    double cluster_shadow_db = 1.0;
    double subpath_decay_ns = 16.9;
    double subpath_shadow_db = 6.0;
    double mean_aod_lobes = 1.9;
    double mean_aoa_lobes = 1.8;
    int max_lobes = 5;
    double aod_elevation_mean_deg = -12.0;
    double aod_elevation_std_deg = 5.0;
    double aoa_elevation_mean_deg = 10.8;
    double aoa_elevation_std_deg = 5.0;
    double aod_az_spread_deg = 8.5;
    double aod_el_spread_deg = 2.5;
    double aoa_az_spread_deg = 10.5;
    double aoa_el_spread_deg = 11.5;
    double xpd_mean_db = 16.7;
    double xpd_std_db = 3.0;
    /// Direct-path share K/(K+1) of the LOS link; ignored for NLOS.
    double k_factor_mean_db = 9.0;
    double k_factor_std_db = 5.0;
};

NyuSmallScaleParams nyu_small_scale_defaults(Scenario scenario, LinkCondition condition);

/// Large-scale and cluster parameters of the 3GPP geometry-based model for one
/// scenario/condition at a given carrier and geometry. Spreads are log10 of
/// seconds (delay) or degrees (angles).
struct ScmParams {
    double lg_ds_mu = 0.0, lg_ds_sigma = 0.0;
    double lg_asd_mu = 0.0, lg_asd_sigma = 0.0;
    double lg_asa_mu = 0.0, lg_asa_sigma = 0.0;
    double lg_zsa_mu = 0.0, lg_zsa_sigma = 0.0;
    double lg_zsd_mu = 0.0, lg_zsd_sigma = 0.0;
    double k_mu_db = 0.0, k_sigma_db = 0.0;
    double delay_scaling = 3.0;
    int n_clusters = 12;
    int rays_per_cluster = 20;
    double c_asd_deg = 3.0;
    double c_asa_deg = 17.0;
    double c_zsa_deg = 7.0;
    double cluster_shadow_db = 3.0;
    double xpr_mu_db = 9.0, xpr_sigma_db = 3.0;
};

ScmParams scm_params(Scenario scenario, LinkCondition condition, double frequency_ghz, double distance_2d_m,
                     double h_ue_m, double h_gnb_m);

/// Scaling constants of the cluster angle spread mapping for N clusters.
double scm_c_phi_nlos(int n_clusters);
double scm_c_theta_nlos(int n_clusters);

/// The twenty ray offset angles within a cluster, unit rms spread.
const std::array<double, 20>& scm_ray_offsets();

/// LOS geometry for the default drop: gNB at the origin, UE on the +x axis.
struct LosAngles {
    double aod_az = 0.0;
    double aod_zen = 0.0;
    double aoa_az = 0.0;
    double aoa_zen = 0.0;
};
LosAngles los_angles(const ScenarioParams& params);

/// Draws an MPC set whose powers sum to 10^(total_power_db / 10).
MultipathSet generate_multipaths(const ScenarioParams& params, LinkCondition condition, double total_power_db,
                                 Rng& rng);
MultipathSet generate_nyusim(const ScenarioParams& params, LinkCondition condition, double total_power_db,
                             const NyuSmallScaleParams& ssp, Rng& rng);
MultipathSet generate_scm3gpp(const ScenarioParams& params, LinkCondition condition, double total_power_db,
                              const ScmParams& scm, Rng& rng);

/// Complex U x S x M channel tensor of a static link.
class ChannelMatrix {
public:
    ChannelMatrix() = default;
    ChannelMatrix(std::size_t rx, std::size_t tx, std::size_t paths);

    std::size_t rx_elements() const { return rx_; }
    std::size_t tx_elements() const { return tx_; }
    std::size_t paths() const { return paths_; }

    std::complex<double>& at(std::size_t u, std::size_t s, std::size_t m) { return data_[index(u, s, m)]; }
    const std::complex<double>& at(std::size_t u, std::size_t s, std::size_t m) const
    {
        return data_[index(u, s, m)];
    }

    std::vector<double>& delays_s() { return delays_; }
    const std::vector<double>& delays_s() const { return delays_; }

private:
    std::size_t index(std::size_t u, std::size_t s, std::size_t m) const { return (m * rx_ + u) * tx_ + s; }

    std::size_t rx_ = 0;
    std::size_t tx_ = 0;
    std::size_t paths_ = 0;
    std::vector<std::complex<double>> data_;
    std::vector<double> delays_;
};

/// The 2x2 polarisation coupling matrix of one path, row-major.
std::array<std::complex<double>, 4> polarization_matrix(const Multipath& mp);

ChannelMatrix assemble_channel_matrix(const std::vector<Multipath>& mpcs, const AntennaArray& tx,
                                      const AntennaArray& rx, double frequency_ghz);

/// Power captured by single-beam steering on the strongest path, summed over
/// every path's coefficient slice.
double beamform_gain(const ChannelMatrix& h);

void write_mpc_csv(std::ostream& os, const std::vector<Multipath>& mpcs);

} // namespace mmwsim
