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

#include "core/antenna.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "core/error.hpp"

namespace mmwsim {

namespace {

// Rotation R = Rz(bearing) * Ry(downtilt); columns are the panel's local axes in the global frame.
struct Rotation {
    double m[3][3];

    Vec3 apply(const Vec3& v) const
    {
        return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
                m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
                m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
    }
    Vec3 apply_transposed(const Vec3& v) const
    {
        return {m[0][0] * v.x + m[1][0] * v.y + m[2][0] * v.z,
                m[0][1] * v.x + m[1][1] * v.y + m[2][1] * v.z,
                m[0][2] * v.x + m[1][2] * v.y + m[2][2] * v.z};
    }
};

Rotation make_rotation(double bearing, double downtilt)
{
    const double ca = std::cos(bearing), sa = std::sin(bearing);
    const double cb = std::cos(downtilt), sb = std::sin(downtilt);
    return {{{ca * cb, -sa, ca * sb}, {sa * cb, ca, sa * sb}, {-sb, 0.0, cb}}};
}

// Element power gain (linear) of the directional sector element, local angles.
double tr38901_power_gain(double zenith_local, double azimuth_local)
{
    const double theta_deg = zenith_local * 180.0 / std::numbers::pi;
    const double phi_deg = azimuth_local * 180.0 / std::numbers::pi;
    const double a_v = -std::min(12.0 * std::pow((theta_deg - 90.0) / 65.0, 2.0), 30.0);
    const double a_h = -std::min(12.0 * std::pow(phi_deg / 65.0, 2.0), 30.0);
    const double a_db = -std::min(-(a_v + a_h), 30.0) + 8.0;
    return std::pow(10.0, a_db / 10.0);
}

} // namespace

Vec3 spherical_unit(double zenith_rad, double azimuth_rad)
{
    const double st = std::sin(zenith_rad);
    return {st * std::cos(azimuth_rad), st * std::sin(azimuth_rad), std::cos(zenith_rad)};
}

AntennaArray AntennaArray::uniform_planar(int rows, int cols, double spacing_wavelengths, double bearing_rad,
                                          double downtilt_rad)
{
    AntennaArray a;
    a.rows = rows;
    a.cols = cols;
    a.spacing_wavelengths = spacing_wavelengths;
    a.bearing_rad = bearing_rad;
    a.downtilt_rad = downtilt_rad;
    a.validate();
    return a;
}

void AntennaArray::validate() const
{
    if (rows < 1 || cols < 1) {
        fail(ErrorCode::InvalidArray, "antenna array needs at least one row and one column");
    }
    if (!(spacing_wavelengths > 0.0) || !std::isfinite(spacing_wavelengths)) {
        fail(ErrorCode::InvalidArray, "element spacing must be positive");
    }
    if (!std::isfinite(bearing_rad) || !std::isfinite(downtilt_rad) || !std::isfinite(polarization_slant_rad)) {
        fail(ErrorCode::InvalidArray, "array orientation must be finite");
    }
}

std::vector<Vec3> AntennaArray::element_positions(double wavelength_m) const
{
    const auto rot = make_rotation(bearing_rad, downtilt_rad);
    const double d = spacing_wavelengths * wavelength_m;
    std::vector<Vec3> out;
    out.reserve(size());
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            // Panel local frame: boresight +x, columns along +y, rows along +z.
            out.push_back(rot.apply(Vec3{0.0, c * d, r * d}));
        }
    }
    return out;
}

FieldPattern AntennaArray::field(double zenith_rad, double azimuth_rad) const
{
    const double slant_c = std::cos(polarization_slant_rad);
    const double slant_s = std::sin(polarization_slant_rad);
    if (pattern == ElementPattern::Isotropic) {
        return {slant_c, slant_s};
    }
    const auto rot = make_rotation(bearing_rad, downtilt_rad);
    const Vec3 local = rot.apply_transposed(spherical_unit(zenith_rad, azimuth_rad));
    const double zen_l = std::acos(std::clamp(local.z, -1.0, 1.0));
    const double az_l = std::atan2(local.y, local.x);
    const double amp = std::sqrt(tr38901_power_gain(zen_l, az_l));
    const double f_theta_l = amp * slant_c;
    const double f_phi_l = amp * slant_s;

    // Polarisation basis rotation between the panel and the global frame (zero slant about x).
    const double beta = downtilt_rad;
    const double dphi = azimuth_rad - bearing_rad;
    const double re = std::cos(beta) * std::sin(zenith_rad) - std::sin(beta) * std::cos(zenith_rad) * std::cos(dphi);
    const double im = std::sin(beta) * std::sin(dphi);
    const double psi = std::atan2(im, re);
    return {std::cos(psi) * f_theta_l - std::sin(psi) * f_phi_l, std::sin(psi) * f_theta_l + std::cos(psi) * f_phi_l};
}

std::vector<std::complex<double>> AntennaArray::phase_terms(double zenith_rad, double azimuth_rad,
                                                            double wavelength_m) const
{
    const Vec3 r = spherical_unit(zenith_rad, azimuth_rad);
    const auto positions = element_positions(wavelength_m);
    std::vector<std::complex<double>> out;
    out.reserve(positions.size());
    const double k = 2.0 * std::numbers::pi / wavelength_m;
    for (const auto& p : positions) {
        out.push_back(std::polar(1.0, k * r.dot(p)));
    }
    return out;
}

} // namespace mmwsim
