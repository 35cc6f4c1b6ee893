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

#include <complex>
#include <cstddef>
#include <vector>

namespace mmwsim {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
};

/// Spherical unit vector for a zenith/azimuth pair (radians).
Vec3 spherical_unit(double zenith_rad, double azimuth_rad);

enum class ElementPattern { Isotropic, Tr38901 };

/// Field pattern of one element, already expressed in the global theta/phi basis.
struct FieldPattern {
    double theta = 0.0;
    double phi = 0.0;
};

/// Uniform planar array. Elements lie on a rows x cols lattice in the plane
/// orthogonal to the array boresight; orientation rotates the whole panel.
struct AntennaArray {
    int rows = 1;
    int cols = 1;
    double spacing_wavelengths = 0.5;
    double bearing_rad = 0.0;
    double downtilt_rad = 0.0;
    double polarization_slant_rad = 0.0;
    ElementPattern pattern = ElementPattern::Isotropic;

    static AntennaArray uniform_planar(int rows, int cols, double spacing_wavelengths = 0.5,
                                       double bearing_rad = 0.0, double downtilt_rad = 0.0);

    std::size_t size() const { return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols); }
    void validate() const;

    /// Element positions in metres, global frame. Index = row * cols + col.
    std::vector<Vec3> element_positions(double wavelength_m) const;

    FieldPattern field(double zenith_rad, double azimuth_rad) const;

    /// exp(j 2 pi r^T d_k / lambda) for every element k.
    std::vector<std::complex<double>> phase_terms(double zenith_rad, double azimuth_rad, double wavelength_m) const;
};

} // namespace mmwsim
