/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The kkbeam Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "kkbeam/core.hpp"

namespace kkbeam {

struct Scatterer {
  double x = 0.0;  // m
  double z = 0.0;  // m, > 0
  double reflectivity = 1.0;
};

struct Phantom {
  std::vector<Scatterer> scatterers;
  std::string label;
};

struct Point {
  double x = 0.0;
  double z = 0.0;
};

struct Rect {
  double x0 = 0.0, z0 = 0.0, x1 = 0.0, z1 = 0.0;

  double width() const { return x1 - x0; }
  double height() const { return z1 - z0; }
  bool contains(double x, double z) const { return x >= x0 && x <= x1 && z >= z0 && z <= z1; }
};

/// Gaussian-enveloped cosine sampled at fs, peak sample at index (len-1)/2.
struct Pulse {
  double center_frequency = 0.0;
  double fractional_bandwidth = 0.0;
  double sampling_frequency = 0.0;
  double sigma_t = 0.0;  // envelope standard deviation, s
  Eigen::ArrayXd waveform;

  int length() const { return static_cast<int>(waveform.size()); }
  /// Time from arrival (first waveform sample) to the envelope peak.
  double peak_delay() const { return 0.5 * (length() - 1) / sampling_frequency; }
  /// Envelope full width at half amplitude (-6 dB), s.
  double duration_6db() const;
  /// Waveform value at time t after arrival, linearly interpolated; 0 outside support.
  double operator()(double t) const;
};

/// -6 dB spectral full width equals fractional_bandwidth * nu. The envelope is
/// truncated where it falls below 1e-3 of the peak.
Pulse make_pulse(double center_frequency, double fractional_bandwidth, double sampling_frequency);
inline Pulse make_pulse(const TransducerArray& array) {
  return make_pulse(array.center_frequency, array.fractional_bandwidth, array.sampling_frequency);
}

/// Unit-reflectivity points at depth `depth`, the first at x_first and each
/// next one `spacings[i]` further right.
Phantom wire_phantom(std::span<const double> spacings, double depth, double x_first = 0.0);

/// Seeded uniform speckle over `region` with standard-normal reflectivities.
/// Scatterers strictly inside the inclusion circle are removed.
Phantom speckle_phantom(const Rect& region, double density_per_mm2, Point inclusion_center, double inclusion_radius,
                        std::uint64_t seed);

/// Lateral x axial resolution cell, lambda z / aperture x pulse length / 2, in m^2.
double resolution_cell_area(const TransducerArray& array, double sound_speed, const Pulse& pulse, double depth);

struct SimulationOptions {
  double noise_rms = 0.0;  // additive white Gaussian noise, same units as samples
  std::uint64_t noise_seed = 0;
  bool spherical_spreading = false;  // scale each echo by 1/sqrt(receive distance in m)
  int threads = 1;
};

/// Plane-wave forward model: data[n][l][t] = sum_s refl_s pulse(t - tau_in - tau_out)
/// with tau_in = (x sin th + z cos th)/c and tau_out = |r - (u_l, 0)|/c.
template <typename Real = float>
RFVolume<Real> simulate_rf(const TransducerArray& array, const AcquisitionParams& params, const Phantom& phantom,
                           const Pulse& pulse, const SimulationOptions& options = {});

extern template RFVolume<float> simulate_rf(const TransducerArray&, const AcquisitionParams&, const Phantom&,
                                            const Pulse&, const SimulationOptions&);
extern template RFVolume<double> simulate_rf(const TransducerArray&, const AcquisitionParams&, const Phantom&,
                                             const Pulse&, const SimulationOptions&);

}  // namespace kkbeam
