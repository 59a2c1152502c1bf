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


#include "kkbeam/simulate.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "kkbeam/parallel.hpp"

namespace kkbeam {

namespace {

const double kSqrt2Ln2 = std::sqrt(2.0 * std::log(2.0));

}  // namespace

double Pulse::duration_6db() const { return 2.0 * kSqrt2Ln2 * sigma_t; }

double Pulse::operator()(double t) const {
  const double p = t * sampling_frequency;
  if (p < 0.0 || p >= length()) return 0.0;
  const int i = static_cast<int>(p);
  const double a = p - i;
  const double next = i + 1 < length() ? waveform(i + 1) : 0.0;
  return (1.0 - a) * waveform(i) + a * next;
}

Pulse make_pulse(double center_frequency, double fractional_bandwidth, double sampling_frequency) {
  if (!(center_frequency > 0.0)) throw InvalidArgument("pulse: center frequency must be positive");
  if (!(fractional_bandwidth > 0.0 && fractional_bandwidth <= 1.0)) {
    throw InvalidArgument("pulse: fractional bandwidth must lie in (0, 1]");
  }
  if (!(sampling_frequency > 2.0 * center_frequency * (1.0 + fractional_bandwidth / 2.0))) {
    throw InvalidArgument("pulse: sampling frequency below Nyquist for the pulse band");
  }
  Pulse p;
  p.center_frequency = center_frequency;
  p.fractional_bandwidth = fractional_bandwidth;
  p.sampling_frequency = sampling_frequency;
  // Amplitude spectrum exp(-(f-nu)^2 / (2 sf^2)) is at half amplitude when
  // |f-nu| = sf sqrt(2 ln 2); the full width there equals bw * nu.
  const double sigma_f = fractional_bandwidth * center_frequency / (2.0 * kSqrt2Ln2);
  p.sigma_t = 1.0 / (2.0 * kPi * sigma_f);
  const double half_support = p.sigma_t * std::sqrt(2.0 * std::log(1e3));
  const int half = static_cast<int>(std::ceil(half_support * sampling_frequency));
  p.waveform.resize(2 * half + 1);
  for (int i = -half; i <= half; ++i) {
    const double t = i / sampling_frequency;
    p.waveform(i + half) = std::exp(-0.5 * t * t / (p.sigma_t * p.sigma_t)) * std::cos(2.0 * kPi * center_frequency * t);
  }
  p.waveform(half) = 1.0;
  return p;
}

Phantom wire_phantom(std::span<const double> spacings, double depth, double x_first) {
  if (!(depth > 0.0)) throw InvalidArgument("wire phantom: depth must be positive");
  Phantom ph;
  ph.label = "wires";
  double x = x_first;
  ph.scatterers.push_back({x, depth, 1.0});
  for (double s : spacings) {
    if (!(s > 0.0)) throw InvalidArgument("wire phantom: spacings must be positive");
    x += s;
    ph.scatterers.push_back({x, depth, 1.0});
  }
  return ph;
}

Phantom speckle_phantom(const Rect& region, double density_per_mm2, Point inclusion_center, double inclusion_radius,
                        std::uint64_t seed) {
  if (!(density_per_mm2 > 0.0)) throw InvalidArgument("speckle phantom: density must be positive");
  if (!(region.width() > 0.0 && region.height() > 0.0)) throw InvalidArgument("speckle phantom: empty region");
  if (!(region.z0 > 0.0)) throw InvalidArgument("speckle phantom: region must lie below the array");
  if (inclusion_radius < 0.0) throw InvalidArgument("speckle phantom: negative inclusion radius");
  if (inclusion_radius > 0.0 &&
      !(region.contains(inclusion_center.x - inclusion_radius, inclusion_center.z - inclusion_radius) &&
        region.contains(inclusion_center.x + inclusion_radius, inclusion_center.z + inclusion_radius))) {
    throw InvalidArgument("speckle phantom: inclusion must lie inside the region");
  }
  const double area_mm2 = region.width() * region.height() * 1e6;
  const auto count = static_cast<long>(std::llround(density_per_mm2 * area_mm2));

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(region.x0, region.x1);
  std::uniform_real_distribution<double> uz(region.z0, region.z1);
  std::normal_distribution<double> amp(0.0, 1.0);

  Phantom ph;
  ph.label = "speckle";
  ph.scatterers.reserve(count);
  const double r2 = inclusion_radius * inclusion_radius;
  for (long i = 0; i < count; ++i) {
    // Draw all three values so the sequence does not depend on the inclusion.
    const double x = ux(rng);
    const double z = uz(rng);
    const double a = amp(rng);
    const double dx = x - inclusion_center.x, dz = z - inclusion_center.z;
    if (dx * dx + dz * dz < r2) continue;
    ph.scatterers.push_back({x, z, a});
  }
  return ph;
}

double resolution_cell_area(const TransducerArray& array, double sound_speed, const Pulse& pulse, double depth) {
  const double lateral = array.wavelength(sound_speed) * depth / array.aperture();
  const double axial = sound_speed * pulse.duration_6db() / 2.0;
  return lateral * axial;
}

template <typename Real>
RFVolume<Real> simulate_rf(const TransducerArray& array, const AcquisitionParams& params, const Phantom& phantom,
                           const Pulse& pulse, const SimulationOptions& options) {
  array.validate();
  params.validate();
  const int N = params.num_transmits();
  const int L = array.num_elements;
  const int T = params.num_samples;
  const double fs = array.sampling_frequency;
  const double c = params.sound_speed;
  const Eigen::ArrayXd u = element_positions(array);
  const int S = static_cast<int>(phantom.scatterers.size());
  const int P = pulse.length();

  for (const auto& s : phantom.scatterers) {
    if (!(s.z > 0.0) || !std::isfinite(s.x) || !std::isfinite(s.reflectivity)) {
      throw InvalidArgument("simulate_rf: scatterers need finite x, reflectivity and z > 0");
    }
  }

  // Transmit delays per scatterer and angle.
  Eigen::ArrayXXd tau_in(S, N);
  for (int n = 0; n < N; ++n) {
    const double sx = std::sin(params.transmit_angles[n]), sz = std::cos(params.transmit_angles[n]);
    for (int s = 0; s < S; ++s) {
      tau_in(s, n) = (phantom.scatterers[s].x * sx + phantom.scatterers[s].z * sz) / c;
    }
  }

  // Per-sample interpolation slope; the waveform ramps to zero past its last sample.
  Eigen::ArrayXd slope(P);
  slope.head(P - 1) = pulse.waveform.tail(P - 1) - pulse.waveform.head(P - 1);
  slope(P - 1) = -pulse.waveform(P - 1);

  TraceVolume<Real> out(N, L, T);
  parallel_chunks(N * L, options.threads, [&](int lo, int hi) {
    std::vector<double> acc(T);
    for (int i = lo; i < hi; ++i) {
      const int n = i / L, l = i % L;
      std::fill(acc.begin(), acc.end(), 0.0);
      for (int s = 0; s < S; ++s) {
        const auto& sc = phantom.scatterers[s];
        const double dx = sc.x - u(l);
        const double dist = std::sqrt(dx * dx + sc.z * sc.z);
        const double start = (tau_in(s, n) + dist / c - params.t0) * fs;
        if (start < 0.0 || start + P >= T) {
          std::ostringstream os;
          os << "simulate_rf: scatterer " << s << " at (" << sc.x << ", " << sc.z
             << ") m falls outside the acquisition window (transmit " << n << ", element " << l << ", start sample "
             << start << ", window " << T << ")";
          throw DataError(os.str());
        }
        double amp = sc.reflectivity;
        if (options.spherical_spreading) amp /= std::sqrt(dist);
        const int k0 = static_cast<int>(std::ceil(start));
        const double a = k0 - start;  // waveform position of sample k is (k - k0) + a
        double* dst = acc.data() + k0;
        for (int p = 0; p < P; ++p) dst[p] += amp * (pulse.waveform(p) + a * slope(p));
      }
      Real* dst = out.trace_data(n, l);
      for (int k = 0; k < T; ++k) dst[k] = static_cast<Real>(acc[k]);
    }
  });

  if (options.noise_rms > 0.0) {
    std::mt19937_64 rng(options.noise_seed);
    std::normal_distribution<double> noise(0.0, options.noise_rms);
    auto& st = out.storage();
    for (Eigen::Index r = 0; r < st.rows(); ++r) {
      for (Eigen::Index k = 0; k < st.cols(); ++k) st(r, k) += static_cast<Real>(noise(rng));
    }
  }
  return RFVolume<Real>{array, params, std::move(out)};
}

template RFVolume<float> simulate_rf(const TransducerArray&, const AcquisitionParams&, const Phantom&, const Pulse&,
                                     const SimulationOptions&);
template RFVolume<double> simulate_rf(const TransducerArray&, const AcquisitionParams&, const Phantom&, const Pulse&,
                                      const SimulationOptions&);

}  // namespace kkbeam
