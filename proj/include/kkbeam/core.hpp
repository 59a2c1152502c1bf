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

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "kkbeam/angles.hpp"
#include "kkbeam/errors.hpp"

namespace kkbeam {

/// Linear array on the line z = 0, centred on the origin.
struct TransducerArray {
  double pitch = 0.23e-3;               // m
  int num_elements = 192;
  double center_frequency = 5.2e6;      // Hz
  double sampling_frequency = 20.83e6;  // Hz
  double fractional_bandwidth = 0.6;

  void validate() const;
  /// Distance between the outermost element centres.
  double aperture() const { return pitch * (num_elements - 1); }
  double wavelength(double sound_speed) const { return sound_speed / center_frequency; }
};

/// Element lateral positions u_l = (l - (L-1)/2) * pitch.
Eigen::ArrayXd element_positions(const TransducerArray& array);

struct AcquisitionParams {
  double sound_speed = 1540.0;        // m/s
  std::vector<double> transmit_angles;  // radians, strictly increasing
  int num_samples = 2048;
  double t0 = 0.0;  // time of sample 0, s; the transmit wavefront crosses the origin at t = 0

  int num_transmits() const { return static_cast<int>(transmit_angles.size()); }
  void validate() const;
};

/// Fractional sample index of time tau. Not clamped.
inline double sample_index(double tau, double t0, double fs) { return (tau - t0) * fs; }
inline double sample_index(double tau, const AcquisitionParams& params, const TransducerArray& array) {
  return sample_index(tau, params.t0, array.sampling_frequency);
}

/// Regular pixel grid below the array. Pixel (ix, iz) sits at (x0 + ix dx, z0 + iz dz).
struct ImageGrid {
  double x0 = 0.0;
  double z0 = 1e-3;
  double dx = 1e-4;
  double dz = 1e-4;
  int nx = 1;
  int nz = 1;

  void validate() const;
  double x(int ix) const { return x0 + ix * dx; }
  double z(int iz) const { return z0 + iz * dz; }
  std::size_t pixels() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(nz); }
  /// Grid of nx x nz pixels centred laterally on cx, starting at depth z0.
  static ImageGrid centered(double cx, double z0, double dx, double dz, int nx, int nz);

  friend bool operator==(const ImageGrid&, const ImageGrid&) = default;
};

/// Dense stack of traces indexed [group][channel][sample]. Each trace is one
/// row of a row-major Eigen array, so a trace is contiguous in memory.
template <typename Scalar>
class TraceVolume {
 public:
  using Storage = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  TraceVolume() = default;
  TraceVolume(int groups, int channels, int samples)
      : groups_(groups), channels_(channels), storage_(Storage::Zero(Eigen::Index(groups) * channels, samples)) {}
  TraceVolume(int groups, int channels, Storage storage)
      : groups_(groups), channels_(channels), storage_(std::move(storage)) {
    if (storage_.rows() != Eigen::Index(groups_) * channels_) {
      throw InvalidArgument("TraceVolume: storage rows do not match groups x channels");
    }
  }

  int groups() const { return groups_; }
  int channels() const { return channels_; }
  int samples() const { return static_cast<int>(storage_.cols()); }

  auto trace(int group, int channel) const { return storage_.row(Eigen::Index(group) * channels_ + channel); }
  auto trace(int group, int channel) { return storage_.row(Eigen::Index(group) * channels_ + channel); }
  const Scalar* trace_data(int group, int channel) const {
    return storage_.data() + (Eigen::Index(group) * channels_ + channel) * storage_.cols();
  }
  Scalar* trace_data(int group, int channel) {
    return storage_.data() + (Eigen::Index(group) * channels_ + channel) * storage_.cols();
  }
  const Storage& storage() const { return storage_; }
  Storage& storage() { return storage_; }

  friend bool operator==(const TraceVolume& a, const TraceVolume& b) {
    return a.groups_ == b.groups_ && a.channels_ == b.channels_ && a.storage_.rows() == b.storage_.rows() &&
           a.storage_.cols() == b.storage_.cols() && (a.storage_ == b.storage_).all();
  }

 private:
  int groups_ = 0;
  int channels_ = 0;
  Storage storage_;
};

/// Real receive data [transmit n][element l][time t].
template <typename Real = float>
struct RFVolume {
  TransducerArray array;
  AcquisitionParams params;
  TraceVolume<Real> data;

  void validate() const;
};

/// Complex analytic receive data, same layout as RFVolume.
template <typename Real = float>
struct AnalyticRF {
  TransducerArray array;
  AcquisitionParams params;
  TraceVolume<std::complex<Real>> data;

  void validate() const;
};

/// Far-field receive data [transmit n][receive angle m][time t].
///
/// Trace m is sheared relative to an aperture edge, so its sample k holds the
/// centred-frame signal at time trace_time_origin(m) + k / fs.
template <typename Real = float>
struct CompressedRF {
  TransducerArray array;  // source array, num_elements = L
  AcquisitionParams params;
  ReceiveAngleSet receive;
  TraceVolume<std::complex<Real>> data;

  double trace_time_origin(int m) const;
  double compression_ratio() const { return double(array.num_elements) / receive.size(); }
  void validate() const;
};

template <typename Real = float>
struct ComplexImage {
  ImageGrid grid;
  Eigen::Array<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic> pixels;  // nx x nz

  static ComplexImage zeros(const ImageGrid& grid) {
    return {grid, Eigen::Array<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>::Zero(grid.nx, grid.nz)};
  }
};

template <typename Real = float>
struct IntensityImage {
  ImageGrid grid;
  Eigen::Array<Real, Eigen::Dynamic, Eigen::Dynamic> pixels;  // nx x nz, nonnegative

  static IntensityImage zeros(const ImageGrid& grid) {
    return {grid, Eigen::Array<Real, Eigen::Dynamic, Eigen::Dynamic>::Zero(grid.nx, grid.nz)};
  }
  /// Pixel indices of the maximum.
  std::pair<int, int> argmax() const {
    Eigen::Index ix = 0, iz = 0;
    pixels.maxCoeff(&ix, &iz);
    return {int(ix), int(iz)};
  }
};

inline constexpr double kPi = 3.14159265358979323846;
inline double deg2rad(double deg) { return deg * kPi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / kPi; }

}  // namespace kkbeam
