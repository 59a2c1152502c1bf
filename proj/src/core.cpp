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


#include "kkbeam/core.hpp"

#include <cmath>
#include <string>

namespace kkbeam {

void TransducerArray::validate() const {
  if (!(pitch > 0.0)) throw InvalidArgument("array: pitch must be positive");
  if (num_elements < 2) throw InvalidArgument("array: need at least 2 elements");
  if (!(center_frequency > 0.0)) throw InvalidArgument("array: center frequency must be positive");
  if (!(fractional_bandwidth > 0.0 && fractional_bandwidth <= 1.0)) {
    throw InvalidArgument("array: fractional bandwidth must lie in (0, 1]");
  }
  const double band_top = center_frequency * (1.0 + fractional_bandwidth / 2.0);
  if (!(sampling_frequency > 2.0 * band_top)) {
    throw InvalidArgument("array: sampling frequency " + std::to_string(sampling_frequency) +
                          " Hz is below Nyquist for the pulse band (" + std::to_string(2.0 * band_top) + " Hz)");
  }
}

Eigen::ArrayXd element_positions(const TransducerArray& array) {
  const int L = array.num_elements;
  Eigen::ArrayXd u(L);
  for (int l = 0; l < L; ++l) u(l) = (l - 0.5 * (L - 1)) * array.pitch;
  return u;
}

void AcquisitionParams::validate() const {
  if (!(sound_speed > 0.0)) throw InvalidArgument("acquisition: sound speed must be positive");
  if (num_samples < 2) throw InvalidArgument("acquisition: need at least 2 samples");
  if (transmit_angles.empty()) throw InvalidArgument("acquisition: no transmit angles");
  for (std::size_t i = 1; i < transmit_angles.size(); ++i) {
    if (!(transmit_angles[i] > transmit_angles[i - 1])) {
      throw InvalidArgument("acquisition: transmit angles must be strictly increasing");
    }
  }
}

void ImageGrid::validate() const {
  if (!(dx > 0.0 && dz > 0.0)) throw InvalidArgument("grid: pixel size must be positive");
  if (nx < 1 || nz < 1) throw InvalidArgument("grid: empty grid");
  if (!(z0 > 0.0)) throw InvalidArgument("grid: image must lie below the array (z0 > 0)");
}

ImageGrid ImageGrid::centered(double cx, double z0, double dx, double dz, int nx, int nz) {
  return ImageGrid{cx - 0.5 * (nx - 1) * dx, z0, dx, dz, nx, nz};
}

namespace {

template <typename Volume>
void check_dims(const Volume& v, int channels, const char* what) {
  v.array.validate();
  v.params.validate();
  if (v.data.groups() != v.params.num_transmits() || v.data.channels() != channels ||
      v.data.samples() != v.params.num_samples) {
    throw DataError(std::string(what) + ": data dimensions do not match acquisition metadata");
  }
}

}  // namespace

template <typename Real>
void RFVolume<Real>::validate() const {
  check_dims(*this, array.num_elements, "RFVolume");
  if (!data.storage().allFinite()) throw DataError("RFVolume: non-finite samples");
}

template <typename Real>
void AnalyticRF<Real>::validate() const {
  check_dims(*this, array.num_elements, "AnalyticRF");
}

template <typename Real>
void CompressedRF<Real>::validate() const {
  check_dims(*this, receive.size(), "CompressedRF");
}

template <typename Real>
double CompressedRF<Real>::trace_time_origin(int m) const {
  return params.t0 + 0.5 * array.aperture() * std::abs(std::sin(receive.angles.at(m))) / params.sound_speed;
}

template struct RFVolume<float>;
template struct RFVolume<double>;
template struct AnalyticRF<float>;
template struct AnalyticRF<double>;
template struct CompressedRF<float>;
template struct CompressedRF<double>;

}  // namespace kkbeam
