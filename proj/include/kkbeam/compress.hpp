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

#include <optional>
#include <vector>

#include "kkbeam/core.hpp"
#include "kkbeam/spectral.hpp"

namespace kkbeam {

/// Shear offsets d_l for receive angle theta (m). Positive angles are
/// referenced to the last element, negative ones to the first, so that the
/// advance d_l sin(theta)/c is never negative; theta = 0 gives all zeros.
Eigen::ArrayXd shear_offsets(const TransducerArray& array, double theta);

/// Trailing samples that a circular shear by the largest receive angle can
/// wrap: ceil(aperture * sin(max|theta_o|) * fs / c).
int guard_band_samples(const TransducerArray& array, double sound_speed, const ReceiveAngleSet& receive);

struct CompressOptions {
  /// Last sample index any beamformer will read. When set, compress checks
  /// T >= last_used_sample + guard band.
  std::optional<int> last_used_sample;
  int threads = 1;
};

/// Throws DataError naming the required padding when the guard band is short.
void check_guard_band(const TransducerArray& array, const AcquisitionParams& params, const ReceiveAngleSet& receive,
                      int last_used_sample);

/// Far-field decomposition RF_theta(theta_o, t) = sum_l RF_u(u_l, t + d_l sin(theta_o)/c),
/// with each shear applied in the frequency domain.
template <typename Real>
CompressedRF<Real> compress(const AnalyticRF<Real>& rf, const ReceiveAngleSet& receive,
                            const CompressOptions& options = {});

extern template CompressedRF<float> compress(const AnalyticRF<float>&, const ReceiveAngleSet&, const CompressOptions&);
extern template CompressedRF<double> compress(const AnalyticRF<double>&, const ReceiveAngleSet&,
                                              const CompressOptions&);

/// Per-trace one-sided spectra, the shared first stage of the staged
/// pipeline. Only bins 0..floor(T/2) are stored.
template <typename Real>
struct SpectralVolume {
  TransducerArray array;
  AcquisitionParams params;
  TraceVolume<std::complex<Real>> bins;  // [n][channel][0..T/2]

  int num_samples() const { return params.num_samples; }
};

/// FFT of every real trace followed by the analytic weighting.
template <typename Real>
SpectralVolume<Real> forward_spectra(const RFVolume<Real>& rf, int threads = 1);

/// Shear-and-sum directly on analytic spectra: [n][l] -> [n][m].
template <typename Real>
SpectralVolume<Real> compress_spectra(const SpectralVolume<Real>& spectra, const ReceiveAngleSet& receive,
                                      int threads = 1);

/// Inverse FFT of one-sided spectra to full-length analytic traces.
template <typename Real>
TraceVolume<std::complex<Real>> inverse_spectra(const SpectralVolume<Real>& spectra, int threads = 1);

extern template SpectralVolume<float> forward_spectra(const RFVolume<float>&, int);
extern template SpectralVolume<double> forward_spectra(const RFVolume<double>&, int);
extern template SpectralVolume<float> compress_spectra(const SpectralVolume<float>&, const ReceiveAngleSet&, int);
extern template SpectralVolume<double> compress_spectra(const SpectralVolume<double>&, const ReceiveAngleSet&, int);
extern template TraceVolume<std::complex<float>> inverse_spectra(const SpectralVolume<float>&, int);
extern template TraceVolume<std::complex<double>> inverse_spectra(const SpectralVolume<double>&, int);

}  // namespace kkbeam
