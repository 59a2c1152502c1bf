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

#include <chrono>
#include <vector>

#include "kkbeam/beamform.hpp"
#include "kkbeam/compress.hpp"
#include "kkbeam/core.hpp"

namespace kkbeam {

/// Wall time per processing stage, in milliseconds.
struct StageTimings {
  double reorg_fft_ms = 0.0;         // deinterleave + forward FFT of every element trace
  double hilbert_compress_ms = 0.0;  // analytic weighting (DAS) or shear-and-sum (KK)
  double ifft_ms = 0.0;
  double beamform_ms = 0.0;
  double total_ms = 0.0;
  double compression_ratio = 1.0;
};

class StageClock {
 public:
  StageClock() : last_(std::chrono::steady_clock::now()) {}
  /// Milliseconds since construction or the previous lap.
  double lap() {
    const auto t = std::chrono::steady_clock::now();
    const double ms = std::chrono::duration<double, std::milli>(t - last_).count();
    last_ = t;
    return ms;
  }

 private:
  std::chrono::steady_clock::time_point last_;
};

/// Analytic conversion through the staged spectral path.
template <typename Real>
AnalyticRF<Real> analytic_staged(const RFVolume<Real>& rf, int threads = 1, StageTimings* timings = nullptr);

/// FFT -> frequency-domain shear-and-sum -> IFFT. Matches compress() applied
/// to analytic_signal(rf) up to rounding.
template <typename Real>
CompressedRF<Real> compress_staged(const RFVolume<Real>& rf, const ReceiveAngleSet& receive, int threads = 1,
                                   StageTimings* timings = nullptr, const CompressOptions& options = {});

/// Several receive sets from one forward FFT pass.
template <typename Real>
std::vector<CompressedRF<Real>> compress_staged(const RFVolume<Real>& rf, const std::vector<ReceiveAngleSet>& sets,
                                                int threads = 1, const CompressOptions& options = {});

extern template AnalyticRF<float> analytic_staged(const RFVolume<float>&, int, StageTimings*);
extern template AnalyticRF<double> analytic_staged(const RFVolume<double>&, int, StageTimings*);
extern template CompressedRF<float> compress_staged(const RFVolume<float>&, const ReceiveAngleSet&, int, StageTimings*,
                                                    const CompressOptions&);
extern template CompressedRF<double> compress_staged(const RFVolume<double>&, const ReceiveAngleSet&, int,
                                                     StageTimings*, const CompressOptions&);
extern template std::vector<CompressedRF<float>> compress_staged(const RFVolume<float>&,
                                                                 const std::vector<ReceiveAngleSet>&, int,
                                                                 const CompressOptions&);
extern template std::vector<CompressedRF<double>> compress_staged(const RFVolume<double>&,
                                                                  const std::vector<ReceiveAngleSet>&, int,
                                                                  const CompressOptions&);

}  // namespace kkbeam
