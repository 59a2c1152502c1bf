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


#include "kkbeam/pipeline.hpp"

namespace kkbeam {

template <typename Real>
AnalyticRF<Real> analytic_staged(const RFVolume<Real>& rf, int threads, StageTimings* timings) {
  StageClock clock;
  const auto spectra = forward_spectra(rf, threads);
  const double fft_ms = clock.lap();
  auto traces = inverse_spectra(spectra, threads);
  const double ifft_ms = clock.lap();
  if (timings) {
    // The analytic weighting is fused into the forward pass.
    timings->reorg_fft_ms = fft_ms;
    timings->hilbert_compress_ms = 0.0;
    timings->ifft_ms = ifft_ms;
    timings->compression_ratio = 1.0;
  }
  return AnalyticRF<Real>{rf.array, rf.params, std::move(traces)};
}

template <typename Real>
CompressedRF<Real> compress_staged(const RFVolume<Real>& rf, const ReceiveAngleSet& receive, int threads,
                                   StageTimings* timings, const CompressOptions& options) {
  if (options.last_used_sample) check_guard_band(rf.array, rf.params, receive, *options.last_used_sample);
  StageClock clock;
  const auto spectra = forward_spectra(rf, threads);
  const double fft_ms = clock.lap();
  const auto compressed = compress_spectra(spectra, receive, threads);
  const double compress_ms = clock.lap();
  auto traces = inverse_spectra(compressed, threads);
  const double ifft_ms = clock.lap();
  if (timings) {
    timings->reorg_fft_ms = fft_ms;
    timings->hilbert_compress_ms = compress_ms;
    timings->ifft_ms = ifft_ms;
    timings->compression_ratio = double(rf.array.num_elements) / receive.size();
  }
  return CompressedRF<Real>{rf.array, rf.params, receive, std::move(traces)};
}

template <typename Real>
std::vector<CompressedRF<Real>> compress_staged(const RFVolume<Real>& rf, const std::vector<ReceiveAngleSet>& sets,
                                                int threads, const CompressOptions& options) {
  if (options.last_used_sample) {
    for (const auto& s : sets) check_guard_band(rf.array, rf.params, s, *options.last_used_sample);
  }
  const auto spectra = forward_spectra(rf, threads);
  std::vector<CompressedRF<Real>> out;
  for (const auto& s : sets) {
    out.push_back(CompressedRF<Real>{rf.array, rf.params, s, inverse_spectra(compress_spectra(spectra, s, threads), threads)});
  }
  return out;
}

template AnalyticRF<float> analytic_staged(const RFVolume<float>&, int, StageTimings*);
template AnalyticRF<double> analytic_staged(const RFVolume<double>&, int, StageTimings*);
template CompressedRF<float> compress_staged(const RFVolume<float>&, const ReceiveAngleSet&, int, StageTimings*,
                                             const CompressOptions&);
template CompressedRF<double> compress_staged(const RFVolume<double>&, const ReceiveAngleSet&, int, StageTimings*,
                                              const CompressOptions&);
template std::vector<CompressedRF<float>> compress_staged(const RFVolume<float>&, const std::vector<ReceiveAngleSet>&,
                                                          int, const CompressOptions&);
template std::vector<CompressedRF<double>> compress_staged(const RFVolume<double>&,
                                                           const std::vector<ReceiveAngleSet>&, int,
                                                           const CompressOptions&);

}  // namespace kkbeam
