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


#include "kkbeam/spectral.hpp"

#include "kkbeam/parallel.hpp"

namespace kkbeam {

template <typename Real>
AnalyticRF<Real> analytic_signal(const RFVolume<Real>& rf, int threads) {
  rf.validate();
  const int N = rf.data.groups();
  const int L = rf.data.channels();
  const int T = rf.data.samples();
  if (T < 2) throw InvalidArgument("analytic_signal: need T >= 2");
  TraceVolume<std::complex<Real>> out(N, L, T);
  const double fs = rf.array.sampling_frequency;
  parallel_chunks(N * L, threads, [&](int lo, int hi) {
    SpectralEngine<Real> engine;
    for (int i = lo; i < hi; ++i) {
      const int n = i / L, l = i % L;
      engine.inverse(analytic_spectrum(engine, rf.data.trace_data(n, l), T, fs), out.trace_data(n, l));
    }
  });
  return AnalyticRF<Real>{rf.array, rf.params, std::move(out)};
}

template AnalyticRF<float> analytic_signal(const RFVolume<float>&, int);
template AnalyticRF<double> analytic_signal(const RFVolume<double>&, int);

}  // namespace kkbeam
