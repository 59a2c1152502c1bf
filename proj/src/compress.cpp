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


#include "kkbeam/compress.hpp"

#include <cmath>
#include <string>

#include "kkbeam/parallel.hpp"

namespace kkbeam {

Eigen::ArrayXd shear_offsets(const TransducerArray& array, double theta) {
  const Eigen::ArrayXd u = element_positions(array);
  if (theta > 0.0) return u(u.size() - 1) - u;
  if (theta < 0.0) return u(0) - u;
  return Eigen::ArrayXd::Zero(u.size());
}

int guard_band_samples(const TransducerArray& array, double sound_speed, const ReceiveAngleSet& receive) {
  const double shear = array.aperture() * std::sin(receive.max_abs()) / sound_speed;
  return static_cast<int>(std::ceil(shear * array.sampling_frequency - 1e-9));
}

void check_guard_band(const TransducerArray& array, const AcquisitionParams& params, const ReceiveAngleSet& receive,
                      int last_used_sample) {
  const int guard = guard_band_samples(array, params.sound_speed, receive);
  const int required = last_used_sample + guard;
  if (params.num_samples < required) {
    throw DataError("compress: guard band violated; T=" + std::to_string(params.num_samples) + " but " +
                    std::to_string(required) + " samples are needed (pad with " +
                    std::to_string(required - params.num_samples) + " trailing zeros)");
  }
}

namespace {

// Per receive angle, the advance (s) applied to each element trace.
Eigen::ArrayXXd shear_table(const TransducerArray& array, double c, const ReceiveAngleSet& receive) {
  Eigen::ArrayXXd tau(array.num_elements, receive.size());
  for (int m = 0; m < receive.size(); ++m) {
    tau.col(m) = shear_offsets(array, receive.angles[m]) * (std::sin(receive.angles[m]) / c);
  }
  return tau;
}

}  // namespace

template <typename Real>
CompressedRF<Real> compress(const AnalyticRF<Real>& rf, const ReceiveAngleSet& receive,
                            const CompressOptions& options) {
  rf.validate();
  if (receive.size() < 1) throw InvalidArgument("compress: empty receive set");
  if (options.last_used_sample) check_guard_band(rf.array, rf.params, receive, *options.last_used_sample);
  const int N = rf.data.groups();
  const int L = rf.data.channels();
  const int M = receive.size();
  const int T = rf.data.samples();
  const double fs = rf.array.sampling_frequency;
  const Eigen::ArrayXXd tau = shear_table(rf.array, rf.params.sound_speed, receive);

  TraceVolume<std::complex<Real>> out(N, M, T);
  parallel_chunks(N, options.threads, [&](int lo, int hi) {
    SpectralEngine<Real> engine;
    std::vector<TraceSpectrum<Real>> spectra(L);
    for (int n = lo; n < hi; ++n) {
      for (int l = 0; l < L; ++l) spectra[l] = engine.forward(rf.data.trace_data(n, l), T, fs);
      for (int m = 0; m < M; ++m) {
        TraceSpectrum<Real> sum{ComplexVector<Real>::Zero(T), fs};
        if (receive.angles[m] == 0.0) {
          for (int l = 0; l < L; ++l) sum.bins += spectra[l].bins;
        } else {
          for (int l = 0; l < L; ++l) sum.bins += fractional_advance(spectra[l], tau(l, m)).bins;
        }
        engine.inverse(sum, out.trace_data(n, m));
      }
    }
  });
  return CompressedRF<Real>{rf.array, rf.params, receive, std::move(out)};
}

template <typename Real>
SpectralVolume<Real> forward_spectra(const RFVolume<Real>& rf, int threads) {
  rf.validate();
  const int N = rf.data.groups(), L = rf.data.channels(), T = rf.data.samples();
  const int K = T / 2 + 1;
  const double fs = rf.array.sampling_frequency;
  TraceVolume<std::complex<Real>> bins(N, L, K);
  parallel_chunks(N * L, threads, [&](int lo, int hi) {
    SpectralEngine<Real> engine;
    for (int i = lo; i < hi; ++i) {
      const int n = i / L, l = i % L;
      const auto s = analytic_spectrum(engine, rf.data.trace_data(n, l), T, fs);
      std::copy_n(s.bins.data(), K, bins.trace_data(n, l));
    }
  });
  return SpectralVolume<Real>{rf.array, rf.params, std::move(bins)};
}

template <typename Real>
SpectralVolume<Real> compress_spectra(const SpectralVolume<Real>& spectra, const ReceiveAngleSet& receive,
                                      int threads) {
  const int N = spectra.bins.groups(), L = spectra.bins.channels(), K = spectra.bins.samples();
  const int M = receive.size();
  const int T = spectra.num_samples();
  if (L != spectra.array.num_elements) throw DataError("compress_spectra: input is not element data");
  const double fs = spectra.array.sampling_frequency;
  const Eigen::ArrayXXd tau = shear_table(spectra.array, spectra.params.sound_speed, receive);
  TraceVolume<std::complex<Real>> out(N, M, K);
  parallel_chunks(N * M, threads, [&](int lo, int hi) {
    for (int i = lo; i < hi; ++i) {
      const int n = i / M, m = i % M;
      std::complex<Real>* acc = out.trace_data(n, m);
      for (int l = 0; l < L; ++l) {
        if (tau(l, m) == 0.0) {
          const std::complex<Real>* src = spectra.bins.trace_data(n, l);
          for (int k = 0; k < K; ++k) acc[k] += src[k];
        } else {
          accumulate_advanced(spectra.bins.trace_data(n, l), T, fs, tau(l, m), acc);
        }
      }
    }
  });
  return SpectralVolume<Real>{spectra.array, spectra.params, std::move(out)};
}

template <typename Real>
TraceVolume<std::complex<Real>> inverse_spectra(const SpectralVolume<Real>& spectra, int threads) {
  const int N = spectra.bins.groups(), C = spectra.bins.channels(), K = spectra.bins.samples();
  const int T = spectra.num_samples();
  const double fs = spectra.array.sampling_frequency;
  TraceVolume<std::complex<Real>> out(N, C, T);
  parallel_chunks(N * C, threads, [&](int lo, int hi) {
    SpectralEngine<Real> engine;
    TraceSpectrum<Real> full{ComplexVector<Real>::Zero(T), fs};
    for (int i = lo; i < hi; ++i) {
      const int n = i / C, c = i % C;
      std::copy_n(spectra.bins.trace_data(n, c), K, full.bins.data());
      engine.inverse(full, out.trace_data(n, c));
    }
  });
  return out;
}

template CompressedRF<float> compress(const AnalyticRF<float>&, const ReceiveAngleSet&, const CompressOptions&);
template CompressedRF<double> compress(const AnalyticRF<double>&, const ReceiveAngleSet&, const CompressOptions&);
template SpectralVolume<float> forward_spectra(const RFVolume<float>&, int);
template SpectralVolume<double> forward_spectra(const RFVolume<double>&, int);
template SpectralVolume<float> compress_spectra(const SpectralVolume<float>&, const ReceiveAngleSet&, int);
template SpectralVolume<double> compress_spectra(const SpectralVolume<double>&, const ReceiveAngleSet&, int);
template TraceVolume<std::complex<float>> inverse_spectra(const SpectralVolume<float>&, int);
template TraceVolume<std::complex<double>> inverse_spectra(const SpectralVolume<double>&, int);

}  // namespace kkbeam
