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

#include <cmath>
#include <complex>

#include <Eigen/Core>
#include <unsupported/Eigen/FFT>

#include "kkbeam/core.hpp"

namespace kkbeam {

template <typename Real>
using ComplexVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

/// Signed frequency of DFT bin k for a length-T transform. The Nyquist bin of
/// an even-length transform maps to +fs/2.
inline double signed_frequency(int bin, int length, double fs) {
  const int folded = (2 * bin <= length) ? bin : bin - length;
  return folded * fs / length;
}

/// Full-length DFT of one trace, bin k at signed_frequency(k, T, fs).
template <typename Real>
struct TraceSpectrum {
  ComplexVector<Real> bins;
  double sampling_frequency = 1.0;

  int length() const { return static_cast<int>(bins.size()); }
  double frequency(int k) const { return signed_frequency(k, length(), sampling_frequency); }
};

/// Forward/inverse DFT pair over traces. Holds FFT plans, so give each
/// thread its own engine.
template <typename Real>
class SpectralEngine {
 public:
  TraceSpectrum<Real> forward(const Real* trace, int length, double fs) {
    TraceSpectrum<Real> s{ComplexVector<Real>(length), fs};
    fft_.fwd(s.bins.data(), trace, length);
    return s;
  }
  TraceSpectrum<Real> forward(const std::complex<Real>* trace, int length, double fs) {
    TraceSpectrum<Real> s{ComplexVector<Real>(length), fs};
    fft_.fwd(s.bins.data(), trace, length);
    return s;
  }
  template <typename Derived>
  TraceSpectrum<Real> forward(const Eigen::DenseBase<Derived>& trace, double fs) {
    const Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> tmp = trace.derived().matrix().transpose();
    return forward(tmp.data(), static_cast<int>(tmp.size()), fs);
  }

  /// Inverse DFT (scaled by 1/T) written into out[0..T).
  void inverse(const TraceSpectrum<Real>& spectrum, std::complex<Real>* out) {
    fft_.inv(out, spectrum.bins.data(), spectrum.length());
  }
  ComplexVector<Real> inverse(const TraceSpectrum<Real>& spectrum) {
    ComplexVector<Real> out(spectrum.length());
    inverse(spectrum, out.data());
    return out;
  }

 private:
  Eigen::FFT<Real> fft_;
};

/// One-sided weighting: DC and (for even T) Nyquist x1, positive bins x2,
/// negative bins set to exactly zero.
template <typename Real>
void apply_analytic_mask(TraceSpectrum<Real>& spectrum) {
  const int T = spectrum.length();
  for (int k = 1; k < T; ++k) {
    if (2 * k < T) {
      spectrum.bins(k) *= Real(2);
    } else if (2 * k > T) {
      spectrum.bins(k) = std::complex<Real>(0, 0);
    }
  }
}

/// Masked spectrum of a real trace; its inverse is the analytic signal.
template <typename Real>
TraceSpectrum<Real> analytic_spectrum(SpectralEngine<Real>& engine, const Real* trace, int length, double fs) {
  auto s = engine.forward(trace, length, fs);
  apply_analytic_mask(s);
  return s;
}

template <typename Real>
ComplexVector<Real> analytic_trace(SpectralEngine<Real>& engine, const Real* trace, int length, double fs = 1.0) {
  return engine.inverse(analytic_spectrum(engine, trace, length, fs));
}

/// Circular advance g(t) <- g(t + tau): bin at signed frequency f is
/// multiplied by exp(+i 2 pi f tau).
template <typename Real>
TraceSpectrum<Real> fractional_advance(TraceSpectrum<Real> spectrum, double tau) {
  const int T = spectrum.length();
  if (std::abs(tau) * spectrum.sampling_frequency >= T) {
    throw InvalidArgument("fractional_advance: shift exceeds the trace length");
  }
  for (int k = 0; k < T; ++k) {
    const double phase = 2.0 * kPi * spectrum.frequency(k) * tau;
    const std::complex<double> w(std::cos(phase), std::sin(phase));
    spectrum.bins(k) = std::complex<Real>(std::complex<double>(spectrum.bins(k)) * w);
  }
  return spectrum;
}

/// acc += spectrum advanced by tau, touching only bins 0..floor(T/2) (the
/// support of an analytic spectrum). Phasors run by recurrence in double and
/// are reseeded every 64 bins.
template <typename Real>
void accumulate_advanced(const std::complex<Real>* spectrum, int length, double fs, double tau,
                         std::complex<Real>* acc) {
  const int last = length / 2;
  const double step_phase = 2.0 * kPi * fs / length * tau;
  const std::complex<double> step(std::cos(step_phase), std::sin(step_phase));
  std::complex<double> w(1.0, 0.0);
  for (int k = 0; k <= last; ++k) {
    if ((k & 63) == 0) w = std::complex<double>(std::cos(step_phase * k), std::sin(step_phase * k));
    acc[k] += std::complex<Real>(std::complex<double>(spectrum[k]) * w);
    w *= step;
  }
}

/// Analytic conversion of every trace.
template <typename Real>
AnalyticRF<Real> analytic_signal(const RFVolume<Real>& rf, int threads = 1);

extern template AnalyticRF<float> analytic_signal(const RFVolume<float>&, int);
extern template AnalyticRF<double> analytic_signal(const RFVolume<double>&, int);

}  // namespace kkbeam
