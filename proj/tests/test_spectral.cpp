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


#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "kkbeam/spectral.hpp"

using namespace kkbeam;
using cd = std::complex<double>;

namespace {

Eigen::VectorXd random_real(int T, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  Eigen::VectorXd x(T);
  for (int i = 0; i < T; ++i) x(i) = g(rng);
  return x;
}

Eigen::VectorXcd random_complex(int T, unsigned seed) {
  const auto re = random_real(T, seed), im = random_real(T, seed + 100);
  Eigen::VectorXcd x(T);
  for (int i = 0; i < T; ++i) x(i) = {re(i), im(i)};
  return x;
}

// Direct O(T^2) DFT used as an FFT-free reference.
Eigen::VectorXcd dft(const Eigen::VectorXcd& x) {
  const int T = static_cast<int>(x.size());
  Eigen::VectorXcd X(T);
  for (int k = 0; k < T; ++k) {
    cd s = 0.0;
    for (int n = 0; n < T; ++n) s += x(n) * std::polar(1.0, -2.0 * kPi * double(k) * n / T);
    X(k) = s;
  }
  return X;
}

double rel_err(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) { return (a - b).norm() / b.norm(); }

}  // namespace

TEST_CASE("signed frequencies") {
  CHECK(signed_frequency(0, 8, 8.0) == 0.0);
  CHECK(signed_frequency(3, 8, 8.0) == 3.0);
  CHECK(signed_frequency(4, 8, 8.0) == 4.0);  // Nyquist maps to +fs/2
  CHECK(signed_frequency(5, 8, 8.0) == -3.0);
  CHECK(signed_frequency(4, 9, 9.0) == 4.0);
  CHECK(signed_frequency(5, 9, 9.0) == -4.0);
}

TEST_CASE("forward and inverse are a matched pair") {
  SpectralEngine<double> engine;
  for (int T : {64, 100, 1023}) {
    const auto x = random_complex(T, T);
    const auto s = engine.forward(x.data(), T, 1.0);
    CHECK(rel_err(engine.inverse(s), x) < 1e-12);
    // Parseval with the unscaled forward transform.
    CHECK(s.bins.squaredNorm() / T == doctest::Approx(x.squaredNorm()).epsilon(1e-12));
    if (T <= 100) CHECK(rel_err(s.bins, dft(x)) < 1e-12);
  }
}

TEST_CASE("analytic signal of an on-bin cosine is a unit phasor") {
  SpectralEngine<double> engine;
  const int T = 256;
  Eigen::VectorXd x(T);
  for (int n = 0; n < T; ++n) x(n) = std::cos(2 * kPi * 19 * n / T);
  const auto z = analytic_trace(engine, x.data(), T);
  for (int n = 0; n < T; ++n) {
    CHECK(std::abs(z(n) - std::polar(1.0, 2 * kPi * 19 * n / T)) < 1e-12);
  }
}

TEST_CASE("analytic signal of a constant is the constant") {
  SpectralEngine<double> engine;
  const Eigen::VectorXd x = Eigen::VectorXd::Constant(128, 2.5);
  const auto z = analytic_trace(engine, x.data(), 128);
  for (int n = 0; n < 128; ++n) CHECK(std::abs(z(n) - cd(2.5, 0.0)) < 1e-12);
}

TEST_CASE("analytic signal of an impulse matches the closed form") {
  SpectralEngine<double> engine;
  for (int T : {64, 65}) {
    const int k0 = 17;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(T);
    x(k0) = 1.0;
    const auto z = analytic_trace(engine, x.data(), T);
    CHECK(z(k0).real() == doctest::Approx(1.0).epsilon(1e-12));
    for (int n = 0; n < T; ++n) {
      // Imaginary part: (2/T) sum_{0<k<T/2} sin(2 pi k m / T), m = n - k0.
      double im = 0.0;
      for (int k = 1; 2 * k < T; ++k) im += std::sin(2 * kPi * k * (n - k0) / T);
      im *= 2.0 / T;
      CHECK(std::abs(z(n).imag() - im) < 1e-12);
      CHECK(std::abs(z(n).real() - x(n)) < 1e-12);
    }
  }
}

TEST_CASE("analytic spectrum is exactly one-sided") {
  SpectralEngine<double> engine;
  for (int T : {128, 129}) {
    const auto x = random_real(T, 7);
    const auto s = analytic_spectrum(engine, x.data(), T, 1.0);
    for (int k = 0; k < T; ++k) {
      if (s.frequency(k) < 0.0) CHECK(s.bins(k) == cd(0.0, 0.0));
    }
    const auto z = engine.inverse(s);
    CHECK((z.real() - x).norm() <= 1e-12 * x.norm());
    // Transforming the output again finds no negative-frequency energy.
    const auto back = engine.forward(z.data(), T, 1.0);
    double neg = 0.0;
    for (int k = 0; k < T; ++k) {
      if (back.frequency(k) < 0.0) neg += std::norm(back.bins(k));
    }
    CHECK(neg <= 1e-20 * back.bins.squaredNorm());
  }
}

TEST_CASE("integer advance is a circular shift") {
  SpectralEngine<double> engine;
  const int T = 200;
  const double fs = 20.83e6;
  const auto x = random_complex(T, 3);
  const auto s = engine.forward(x.data(), T, fs);
  for (int k : {0, 1, 7, -5, 199, -199}) {
    const auto y = engine.inverse(fractional_advance(s, k / fs));
    double err = 0.0;
    for (int n = 0; n < T; ++n) err = std::max(err, std::abs(y(n) - x(((n + k) % T + T) % T)));
    CHECK(err < 1e-9);
  }
  CHECK_THROWS_AS(fractional_advance(s, T / fs), InvalidArgument);
  CHECK_THROWS_AS(fractional_advance(s, -T / fs), InvalidArgument);
}

TEST_CASE("advance of an on-bin tone is a phase factor") {
  SpectralEngine<double> engine;
  const int T = 256;
  const double fs = 20.83e6;
  Eigen::VectorXcd x(T);
  for (int n = 0; n < T; ++n) x(n) = std::polar(1.0, 2 * kPi * 40 * n / T);
  const double f0 = 40 * fs / T;
  const auto s = engine.forward(x.data(), T, fs);
  for (double tau : {0.37 / fs, -12.81 / fs, 100.5 / fs}) {
    const auto y = engine.inverse(fractional_advance(s, tau));
    CHECK(rel_err(y, x * std::polar(1.0, 2 * kPi * f0 * tau)) < 1e-9);
  }
}

TEST_CASE("advances compose") {
  SpectralEngine<double> engine;
  const int T = 512;
  const double fs = 20.83e6;
  const auto x = random_real(T, 11);
  const auto s = analytic_spectrum(engine, x.data(), T, fs);
  for (auto [t1, t2] : {std::pair{0.3 / fs, 2.45 / fs}, std::pair{-7.1 / fs, 3.33 / fs}, std::pair{50.5 / fs, 60.25 / fs}}) {
    const auto a = engine.inverse(fractional_advance(fractional_advance(s, t1), t2));
    const auto b = engine.inverse(fractional_advance(s, t1 + t2));
    CHECK(rel_err(a, b) < 1e-9);
  }
  CHECK(rel_err(engine.inverse(fractional_advance(s, 0.0)), engine.inverse(s)) < 1e-15);
}

TEST_CASE("recurrence accumulation matches direct phase factors") {
  SpectralEngine<double> engine;
  for (int T : {1000, 4096}) {
    const double fs = 20.83e6;
    const auto x = random_real(T, 5);
    const auto s = analytic_spectrum(engine, x.data(), T, fs);
    const double tau = 123.456 / fs;
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(T);
    accumulate_advanced(s.bins.data(), T, fs, tau, acc.data());
    accumulate_advanced(s.bins.data(), T, fs, -tau, acc.data());
    const auto direct = fractional_advance(s, tau).bins + fractional_advance(s, -tau).bins;
    CHECK(rel_err(acc, direct) < 1e-9);
  }
}

TEST_CASE("volume conversion is thread independent") {
  RFVolume<float> rf;
  rf.array.num_elements = 6;
  rf.params.transmit_angles = {-0.1, 0.0, 0.1};
  rf.params.num_samples = 300;
  rf.data = TraceVolume<float>(3, 6, 300);
  std::mt19937 rng(1);
  std::normal_distribution<float> g;
  for (Eigen::Index i = 0; i < rf.data.storage().size(); ++i) rf.data.storage().data()[i] = g(rng);
  const auto a = analytic_signal(rf, 1);
  const auto b = analytic_signal(rf, 4);
  CHECK(a.data == b.data);
  CHECK((a.data.storage().real() - rf.data.storage()).abs().maxCoeff() < 1e-5);
}
