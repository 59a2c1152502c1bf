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
#include <cstdio>
#include <random>

#include "kkbeam/compress.hpp"
#include "kkbeam/pipeline.hpp"
#include "kkbeam/sampling.hpp"
#include "kkbeam/simulate.hpp"

using namespace kkbeam;
using cd = std::complex<double>;

namespace {

template <typename Real>
AnalyticRF<Real> random_analytic(int N, int L, int T, unsigned seed) {
  RFVolume<Real> rf;
  rf.array.num_elements = L;
  rf.params.transmit_angles = N == 1 ? std::vector<double>{0.0} : transmit_angles(N, 0.3);
  rf.params.num_samples = T;
  rf.data = TraceVolume<Real>(N, L, T);
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  for (Eigen::Index i = 0; i < rf.data.storage().size(); ++i) rf.data.storage().data()[i] = Real(g(rng));
  return analytic_signal(rf);
}

double rel_diff(const TraceVolume<cd>& a, const TraceVolume<cd>& b) {
  return (a.storage() - b.storage()).matrix().norm() / b.storage().matrix().norm();
}

// Time-domain shear and sum with linear interpolation, written from the
// definition: advance element l by d_l sin(theta)/c, d_l measured from the
// last element for theta > 0 and from the first for theta < 0.
Eigen::VectorXcd brute_shear_sum(const AnalyticRF<double>& rf, int n, double theta) {
  const int L = rf.array.num_elements, T = rf.params.num_samples;
  const double fs = rf.array.sampling_frequency, c = rf.params.sound_speed;
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(T);
  for (int l = 0; l < L; ++l) {
    const double u = (l - 0.5 * (L - 1)) * rf.array.pitch;
    const double edge = (theta > 0 ? 0.5 : -0.5) * (L - 1) * rf.array.pitch;
    const double d = theta == 0.0 ? 0.0 : edge - u;
    const double shift = d * std::sin(theta) / c * fs;
    const auto trace = rf.data.trace(n, l);
    for (int k = 0; k < T; ++k) {
      const double p = k + shift;
      const int i = static_cast<int>(std::floor(p));
      const double a = p - i;
      if (i < 0 || i + 1 >= T) continue;
      out(k) += (1.0 - a) * trace(i) + a * trace(i + 1);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("shear offsets are nonnegative advances from the aperture edge") {
  TransducerArray a;
  a.num_elements = 5;
  a.pitch = 1e-3;
  const auto pos = shear_offsets(a, 0.2);
  const auto neg = shear_offsets(a, -0.2);
  CHECK(pos(4) == 0.0);
  CHECK(pos(0) == doctest::Approx(4e-3));
  CHECK(neg(0) == 0.0);
  CHECK(neg(4) == doctest::Approx(-4e-3));
  CHECK(((pos * std::sin(0.2)) >= 0.0).all());
  CHECK(((neg * std::sin(-0.2)) >= 0.0).all());
  CHECK((shear_offsets(a, 0.0) == 0.0).all());
}

TEST_CASE("zero angle is a plain sum") {
  const auto rf = random_analytic<double>(2, 8, 128, 1);
  const auto c = compress(rf, explicit_angles({0.0}));
  for (int n = 0; n < 2; ++n) {
    Eigen::VectorXcd sum = Eigen::VectorXcd::Zero(128);
    for (int l = 0; l < 8; ++l) sum += rf.data.trace(n, l).transpose().matrix();
    CHECK((c.data.trace(n, 0).transpose().matrix() - sum).norm() <= 1e-12 * sum.norm());
  }
}

TEST_CASE("zeros stay zero") {
  AnalyticRF<float> rf;
  rf.array.num_elements = 8;
  rf.params.transmit_angles = {0.0};
  rf.params.num_samples = 64;
  rf.data = TraceVolume<std::complex<float>>(1, 8, 64);
  const auto c = compress(rf, uniform_vernier_angles(3, 5, 0.2, 1));
  CHECK((c.data.storage() == std::complex<float>(0.0f, 0.0f)).all());
  CHECK(c.data.channels() == 5);
}

TEST_CASE("linearity") {
  auto a = random_analytic<double>(3, 16, 256, 2);
  const auto b = random_analytic<double>(3, 16, 256, 3);
  const auto set = uniform_vernier_angles(7, 9, 0.3, 2);
  const auto ca = compress(a, set), cb = compress(b, set);
  const cd k(1.7, -0.4);
  AnalyticRF<double> mix = a;
  mix.data.storage() = k * a.data.storage() + b.data.storage();
  const auto cm = compress(mix, set);
  TraceVolume<cd> want = ca.data;
  want.storage() = k * ca.data.storage() + cb.data.storage();
  CHECK(rel_diff(cm.data, want) < 1e-9);
}

TEST_CASE("mirror symmetry pins the shear convention") {
  const auto rf = random_analytic<double>(3, 16, 256, 4);
  AnalyticRF<double> reversed = rf;
  for (int n = 0; n < 3; ++n) {
    for (int l = 0; l < 16; ++l) reversed.data.trace(n, l) = rf.data.trace(n, 15 - l);
  }
  for (const auto& set : {uniform_vernier_angles(7, 9, 0.3, 2), confocal_angles(7, 8, 0.3)}) {
    std::vector<double> negated = set.angles;
    for (auto& t : negated) t = -t;
    const auto c1 = compress(rf, set);
    const auto c2 = compress(reversed, explicit_angles(negated));
    CHECK(rel_diff(c2.data, c1.data) < 1e-9);
  }
}

TEST_CASE("spectral shear matches time-domain interpolation on a slow signal") {
  // 1 MHz pulse sampled at 100 MHz: linear interpolation is accurate here.
  TransducerArray a;
  a.num_elements = 16;
  a.center_frequency = 1e6;
  a.sampling_frequency = 100e6;
  AcquisitionParams p;
  p.transmit_angles = {-0.2, 0.0, 0.2};
  p.num_samples = 2048;
  const Phantom ph{{{0.5e-3, 5e-3, 1.0}, {-1e-3, 5.5e-3, -0.7}}, ""};
  const auto rf = analytic_signal(simulate_rf<double>(a, p, ph, make_pulse(a)));
  const auto set = uniform_vernier_angles(3, 7, 0.2, 1);
  CHECK(guard_band_samples(a, 1540.0, set) < 150);
  const auto c = compress(rf, set);
  for (int n = 0; n < 3; ++n) {
    for (int m = 0; m < set.size(); ++m) {
      const auto ref = brute_shear_sum(rf, n, set.angles[m]);
      const Eigen::VectorXcd got = c.data.trace(n, m).transpose();
      CHECK((got - ref).norm() / ref.norm() < 1e-3);
    }
  }
}

TEST_CASE("a plane-wave echo is picked up by the nearest receive angle") {
  TransducerArray a;
  const double c = 1540.0, fs = a.sampling_frequency;
  const auto pulse = make_pulse(a);
  const auto set = uniform_vernier_angles(15, 19, deg2rad(24), 0);
  for (double phi_deg : {-1.2, 0.3, 2.9}) {
    const double phi = deg2rad(phi_deg);
    RFVolume<double> rf;
    rf.array = a;
    rf.params.transmit_angles = {0.0};
    rf.params.num_samples = 1024;
    rf.data = TraceVolume<double>(1, a.num_elements, 1024);
    const auto u = element_positions(a);
    // Wave from direction phi reaches element u at t1 - u sin(phi)/c.
    for (int l = 0; l < a.num_elements; ++l) {
      for (int k = 0; k < 1024; ++k) rf.data.trace(0, l)(k) = pulse(k / fs - 20e-6 + u(l) * std::sin(phi) / c);
    }
    const auto cr = compress(analytic_signal(rf), set);
    int best = 0;
    double best_peak = 0.0;
    for (int m = 0; m < set.size(); ++m) {
      const double peak = cr.data.trace(0, m).abs().maxCoeff();
      if (peak > best_peak) best_peak = peak, best = m;
    }
    int nearest = 0;
    for (int m = 0; m < set.size(); ++m) {
      if (std::abs(set.angles[m] - phi) < std::abs(set.angles[nearest] - phi)) nearest = m;
    }
    CHECK(best == nearest);
  }
}

TEST_CASE("guard band") {
  TransducerArray a;
  const auto set = confocal_angles(15, 21, deg2rad(24));
  const int g = guard_band_samples(a, 1540.0, set);
  CHECK(g == static_cast<int>(std::ceil(43.93e-3 * std::sin(set.max_abs()) * 20.83e6 / 1540.0)));
  AcquisitionParams p;
  p.transmit_angles = {0.0};
  p.num_samples = 1000;
  CHECK_NOTHROW(check_guard_band(a, p, set, 1000 - g));
  try {
    check_guard_band(a, p, set, 1000 - g + 5);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("pad with 5 ") != std::string::npos);
  }
  CHECK(guard_band_samples(a, 1540.0, explicit_angles({0.0})) == 0);

  const auto rf = random_analytic<float>(1, 192, 256, 1);
  CompressOptions o;
  o.last_used_sample = 200;
  CHECK_THROWS_AS(compress(rf, set, o), DataError);
}

TEST_CASE("staged and direct compression agree") {
  RFVolume<double> rf;
  rf.array.num_elements = 12;
  rf.params.transmit_angles = transmit_angles(3, 0.3);
  rf.params.num_samples = 300;
  rf.data = TraceVolume<double>(3, 12, 300);
  std::mt19937 rng(8);
  std::normal_distribution<double> g;
  for (Eigen::Index i = 0; i < rf.data.storage().size(); ++i) rf.data.storage().data()[i] = g(rng);
  const std::vector<ReceiveAngleSet> sets{uniform_vernier_angles(3, 5, 0.3, 0), uniform_vernier_angles(3, 5, 0.3, 1),
                                          confocal_angles(3, 6, 0.3)};
  const auto staged = compress_staged(rf, sets, 2);
  for (std::size_t s = 0; s < sets.size(); ++s) {
    const auto direct = compress(analytic_signal(rf), sets[s]);
    CHECK(rel_diff(staged[s].data, direct.data) < 1e-12);
    StageTimings t;
    const auto single = compress_staged(rf, sets[s], 1, &t);
    CHECK(single.data == staged[s].data);
    CHECK(t.compression_ratio == doctest::Approx(12.0 / sets[s].size()));
  }
}

TEST_CASE("compression is thread independent") {
  const auto rf = random_analytic<float>(4, 24, 200, 9);
  const auto set = confocal_angles(5, 9, 0.3);
  CompressOptions one, many;
  many.threads = 3;
  CHECK(compress(rf, set, one).data == compress(rf, set, many).data);
}

TEST_CASE("compression ratios") {
  auto ratio = [](int M) {
    CompressedRF<float> c;
    c.array.num_elements = 192;
    c.receive = confocal_angles(15, M, 0.4);
    char buf[16];
    std::snprintf(buf, sizeof buf, "%.1f", c.compression_ratio());
    return std::string(buf);
  };
  CHECK(ratio(7) == "27.4");
  CHECK(ratio(21) == "9.1");
  CHECK(ratio(57) == "3.4");
}
