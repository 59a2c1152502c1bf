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

#include "kkbeam/beamform.hpp"
#include "kkbeam/compress.hpp"
#include "kkbeam/pipeline.hpp"
#include "kkbeam/sampling.hpp"
#include "kkbeam/simulate.hpp"

using namespace kkbeam;

namespace {

struct PointCase {
  TransducerArray array;
  AcquisitionParams params;
  RFVolume<float> rf;
  BeamformConfig config;
};

PointCase point_case(int L, int N, int T, Point target, int nx, int nz, double dx = 0.057e-3,
                     double dz = 0.036e-3) {
  PointCase pc;
  pc.array.num_elements = L;
  pc.params.transmit_angles = transmit_angles(N, deg2rad(24));
  pc.params.num_samples = T;
  const auto pulse = make_pulse(pc.array);
  pc.rf = simulate_rf<float>(pc.array, pc.params, Phantom{{{target.x, target.z, 1.0}}, ""}, pulse);
  pc.config.grid = ImageGrid::centered(target.x, target.z - (nz / 2) * dz, dx, dz, nx, nz);
  pc.config.pulse_delay = pulse.peak_delay();
  return pc;
}

double rel_rms(const ComplexImage<float>& a, const ComplexImage<float>& b) {
  return (a.pixels - b.pixels).matrix().norm() / b.pixels.matrix().norm();
}

std::pair<int, int> peak(const ComplexImage<float>& image) { return intensity(image).argmax(); }

}  // namespace

TEST_CASE("lut accounting formulas") {
  CHECK(kk_lut_entries(180, 180, 15, 21) == 12960);
  CHECK(das_lut_entries(180, 180, 15, 192) == 72360);
  TransducerArray a;
  CHECK(das_offset_span(a, a.pitch) == 192);
  CHECK(das_offset_span(a, 0.057e-3) == static_cast<int>(std::floor(43.93 / 0.057)) + 1);

  AcquisitionParams p;
  p.transmit_angles = transmit_angles(15, deg2rad(24));
  const auto grid = ImageGrid::centered(0.0, 5e-3, a.pitch, 0.036e-3, 180, 180);
  CHECK(build_das_luts<float>(grid, a, p).entries() == 72360);
  CHECK(build_kk_luts<float>(grid, p.transmit_angles, confocal_angles(15, 21, deg2rad(24)), 1540.0).entries() ==
        12960);
}

TEST_CASE("das lut contents") {
  TransducerArray a;
  a.num_elements = 65;
  AcquisitionParams p;
  p.transmit_angles = transmit_angles(5, deg2rad(20));  // includes 0
  const double c = p.sound_speed;
  const auto grid = ImageGrid::centered(0.0, 4e-3, 0.057e-3, 0.05e-3, 41, 30);
  const auto luts = build_das_luts<float>(grid, a, p);
  CHECK((luts.tx_x.col(2) == 0.0f).all());
  for (int iz = 0; iz < grid.nz; ++iz) {
    CHECK(luts.tx_z(iz, 2) == doctest::Approx(grid.z(iz) / c).epsilon(1e-6));
    // Pixel x = 0 (column 20) to element u = 0 (element 32).
    CHECK(luts.rx_hypot_lookup(20, iz, 32) == doctest::Approx(grid.z(iz) / c).epsilon(1e-6));
    CHECK((luts.rx_hypot.row(iz) >= float(grid.z(iz) / c * (1 - 1e-6))).all());
  }
  CHECK(luts.rx_hypot.allFinite());
  CHECK(luts.offset_nodes() == grid.nx + das_offset_span(a, grid.dx));

  std::mt19937 rng(3);
  std::uniform_int_distribution<int> ix(0, grid.nx - 1), iz(0, grid.nz - 1), il(0, a.num_elements - 1);
  const auto u = element_positions(a);
  double worst = 0.0;
  for (int k = 0; k < 2000; ++k) {
    const int x = ix(rng), z = iz(rng), l = il(rng);
    const double direct = std::hypot(grid.x(x) - u(l), grid.z(z)) / c;
    worst = std::max(worst, std::abs(luts.rx_hypot_lookup(x, z, l) - direct) / direct);
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("kk lut contents") {
  AcquisitionParams p;
  p.transmit_angles = transmit_angles(7, deg2rad(24));
  const auto set = uniform_vernier_angles(7, 9, deg2rad(24), 0);
  const auto grid = ImageGrid::centered(1e-3, 6e-3, 0.1e-3, 0.1e-3, 20, 25);
  const auto luts = build_kk_luts<float>(grid, p.transmit_angles, set, 1540.0);
  const int zero = 4;  // o = 0
  REQUIRE(set.angles[zero] == 0.0);
  CHECK((luts.rx_x.col(zero) == 0.0f).all());
  for (int iz = 0; iz < grid.nz; ++iz) CHECK(luts.rx_z(iz, zero) == doctest::Approx(grid.z(iz) / 1540.0).epsilon(1e-6));
  for (int m = 0; m < set.size(); ++m) {
    for (int x = 0; x < grid.nx; x += 3) {
      for (int z = 0; z < grid.nz; z += 4) {
        const double so_r = (grid.x(x) * std::sin(set.angles[m]) + grid.z(z) * std::cos(set.angles[m])) / 1540.0;
        CHECK(luts.rx_x(x, m) + luts.rx_z(z, m) == doctest::Approx(so_r).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("zero data gives zero images") {
  auto pc = point_case(32, 3, 512, {0.0, 5e-3}, 16, 16);
  AnalyticRF<float> zero{pc.array, pc.params, TraceVolume<std::complex<float>>(3, 32, 512)};
  const auto luts = build_das_luts<float>(pc.config.grid, pc.array, pc.params);
  CHECK((das(zero, luts, pc.config).pixels == std::complex<float>()).all());
  CHECK((direct_das(zero, pc.config).pixels == std::complex<float>()).all());
  const auto set = confocal_angles(3, 5, deg2rad(24));
  CompressedRF<float> zc{pc.array, pc.params, set, TraceVolume<std::complex<float>>(3, 5, 512)};
  const auto kl = build_kk_luts<float>(pc.config.grid, pc.params.transmit_angles, set, 1540.0);
  CHECK((kk(zc, kl, pc.config).pixels == std::complex<float>()).all());
}

TEST_CASE("lut das matches per-pixel delays") {
  // dx = pitch / 4 puts every element on an offset node, so the table is exact.
  auto pc = point_case(64, 7, 1024, {1e-3, 8e-3}, 48, 48, 0.23e-3 / 4, 0.05e-3);
  const auto rf = analytic_signal(pc.rf);
  const auto luts = build_das_luts<float>(pc.config.grid, pc.array, pc.params);
  const auto a = das(rf, luts, pc.config);
  const auto b = direct_das(rf, pc.config);
  CHECK(rel_rms(a, b) < 1e-4);
  CHECK(peak(a) == peak(b));
}

TEST_CASE("point target lands on its pixel") {
  auto pc = point_case(192, 15, 1024, {0.0, 10e-3}, 61, 61);
  const auto rf = analytic_signal(pc.rf);
  const auto luts = build_das_luts<float>(pc.config.grid, pc.array, pc.params);
  const auto [ix, iz] = peak(das(rf, luts, pc.config));
  CHECK(std::abs(ix - 30) <= 1);
  CHECK(std::abs(iz - 30) <= 1);
  const auto [dx, dz] = peak(direct_das(rf, pc.config));
  CHECK(std::abs(dx - 30) <= 1);
  CHECK(std::abs(dz - 30) <= 1);

  const auto set = confocal_angles(15, 21, deg2rad(24));
  const auto c = compress_staged(pc.rf, set);
  const auto kl = build_kk_luts<float>(pc.config.grid, pc.params.transmit_angles, set, 1540.0);
  const auto [kx, kz] = peak(kk(c, kl, pc.config));
  CHECK(std::abs(kx - 30) <= 1);
  CHECK(std::abs(kz - 30) <= 1);

  BeamformConfig nearest = pc.config;
  nearest.interpolation = Interpolation::Nearest;
  const auto [nx, nz] = peak(das(rf, luts, nearest));
  CHECK(std::abs(nx - 30) <= 1);
  CHECK(std::abs(nz - 30) <= 1);
}

TEST_CASE("off-axis point target") {
  auto pc = point_case(192, 15, 1024, {3e-3, 11e-3}, 41, 41);
  const auto set = uniform_vernier_angles(15, 19, deg2rad(24), 0);
  const auto c = compress_staged(pc.rf, set);
  const auto kl = build_kk_luts<float>(pc.config.grid, pc.params.transmit_angles, set, 1540.0);
  const auto [kx, kz] = peak(kk(c, kl, pc.config));
  CHECK(std::abs(kx - 20) <= 1);
  CHECK(std::abs(kz - 20) <= 1);
}

TEST_CASE("dense receive set agrees with das") {
  auto pc = point_case(192, 15, 2048, {0.0, 10e-3}, 41, 41);
  std::vector<double> dense;
  for (int m = 0; m < 97; ++m) dense.push_back(deg2rad(-45.0 + 90.0 * m / 96));
  const auto set = explicit_angles(dense);
  const auto c = compress_staged(pc.rf, set);
  const auto kl = build_kk_luts<float>(pc.config.grid, pc.params.transmit_angles, set, 1540.0);
  const auto luts = build_das_luts<float>(pc.config.grid, pc.array, pc.params);
  CHECK(peak(kk(c, kl, pc.config)) == peak(das(analytic_signal(pc.rf), luts, pc.config)));
}

TEST_CASE("beamformers are thread independent") {
  auto pc = point_case(64, 5, 1024, {0.5e-3, 8e-3}, 33, 29);
  const auto rf = analytic_signal(pc.rf);
  const auto luts = build_das_luts<float>(pc.config.grid, pc.array, pc.params);
  BeamformConfig many = pc.config;
  many.threads = 4;
  CHECK((das(rf, luts, pc.config).pixels == das(rf, luts, many).pixels).all());
  CHECK((direct_das(rf, pc.config).pixels == direct_das(rf, many).pixels).all());
  const auto set = confocal_angles(5, 9, deg2rad(24));
  const auto c = compress_staged(pc.rf, set);
  const auto kl = build_kk_luts<float>(pc.config.grid, pc.params.transmit_angles, set, 1540.0);
  CHECK((kk(c, kl, pc.config).pixels == kk(c, kl, many).pixels).all());
}

TEST_CASE("acceptance angle gating and channel weights") {
  auto pc = point_case(64, 5, 1024, {0.0, 8e-3}, 21, 21, 0.23e-3 / 4);
  const auto rf = analytic_signal(pc.rf);
  const auto luts = build_das_luts<float>(pc.config.grid, pc.array, pc.params);
  const auto full = das(rf, luts, pc.config);
  BeamformConfig gated = pc.config;
  gated.max_acceptance_angle = deg2rad(89.99);
  CHECK(rel_rms(das(rf, luts, gated), full) < 1e-6);
  gated.max_acceptance_angle = deg2rad(10.0);
  const auto narrow = das(rf, luts, gated);
  CHECK(rel_rms(narrow, full) > 0.1);
  CHECK(rel_rms(direct_das(rf, gated), narrow) < 1e-4);

  BeamformConfig weighted = pc.config;
  weighted.channel_weights.assign(64, 0.0);
  CHECK((das(rf, luts, weighted).pixels == std::complex<float>()).all());
  weighted.channel_weights.assign(64, 2.0);
  CHECK(rel_rms(das(rf, luts, weighted), ComplexImage<float>{full.grid, full.pixels * 2.0f}) < 1e-6);
  weighted.channel_weights.assign(3, 1.0);
  CHECK_THROWS_AS(das(rf, luts, weighted), DataError);
}

TEST_CASE("geometry mismatch") {
  auto pc = point_case(32, 3, 512, {0.0, 5e-3}, 16, 16);
  const auto rf = analytic_signal(pc.rf);
  auto luts = build_das_luts<float>(pc.config.grid, pc.array, pc.params);
  BeamformConfig other = pc.config;
  other.grid.nx += 1;
  CHECK_THROWS_AS(das(rf, luts, other), DataError);
  AcquisitionParams p5 = pc.params;
  p5.transmit_angles = transmit_angles(5, deg2rad(24));
  CHECK_THROWS_AS(das(rf, build_das_luts<float>(pc.config.grid, pc.array, p5), pc.config), DataError);
  const auto set = confocal_angles(3, 5, deg2rad(24));
  const auto c = compress_staged(pc.rf, set);
  const auto wrong = build_kk_luts<float>(pc.config.grid, pc.params.transmit_angles, confocal_angles(3, 7, deg2rad(24)),
                                          1540.0);
  CHECK_THROWS_AS(kk(c, wrong, pc.config), DataError);
}

TEST_CASE("intensity and compounding identities") {
  const ImageGrid g{0.0, 1e-3, 1e-4, 1e-4, 3, 2};
  auto b = ComplexImage<float>::zeros(g);
  b.pixels << std::complex<float>(1, 0), std::complex<float>(0, 2), std::complex<float>(3, 4),
      std::complex<float>(-1, 1), std::complex<float>(0.5f, 0), std::complex<float>(0, 0);
  const auto i = intensity(b);
  CHECK(i.pixels(0, 0) == 1.0f);
  CHECK(i.pixels(1, 0) == 25.0f);
  CHECK((intensity(ComplexImage<float>::zeros(g)).pixels == 0.0f).all());
  ComplexImage<float> scaled{g, b.pixels * 3.0f};
  CHECK(((intensity(scaled).pixels - 9.0f * i.pixels).abs() < 1e-5f).all());

  CHECK((compound_coherent(std::vector{b}).pixels == i.pixels).all());
  CHECK((compound_incoherent(std::vector{b}).pixels == i.pixels).all());
  ComplexImage<float> neg{g, -b.pixels};
  CHECK((compound_coherent(std::vector{b, neg}).pixels == 0.0f).all());
  CHECK((compound_incoherent(std::vector{b, neg}).pixels == 2.0f * i.pixels).all());
  CHECK((compound_coherent(std::vector{b, b}).pixels == 4.0f * i.pixels).all());
  CHECK((compound_incoherent(std::vector{b, neg}).pixels >= 0.0f).all());
  ImageGrid g2 = g;
  g2.nx = 2;
  CHECK_THROWS(compound_coherent(std::vector{b, ComplexImage<float>::zeros(g2)}));
  CHECK_THROWS(compound_incoherent(std::vector{b, ComplexImage<float>::zeros(g2)}));
}

TEST_CASE("last used sample bounds every read") {
  TransducerArray a;
  AcquisitionParams p;
  p.transmit_angles = transmit_angles(7, deg2rad(24));
  const auto grid = ImageGrid::centered(1e-3, 8e-3, 0.2e-3, 0.2e-3, 30, 40);
  const double delay = 0.5e-6;
  const auto set = confocal_angles(7, 9, deg2rad(24));
  const int last = last_used_sample(grid, a, p, delay, &set);
  const auto u = element_positions(a);
  double worst = 0.0;
  for (double th : p.transmit_angles) {
    for (int ix = 0; ix < grid.nx; ++ix) {
      for (int iz = 0; iz < grid.nz; ++iz) {
        const double tin = (grid.x(ix) * std::sin(th) + grid.z(iz) * std::cos(th)) / 1540.0;
        for (int l = 0; l < a.num_elements; ++l) {
          worst = std::max(worst, tin + std::hypot(grid.x(ix) - u(l), grid.z(iz)) / 1540.0);
        }
        for (double to : set.angles) {
          worst = std::max(worst, tin + (grid.x(ix) * std::sin(to) + grid.z(iz) * std::cos(to)) / 1540.0);
        }
      }
    }
  }
  const double idx = (worst + delay) * a.sampling_frequency;
  CHECK(last >= std::floor(idx) + 1);
  CHECK(last <= idx + 2);
}
