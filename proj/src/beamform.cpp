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


#include "kkbeam/beamform.hpp"

#include <algorithm>
#include <cmath>

#include "kkbeam/parallel.hpp"

namespace kkbeam {

namespace {

template <typename Real>
inline std::complex<Real> read_sample(const std::complex<Real>* trace, int T, Real index, Interpolation mode) {
  if (mode == Interpolation::Nearest) {
    const Real r = std::round(index);
    if (!(r >= Real(0)) || r > Real(T - 1)) return {};
    return trace[static_cast<int>(r)];
  }
  if (!(index >= Real(0)) || index > Real(T - 1)) return {};
  const int i = static_cast<int>(index);
  if (i == T - 1) return trace[i];
  const Real a = index - Real(i);
  return trace[i] + a * (trace[i + 1] - trace[i]);
}

std::vector<double> channel_weights(const BeamformConfig& config, int channels) {
  if (config.channel_weights.empty()) return std::vector<double>(channels, 1.0);
  if (static_cast<int>(config.channel_weights.size()) != channels) {
    throw DataError("beamform: channel weight count does not match the channel count");
  }
  return config.channel_weights;
}

template <typename Real>
void fill_transmit_tables(DelayLUTSet<Real>& luts, const ImageGrid& grid, const std::vector<double>& angles,
                          double c) {
  const int N = static_cast<int>(angles.size());
  luts.tx_x.resize(grid.nx, N);
  luts.tx_z.resize(grid.nz, N);
  for (int n = 0; n < N; ++n) {
    const double s = std::sin(angles[n]), co = std::cos(angles[n]);
    for (int ix = 0; ix < grid.nx; ++ix) luts.tx_x(ix, n) = static_cast<Real>(grid.x(ix) * s / c);
    for (int iz = 0; iz < grid.nz; ++iz) luts.tx_z(iz, n) = static_cast<Real>(grid.z(iz) * co / c);
  }
}

void check_grid(const ImageGrid& a, const ImageGrid& b) {
  if (!(a == b)) throw DataError("beamform: LUTs were built for a different image grid");
}

}  // namespace

int das_offset_span(const TransducerArray& array, double dx) {
  return static_cast<int>(std::floor(array.aperture() / dx + 1e-9)) + 1;
}

template <typename Real>
DelayLUTSet<Real> build_das_luts(const ImageGrid& grid, const TransducerArray& array, const AcquisitionParams& params) {
  grid.validate();
  array.validate();
  params.validate();
  const double c = params.sound_speed;
  DelayLUTSet<Real> luts;
  luts.kind = DelayLUTSet<Real>::Kind::Das;
  luts.grid = grid;
  luts.transmit_angles = params.transmit_angles;
  luts.sound_speed = c;
  fill_transmit_tables(luts, grid, params.transmit_angles, c);

  const Eigen::ArrayXd u = element_positions(array);
  const double u_max = u(u.size() - 1);
  const int nodes = grid.nx + das_offset_span(array, grid.dx);
  luts.rx_hypot.resize(grid.nz, nodes);
  for (int iz = 0; iz < grid.nz; ++iz) {
    const double z = grid.z(iz);
    for (int m = 0; m < nodes; ++m) {
      const double offset = grid.x0 - u_max + m * grid.dx;
      luts.rx_hypot(iz, m) = static_cast<Real>(std::hypot(offset, z) / c);
    }
  }
  luts.element_node.resize(array.num_elements);
  luts.element_frac.resize(array.num_elements);
  for (int l = 0; l < array.num_elements; ++l) {
    const double e = (u_max - u(l)) / grid.dx;
    double node = std::floor(e);
    double frac = e - node;
    // Snap rounding noise so commensurate grids hit nodes exactly.
    if (frac < 1e-9) frac = 0.0;
    if (frac > 1.0 - 1e-9) {
      node += 1.0;
      frac = 0.0;
    }
    luts.element_node[l] = static_cast<int>(node);
    luts.element_frac[l] = static_cast<Real>(frac);
  }
  return luts;
}

template <typename Real>
DelayLUTSet<Real> build_kk_luts(const ImageGrid& grid, const std::vector<double>& transmit_angles,
                                const ReceiveAngleSet& receive, double sound_speed) {
  grid.validate();
  if (transmit_angles.empty() || receive.size() == 0) throw InvalidArgument("build_kk_luts: empty angle set");
  if (!(sound_speed > 0.0)) throw InvalidArgument("build_kk_luts: sound speed must be positive");
  DelayLUTSet<Real> luts;
  luts.kind = DelayLUTSet<Real>::Kind::Kk;
  luts.grid = grid;
  luts.transmit_angles = transmit_angles;
  luts.receive_angles = receive.angles;
  luts.sound_speed = sound_speed;
  fill_transmit_tables(luts, grid, transmit_angles, sound_speed);
  const int M = receive.size();
  luts.rx_x.resize(grid.nx, M);
  luts.rx_z.resize(grid.nz, M);
  for (int m = 0; m < M; ++m) {
    const double s = std::sin(receive.angles[m]), co = std::cos(receive.angles[m]);
    for (int ix = 0; ix < grid.nx; ++ix) luts.rx_x(ix, m) = static_cast<Real>(grid.x(ix) * s / sound_speed);
    for (int iz = 0; iz < grid.nz; ++iz) luts.rx_z(iz, m) = static_cast<Real>(grid.z(iz) * co / sound_speed);
  }
  return luts;
}

template <typename Real>
ComplexImage<Real> das(const AnalyticRF<Real>& rf, const DelayLUTSet<Real>& luts, const BeamformConfig& config) {
  rf.validate();
  config.grid.validate();
  check_grid(luts.grid, config.grid);
  if (luts.kind != DelayLUTSet<Real>::Kind::Das || luts.transmit_angles != rf.params.transmit_angles ||
      static_cast<int>(luts.element_node.size()) != rf.array.num_elements ||
      luts.sound_speed != rf.params.sound_speed) {
    throw DataError("das: LUTs do not match the RF geometry");
  }
  const ImageGrid& g = config.grid;
  const int N = rf.data.groups(), L = rf.data.channels(), T = rf.data.samples();
  const Real fs = static_cast<Real>(rf.array.sampling_frequency);
  const Real offset = static_cast<Real>(config.pulse_delay - rf.params.t0);
  const auto weights = channel_weights(config, L);
  const bool unit_weights = config.channel_weights.empty();
  const Eigen::ArrayXd u = element_positions(rf.array);
  const double gate = config.max_acceptance_angle ? std::tan(*config.max_acceptance_angle) : 0.0;

  // Column ix is owned by one task. Within a column the (n, l) loops run
  // outside the depth loop so each trace is streamed once; every pixel still
  // accumulates in (n ascending, l ascending) order.
  auto image = ComplexImage<Real>::zeros(g);
  parallel_for(0, g.nx, config.threads, [&](int ix) {
    std::vector<std::complex<Real>> acc(g.nz);
    std::vector<int> first_row(L, 0);
    if (config.max_acceptance_angle) {
      for (int l = 0; l < L; ++l) {
        int iz = 0;
        while (iz < g.nz && std::abs(g.x(ix) - u(l)) > g.z(iz) * gate) ++iz;
        first_row[l] = iz;
      }
    }
    for (int n = 0; n < N; ++n) {
      const Real tin_x = luts.tx_x(ix, n) + offset;
      const Real* tin_z = &luts.tx_z(0, n);
      for (int l = 0; l < L; ++l) {
        const std::complex<Real>* trace = rf.data.trace_data(n, l);
        const Real* h0 = &luts.rx_hypot(0, ix + luts.element_node[l]);
        const Real a = luts.element_frac[l];
        const Real w = static_cast<Real>(weights[l]);
        for (int iz = first_row[l]; iz < g.nz; ++iz) {
          const Real hyp = a == Real(0) ? h0[iz] : h0[iz] + a * (h0[iz + g.nz] - h0[iz]);
          const Real idx = (tin_x + tin_z[iz] + hyp) * fs;
          const auto v = read_sample(trace, T, idx, config.interpolation);
          acc[iz] += unit_weights ? v : v * w;
        }
      }
    }
    for (int iz = 0; iz < g.nz; ++iz) image.pixels(ix, iz) = acc[iz];
  });
  return image;
}

template <typename Real>
ComplexImage<Real> direct_das(const AnalyticRF<Real>& rf, const BeamformConfig& config) {
  rf.validate();
  config.grid.validate();
  const ImageGrid& g = config.grid;
  const int N = rf.data.groups(), L = rf.data.channels(), T = rf.data.samples();
  const double fs = rf.array.sampling_frequency;
  const double c = rf.params.sound_speed;
  const auto weights = channel_weights(config, L);
  const Eigen::ArrayXd u = element_positions(rf.array);
  const double gate = config.max_acceptance_angle ? std::tan(*config.max_acceptance_angle) : 0.0;

  auto image = ComplexImage<Real>::zeros(g);
  parallel_for(0, g.nx, config.threads, [&](int ix) {
    const double x = g.x(ix);
    for (int iz = 0; iz < g.nz; ++iz) {
      const double z = g.z(iz);
      std::complex<Real> sum{};
      for (int n = 0; n < N; ++n) {
        const double th = rf.params.transmit_angles[n];
        const double tin = (x * std::sin(th) + z * std::cos(th)) / c;
        for (int l = 0; l < L; ++l) {
          if (config.max_acceptance_angle && std::abs(x - u(l)) > z * gate) continue;
          const double tau = tin + std::hypot(x - u(l), z) / c;
          const double idx = (tau + config.pulse_delay - rf.params.t0) * fs;
          sum += read_sample(rf.data.trace_data(n, l), T, static_cast<Real>(idx), config.interpolation) *
                 static_cast<Real>(weights[l]);
        }
      }
      image.pixels(ix, iz) = sum;
    }
  });
  return image;
}

template <typename Real>
ComplexImage<Real> kk(const CompressedRF<Real>& rf, const DelayLUTSet<Real>& luts, const BeamformConfig& config) {
  rf.validate();
  config.grid.validate();
  check_grid(luts.grid, config.grid);
  if (luts.kind != DelayLUTSet<Real>::Kind::Kk || luts.transmit_angles != rf.params.transmit_angles ||
      luts.receive_angles != rf.receive.angles || luts.sound_speed != rf.params.sound_speed) {
    throw DataError("kk: LUTs do not match the compressed RF geometry");
  }
  const ImageGrid& g = config.grid;
  const int N = rf.data.groups(), M = rf.data.channels(), T = rf.data.samples();
  const Real fs = static_cast<Real>(rf.array.sampling_frequency);
  const auto weights = channel_weights(config, M);
  const bool unit_weights = config.channel_weights.empty();
  std::vector<Real> origin(M);
  for (int m = 0; m < M; ++m) origin[m] = static_cast<Real>(config.pulse_delay - rf.trace_time_origin(m));

  auto image = ComplexImage<Real>::zeros(g);
  parallel_for(0, g.nx, config.threads, [&](int ix) {
    std::vector<std::complex<Real>> acc(g.nz);
    for (int n = 0; n < N; ++n) {
      const Real* tin_z = &luts.tx_z(0, n);
      for (int m = 0; m < M; ++m) {
        const std::complex<Real>* trace = rf.data.trace_data(n, m);
        const Real lateral = luts.tx_x(ix, n) + luts.rx_x(ix, m) + origin[m];
        const Real* rx_z = &luts.rx_z(0, m);
        const Real w = static_cast<Real>(weights[m]);
        for (int iz = 0; iz < g.nz; ++iz) {
          const Real idx = (lateral + tin_z[iz] + rx_z[iz]) * fs;
          const auto v = read_sample(trace, T, idx, config.interpolation);
          acc[iz] += unit_weights ? v : v * w;
        }
      }
    }
    for (int iz = 0; iz < g.nz; ++iz) image.pixels(ix, iz) = acc[iz];
  });
  return image;
}

template <typename Real>
IntensityImage<Real> intensity(const ComplexImage<Real>& image) {
  return {image.grid, image.pixels.abs2()};
}

template <typename Real>
IntensityImage<Real> compound_coherent(const std::vector<ComplexImage<Real>>& images) {
  if (images.empty()) throw InvalidArgument("compound: no images");
  Eigen::Array<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic> sum = images.front().pixels;
  for (std::size_t j = 1; j < images.size(); ++j) {
    check_grid(images[j].grid, images.front().grid);
    sum += images[j].pixels;
  }
  return {images.front().grid, sum.abs2()};
}

template <typename Real>
IntensityImage<Real> compound_incoherent(const std::vector<ComplexImage<Real>>& images) {
  if (images.empty()) throw InvalidArgument("compound: no images");
  Eigen::Array<Real, Eigen::Dynamic, Eigen::Dynamic> sum = images.front().pixels.abs2();
  for (std::size_t j = 1; j < images.size(); ++j) {
    check_grid(images[j].grid, images.front().grid);
    sum += images[j].pixels.abs2();
  }
  return {images.front().grid, sum};
}

int last_used_sample(const ImageGrid& grid, const TransducerArray& array, const AcquisitionParams& params,
                     double pulse_delay, const ReceiveAngleSet* receive) {
  // Every delay is convex in (x, z), so the maximum sits on a grid corner.
  const double c = params.sound_speed;
  const Eigen::ArrayXd u = element_positions(array);
  const double xs[2] = {grid.x(0), grid.x(grid.nx - 1)};
  const double zs[2] = {grid.z(0), grid.z(grid.nz - 1)};
  const double us[2] = {u(0), u(u.size() - 1)};
  double tmax = 0.0;
  for (double th : params.transmit_angles) {
    for (double x : xs) {
      for (double z : zs) {
        const double tin = (x * std::sin(th) + z * std::cos(th)) / c;
        for (double ue : us) tmax = std::max(tmax, tin + std::hypot(x - ue, z) / c);
        if (receive) {
          for (double to : receive->angles) tmax = std::max(tmax, tin + (x * std::sin(to) + z * std::cos(to)) / c);
        }
      }
    }
  }
  return static_cast<int>(std::ceil((tmax + pulse_delay - params.t0) * array.sampling_frequency)) + 1;
}

#define KKBEAM_BEAMFORM_INSTANTIATE(R)                                                                         \
  template DelayLUTSet<R> build_das_luts(const ImageGrid&, const TransducerArray&, const AcquisitionParams&); \
  template DelayLUTSet<R> build_kk_luts(const ImageGrid&, const std::vector<double>&, const ReceiveAngleSet&, \
                                        double);                                                              \
  template ComplexImage<R> das(const AnalyticRF<R>&, const DelayLUTSet<R>&, const BeamformConfig&);           \
  template ComplexImage<R> direct_das(const AnalyticRF<R>&, const BeamformConfig&);                           \
  template ComplexImage<R> kk(const CompressedRF<R>&, const DelayLUTSet<R>&, const BeamformConfig&);          \
  template IntensityImage<R> intensity(const ComplexImage<R>&);                                               \
  template IntensityImage<R> compound_coherent(const std::vector<ComplexImage<R>>&);                          \
  template IntensityImage<R> compound_incoherent(const std::vector<ComplexImage<R>>&);
KKBEAM_BEAMFORM_INSTANTIATE(float)
KKBEAM_BEAMFORM_INSTANTIATE(double)

}  // namespace kkbeam
