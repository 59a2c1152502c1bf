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

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "kkbeam/core.hpp"

namespace kkbeam {

enum class Interpolation { Nearest, Linear };

struct BeamformConfig {
  ImageGrid grid;
  Interpolation interpolation = Interpolation::Linear;
  /// Time from echo arrival to the pulse peak; added to every read time.
  double pulse_delay = 0.0;
  /// DAS only: drop elements seen from the pixel at more than this angle
  /// from the vertical. Unset means the full aperture.
  std::optional<double> max_acceptance_angle;
  /// Per receive channel (element for DAS, receive angle for KK). Empty = 1.
  std::vector<double> channel_weights;
  int threads = 1;
};

/// Decomposed delay tables, all in seconds.
///
/// Both beamformers share tx_x (X x N, x sin(theta_i)/c) and tx_z
/// (Z x N, z cos(theta_i)/c). DAS adds rx_hypot, Z rows over X + L_eff
/// lateral-offset nodes (sqrt(o^2 + z^2)/c at o = x0 - u_max + m dx); KK adds
/// rx_x (X x M) and rx_z (Z x M), the receive-angle versions of the transmit
/// tables.
template <typename Real = float>
struct DelayLUTSet {
  using Table = Eigen::Array<Real, Eigen::Dynamic, Eigen::Dynamic>;
  enum class Kind { Das, Kk };

  Kind kind = Kind::Das;
  ImageGrid grid;
  std::vector<double> transmit_angles;
  std::vector<double> receive_angles;  // KK only
  double sound_speed = 0.0;

  Table tx_x;
  Table tx_z;

  Table rx_hypot;                  // DAS, Z x (X + L_eff)
  std::vector<int> element_node;   // DAS: floor((u_max - u_l) / dx)
  std::vector<Real> element_frac;  // DAS: fractional part, 0 on commensurate grids

  Table rx_x;  // KK
  Table rx_z;  // KK

  /// Number of stored delay entries over all tables.
  std::size_t entries() const {
    return std::size_t(tx_x.size() + tx_z.size() + rx_hypot.size() + rx_x.size() + rx_z.size());
  }
  int offset_nodes() const { return static_cast<int>(rx_hypot.cols()); }

  /// Receive delay from pixel (ix, iz) to element l via the offset grid.
  Real rx_hypot_lookup(int ix, int iz, int l) const {
    const int q = ix + element_node[l];
    const Real a = element_frac[l];
    const Real lo = rx_hypot(iz, q);
    return a == Real(0) ? lo : lo + a * (rx_hypot(iz, q + 1) - lo);
  }
};

/// Accounting formulas for the two decompositions.
inline std::size_t das_lut_entries(std::size_t X, std::size_t Z, std::size_t N, std::size_t L) {
  return (X + Z) * N + (X + L) * Z;
}
inline std::size_t kk_lut_entries(std::size_t X, std::size_t Z, std::size_t N, std::size_t M) {
  return (X + Z) * (N + M);
}

/// Offset nodes beyond X needed to cover the aperture: floor(aperture/dx) + 1.
int das_offset_span(const TransducerArray& array, double dx);

template <typename Real = float>
DelayLUTSet<Real> build_das_luts(const ImageGrid& grid, const TransducerArray& array, const AcquisitionParams& params);

template <typename Real = float>
DelayLUTSet<Real> build_kk_luts(const ImageGrid& grid, const std::vector<double>& transmit_angles,
                                const ReceiveAngleSet& receive, double sound_speed);

/// B(r) = sum over (theta_i, u_l) of RF_u(u_l, tau_in + tau_out), delays from the LUTs.
template <typename Real>
ComplexImage<Real> das(const AnalyticRF<Real>& rf, const DelayLUTSet<Real>& luts, const BeamformConfig& config);

/// DAS with every delay computed per pixel in double precision; the test oracle.
template <typename Real>
ComplexImage<Real> direct_das(const AnalyticRF<Real>& rf, const BeamformConfig& config);

/// B_KK(r) = sum over (theta_i, theta_o) of RF_theta(theta_o, tau_in + s_o.r/c).
template <typename Real>
ComplexImage<Real> kk(const CompressedRF<Real>& rf, const DelayLUTSet<Real>& luts, const BeamformConfig& config);

/// |B|^2 per pixel.
template <typename Real>
IntensityImage<Real> intensity(const ComplexImage<Real>& image);

/// |sum_j B_j|^2 per pixel.
template <typename Real>
IntensityImage<Real> compound_coherent(const std::vector<ComplexImage<Real>>& images);

/// sum_j |B_j|^2 per pixel.
template <typename Real>
IntensityImage<Real> compound_incoherent(const std::vector<ComplexImage<Real>>& images);

/// Highest sample index (plus one for interpolation) that DAS or KK reads on
/// this grid, in the centred time frame. With a receive set, the KK reads are
/// included as well.
int last_used_sample(const ImageGrid& grid, const TransducerArray& array, const AcquisitionParams& params,
                     double pulse_delay, const ReceiveAngleSet* receive = nullptr);

#define KKBEAM_BEAMFORM_EXTERN(R)                                                                                   \
  extern template DelayLUTSet<R> build_das_luts(const ImageGrid&, const TransducerArray&, const AcquisitionParams&); \
  extern template DelayLUTSet<R> build_kk_luts(const ImageGrid&, const std::vector<double>&,                       \
                                               const ReceiveAngleSet&, double);                                     \
  extern template ComplexImage<R> das(const AnalyticRF<R>&, const DelayLUTSet<R>&, const BeamformConfig&);          \
  extern template ComplexImage<R> direct_das(const AnalyticRF<R>&, const BeamformConfig&);                          \
  extern template ComplexImage<R> kk(const CompressedRF<R>&, const DelayLUTSet<R>&, const BeamformConfig&);         \
  extern template IntensityImage<R> intensity(const ComplexImage<R>&);                                              \
  extern template IntensityImage<R> compound_coherent(const std::vector<ComplexImage<R>>&);                         \
  extern template IntensityImage<R> compound_incoherent(const std::vector<ComplexImage<R>>&);
KKBEAM_BEAMFORM_EXTERN(float)
KKBEAM_BEAMFORM_EXTERN(double)
#undef KKBEAM_BEAMFORM_EXTERN

}  // namespace kkbeam
