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

#include <vector>

#include "kkbeam/angles.hpp"

namespace kkbeam {

/// Uniform transmit angles from -max_angle to +max_angle inclusive.
std::vector<double> transmit_angles(int count, double max_angle);

/// Angular step 2 max_angle / (N - 1) between transmit angles.
double transmit_step(int count, double max_angle);

/// Shifted vernier receive set: theta_o = sgn(o) dtheta_i (2|o|/M + j).
///
/// j = 0 interleaves the receive angles between neighbouring transmit
/// angles; j > 0 pushes the two half-sets outward by j transmit steps, which
/// widens the k-space support at the cost of sampling density.
ReceiveAngleSet uniform_vernier_angles(int num_transmits, int num_receives, double max_angle, int shift);

/// Confocal receive set: theta_o = sgn(o) dtheta_i (2|o|/M + mod(|o|, floor(N/2))).
ReceiveAngleSet confocal_angles(int num_transmits, int num_receives, double max_angle);

ReceiveAngleSet explicit_angles(std::vector<double> angles);

/// One transmit/receive pair in k-space.
struct SupportSample {
  double delta_theta;  // theta_o - theta_i, radians
  double kx;           // nu (sin theta_o - sin theta_i) / c, cycles/m
};

/// All N x M difference samples, transmit-major order.
std::vector<SupportSample> support(const std::vector<double>& transmit, const ReceiveAngleSet& receive,
                                   double center_frequency, double sound_speed);

struct Histogram {
  std::vector<double> edges;  // num_bins + 1
  std::vector<long> counts;

  int num_bins() const { return static_cast<int>(counts.size()); }
  double center(int b) const { return 0.5 * (edges[b] + edges[b + 1]); }
};

/// Uniform-bin histogram of delta_theta over [min, max]; the last bin is closed.
Histogram support_histogram(const std::vector<SupportSample>& samples, int num_bins);

/// Pearson correlation of the histogram counts with a triangle centred at
/// zero whose feet sit at the outermost histogram edge.
double triangle_correlation(const Histogram& histogram);

}  // namespace kkbeam
