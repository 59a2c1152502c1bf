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


#include "kkbeam/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kkbeam/core.hpp"

namespace kkbeam {

namespace {

// o = -floor(M/2)..floor(M/2); for even M the o = 0 term is dropped so that
// exactly M angles remain.
std::vector<int> receive_orders(int M) {
  std::vector<int> orders;
  const int half = M / 2;
  for (int o = -half; o <= half; ++o) {
    if (M % 2 == 0 && o == 0) continue;
    orders.push_back(o);
  }
  return orders;
}

int sgn(int o) { return (o > 0) - (o < 0); }

}  // namespace

std::vector<double> ReceiveAngleSet::sorted() const {
  std::vector<double> s = angles;
  std::sort(s.begin(), s.end());
  return s;
}

double ReceiveAngleSet::max_abs() const {
  double m = 0.0;
  for (double a : angles) m = std::max(m, std::abs(a));
  return m;
}

std::string ReceiveAngleSet::describe() const {
  std::ostringstream os;
  switch (scheme) {
    case ReceiveScheme::UniformVernier: os << "vernier_j" << shift; break;
    case ReceiveScheme::Confocal: os << "confocal"; break;
    case ReceiveScheme::Explicit: os << "explicit"; break;
  }
  os << "_m" << size();
  return os.str();
}

double transmit_step(int count, double max_angle) {
  if (count < 2) throw InvalidArgument("transmit angles: need N >= 2");
  return 2.0 * max_angle / (count - 1);
}

std::vector<double> transmit_angles(int count, double max_angle) {
  if (count < 2) throw InvalidArgument("transmit angles: need N >= 2");
  if (!(max_angle > 0.0)) throw InvalidArgument("transmit angles: max angle must be positive");
  const double step = transmit_step(count, max_angle);
  std::vector<double> angles(count);
  // Built from both ends so the set is exactly antisymmetric.
  for (int i = 0; i < count; ++i) {
    const int k = 2 * i - (count - 1);  // odd/even offsets about the centre
    angles[i] = 0.5 * k * step;
  }
  angles.front() = -max_angle;
  angles.back() = max_angle;
  return angles;
}

ReceiveAngleSet uniform_vernier_angles(int num_transmits, int num_receives, double max_angle, int shift) {
  if (num_receives < 1) throw InvalidArgument("vernier: need M >= 1");
  if (shift < 0 || shift > num_transmits / 2) {
    throw InvalidArgument("vernier: shift j=" + std::to_string(shift) + " outside [0, " +
                          std::to_string(num_transmits / 2) + "]");
  }
  const double step = transmit_step(num_transmits, max_angle);
  ReceiveAngleSet set;
  set.scheme = ReceiveScheme::UniformVernier;
  set.shift = shift;
  set.delta_theta_i = step;
  for (int o : receive_orders(num_receives)) {
    set.orders.push_back(o);
    set.angles.push_back(sgn(o) * step * (2.0 * std::abs(o) / num_receives + shift));
  }
  return set;
}

ReceiveAngleSet confocal_angles(int num_transmits, int num_receives, double max_angle) {
  if (num_transmits < 3) throw InvalidArgument("confocal: need N >= 3");
  if (num_receives < 1) throw InvalidArgument("confocal: need M >= 1");
  const double step = transmit_step(num_transmits, max_angle);
  const int period = num_transmits / 2;
  ReceiveAngleSet set;
  set.scheme = ReceiveScheme::Confocal;
  set.delta_theta_i = step;
  for (int o : receive_orders(num_receives)) {
    set.orders.push_back(o);
    set.angles.push_back(sgn(o) * step * (2.0 * std::abs(o) / num_receives + std::abs(o) % period));
  }
  return set;
}

ReceiveAngleSet explicit_angles(std::vector<double> angles) {
  if (angles.empty()) throw InvalidArgument("explicit receive set is empty");
  ReceiveAngleSet set;
  set.scheme = ReceiveScheme::Explicit;
  const int M = static_cast<int>(angles.size());
  set.orders = receive_orders(M);
  set.angles = std::move(angles);
  return set;
}

std::vector<SupportSample> support(const std::vector<double>& transmit, const ReceiveAngleSet& receive,
                                   double center_frequency, double sound_speed) {
  if (transmit.empty() || receive.angles.empty()) throw InvalidArgument("support: empty angle list");
  std::vector<SupportSample> out;
  out.reserve(transmit.size() * receive.angles.size());
  for (double ti : transmit) {
    for (double to : receive.angles) {
      out.push_back({to - ti, center_frequency * (std::sin(to) - std::sin(ti)) / sound_speed});
    }
  }
  return out;
}

Histogram support_histogram(const std::vector<SupportSample>& samples, int num_bins) {
  if (num_bins < 3) throw InvalidArgument("histogram: need at least 3 bins");
  if (samples.empty()) throw InvalidArgument("histogram: no samples");
  auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end(), [](const auto& a, const auto& b) {
    return a.delta_theta < b.delta_theta;
  });
  double lo = lo_it->delta_theta;
  double hi = hi_it->delta_theta;
  if (hi == lo) {
    // Degenerate single-valued support: centre one bin on the value.
    lo -= 0.5;
    hi += 0.5;
  }
  Histogram h;
  h.edges.resize(num_bins + 1);
  for (int b = 0; b <= num_bins; ++b) h.edges[b] = lo + (hi - lo) * b / num_bins;
  h.counts.assign(num_bins, 0);
  const double width = (hi - lo) / num_bins;
  for (const auto& s : samples) {
    int b = static_cast<int>(std::floor((s.delta_theta - lo) / width));
    h.counts[std::clamp(b, 0, num_bins - 1)]++;
  }
  return h;
}

double triangle_correlation(const Histogram& h) {
  const int B = h.num_bins();
  const double half_width = std::max(std::abs(h.edges.front()), std::abs(h.edges.back()));
  Eigen::ArrayXd counts(B), ideal(B);
  for (int b = 0; b < B; ++b) {
    counts(b) = static_cast<double>(h.counts[b]);
    ideal(b) = std::max(0.0, 1.0 - std::abs(h.center(b)) / half_width);
  }
  const Eigen::ArrayXd a = counts - counts.mean();
  const Eigen::ArrayXd t = ideal - ideal.mean();
  const double denom = std::sqrt((a * a).sum() * (t * t).sum());
  return denom > 0.0 ? (a * t).sum() / denom : 0.0;
}

}  // namespace kkbeam
