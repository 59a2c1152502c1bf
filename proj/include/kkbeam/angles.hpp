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

#include <string>
#include <vector>

namespace kkbeam {

enum class ReceiveScheme { UniformVernier, Confocal, Explicit };

/// Synthesized receive (virtual plane-wave) angles in generation order
/// o = -floor(M/2)..floor(M/2).
struct ReceiveAngleSet {
  std::vector<double> angles;  // radians, generation order
  std::vector<int> orders;     // the o index of each angle
  ReceiveScheme scheme = ReceiveScheme::Explicit;
  int shift = 0;               // j, UniformVernier only
  double delta_theta_i = 0.0;  // transmit angular step, radians

  int size() const { return static_cast<int>(angles.size()); }
  std::vector<double> sorted() const;
  double max_abs() const;
  std::string describe() const;
};

}  // namespace kkbeam
