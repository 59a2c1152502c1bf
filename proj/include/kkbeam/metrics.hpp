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

#include <variant>
#include <vector>

#include "kkbeam/core.hpp"
#include "kkbeam/simulate.hpp"

namespace kkbeam {

struct Circle {
  Point center;
  double radius = 0.0;
};

/// Region of interest in metres, either a circle or an axis-aligned rectangle.
struct Roi {
  std::variant<Circle, Rect> shape;

  static Roi circle(double cx, double cz, double radius) { return Roi{Circle{{cx, cz}, radius}}; }
  static Roi rect(double x0, double z0, double x1, double z1) { return Roi{Rect{x0, z0, x1, z1}}; }
  bool contains(double x, double z) const;
};

/// Values of every pixel whose centre lies inside the ROI.
template <typename Real>
std::vector<double> roi_values(const IntensityImage<Real>& image, const Roi& roi);

/// Generalized contrast-to-noise ratio, 1 - OVL of the two intensity
/// histograms over shared uniform bins spanning the joint min..max.
template <typename Real>
double gcnr(const IntensityImage<Real>& image, const Roi& inside, const Roi& outside, int num_bins = 256);

/// gCNR of two raw samples. Exposed for tests and ad-hoc analysis.
double gcnr_samples(const std::vector<double>& inside, const std::vector<double>& outside, int num_bins = 256);

/// Lateral FWHM (m) of the intensity profile through the brightest pixel
/// within a square window of side `search_window` around `target`.
template <typename Real>
double lateral_fwhm(const IntensityImage<Real>& image, Point target, double search_window);

/// FWHM (m) of a sampled profile with spacing dx around its maximum.
double profile_fwhm(const std::vector<double>& profile, double dx);

/// Intensity dip between two lateral targets, in dB: 10 log10(min(peak_a,
/// peak_b) / min between them), measured along the brightest row near the
/// targets' depth. Values >= 3 dB count as resolved.
template <typename Real>
double peak_dip_db(const IntensityImage<Real>& image, Point a, Point b, double depth_window);

struct GammaMatch {
  double gamma = 1.0;
  IntensityImage<double> display;  // (I / I_max)^gamma, in [0, 1]
};

inline constexpr double kReferenceGamma = 0.5;

/// Picks gamma in [0.1, 1] so the mean display brightness of `image` matches
/// that of `reference` shown at gamma 0.5. Golden-section search.
template <typename Real>
GammaMatch gamma_match(const IntensityImage<Real>& image, const IntensityImage<Real>& reference);

#define KKBEAM_METRICS_EXTERN(R)                                                                   \
  extern template std::vector<double> roi_values(const IntensityImage<R>&, const Roi&);           \
  extern template double gcnr(const IntensityImage<R>&, const Roi&, const Roi&, int);             \
  extern template double lateral_fwhm(const IntensityImage<R>&, Point, double);                   \
  extern template double peak_dip_db(const IntensityImage<R>&, Point, Point, double);             \
  extern template GammaMatch gamma_match(const IntensityImage<R>&, const IntensityImage<R>&);
KKBEAM_METRICS_EXTERN(float)
KKBEAM_METRICS_EXTERN(double)
#undef KKBEAM_METRICS_EXTERN

}  // namespace kkbeam
