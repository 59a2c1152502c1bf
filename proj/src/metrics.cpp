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


#include "kkbeam/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace kkbeam {

bool Roi::contains(double x, double z) const {
  if (const auto* c = std::get_if<Circle>(&shape)) {
    const double dx = x - c->center.x, dz = z - c->center.z;
    return dx * dx + dz * dz <= c->radius * c->radius;
  }
  return std::get<Rect>(shape).contains(x, z);
}

template <typename Real>
std::vector<double> roi_values(const IntensityImage<Real>& image, const Roi& roi) {
  std::vector<double> out;
  const auto& g = image.grid;
  for (int iz = 0; iz < g.nz; ++iz) {
    for (int ix = 0; ix < g.nx; ++ix) {
      if (roi.contains(g.x(ix), g.z(iz))) out.push_back(static_cast<double>(image.pixels(ix, iz)));
    }
  }
  return out;
}

double gcnr_samples(const std::vector<double>& inside, const std::vector<double>& outside, int num_bins) {
  if (inside.empty() || outside.empty()) throw InvalidArgument("gcnr: empty sample");
  if (num_bins < 2) throw InvalidArgument("gcnr: need at least 2 bins");
  const auto [in_lo, in_hi] = std::minmax_element(inside.begin(), inside.end());
  const auto [out_lo, out_hi] = std::minmax_element(outside.begin(), outside.end());
  const double lo = std::min(*in_lo, *out_lo);
  const double hi = std::max(*in_hi, *out_hi);
  if (!(hi > lo)) return 0.0;  // both populations are the same constant

  auto histogram = [&](const std::vector<double>& v) {
    std::vector<double> h(num_bins, 0.0);
    for (double x : v) {
      const int b = static_cast<int>((x - lo) / (hi - lo) * num_bins);
      h[std::clamp(b, 0, num_bins - 1)] += 1.0;
    }
    for (double& p : h) p /= static_cast<double>(v.size());
    return h;
  };
  const auto p_in = histogram(inside);
  const auto p_out = histogram(outside);
  double overlap = 0.0;
  for (int b = 0; b < num_bins; ++b) overlap += std::min(p_in[b], p_out[b]);
  return std::clamp(1.0 - overlap, 0.0, 1.0);
}

template <typename Real>
double gcnr(const IntensityImage<Real>& image, const Roi& inside, const Roi& outside, int num_bins) {
  const auto& g = image.grid;
  std::vector<double> in, out;
  for (int iz = 0; iz < g.nz; ++iz) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const double x = g.x(ix), z = g.z(iz);
      const bool a = inside.contains(x, z), b = outside.contains(x, z);
      if (a && b) throw InvalidArgument("gcnr: inside and outside ROIs overlap");
      if (a) in.push_back(static_cast<double>(image.pixels(ix, iz)));
      if (b) out.push_back(static_cast<double>(image.pixels(ix, iz)));
    }
  }
  if (in.size() < 100 || out.size() < 100) {
    throw InvalidArgument("gcnr: each ROI needs at least 100 pixels (got " + std::to_string(in.size()) + " and " +
                          std::to_string(out.size()) + ")");
  }
  return gcnr_samples(in, out, num_bins);
}

double profile_fwhm(const std::vector<double>& profile, double dx) {
  if (profile.size() < 3) throw InvalidArgument("fwhm: profile too short");
  const auto peak_it = std::max_element(profile.begin(), profile.end());
  const int peak = static_cast<int>(peak_it - profile.begin());
  const double half = 0.5 * *peak_it;
  if (!(*peak_it > 0.0)) throw DataError("fwhm: no peak in the search window");
  int left = peak;
  while (left > 0 && profile[left - 1] > half) --left;
  int right = peak;
  const int last = static_cast<int>(profile.size()) - 1;
  while (right < last && profile[right + 1] > half) ++right;
  if (left == 0 || right == last) throw DataError("fwhm: profile does not fall to half maximum inside the window");
  // Linear interpolation of the crossings between (left-1, left) and (right, right+1).
  const double xl = (left - 1) + (half - profile[left - 1]) / (profile[left] - profile[left - 1]);
  const double xr = right + (profile[right] - half) / (profile[right] - profile[right + 1]);
  return (xr - xl) * dx;
}

namespace {

struct Window {
  int ix0, ix1, iz0, iz1;
};

Window pixel_window(const ImageGrid& g, double cx, double cz, double half_x, double half_z) {
  Window w;
  w.ix0 = std::max(0, static_cast<int>(std::ceil((cx - half_x - g.x0) / g.dx - 1e-9)));
  w.ix1 = std::min(g.nx - 1, static_cast<int>(std::floor((cx + half_x - g.x0) / g.dx + 1e-9)));
  w.iz0 = std::max(0, static_cast<int>(std::ceil((cz - half_z - g.z0) / g.dz - 1e-9)));
  w.iz1 = std::min(g.nz - 1, static_cast<int>(std::floor((cz + half_z - g.z0) / g.dz + 1e-9)));
  if (w.ix0 > w.ix1 || w.iz0 > w.iz1) throw InvalidArgument("metrics: window lies outside the image");
  return w;
}

}  // namespace

template <typename Real>
double lateral_fwhm(const IntensityImage<Real>& image, Point target, double search_window) {
  const auto& g = image.grid;
  const Window w = pixel_window(g, target.x, target.z, 0.5 * search_window, 0.5 * search_window);
  int best_ix = w.ix0, best_iz = w.iz0;
  for (int iz = w.iz0; iz <= w.iz1; ++iz) {
    for (int ix = w.ix0; ix <= w.ix1; ++ix) {
      if (image.pixels(ix, iz) > image.pixels(best_ix, best_iz)) {
        best_ix = ix;
        best_iz = iz;
      }
    }
  }
  std::vector<double> profile;
  for (int ix = w.ix0; ix <= w.ix1; ++ix) profile.push_back(static_cast<double>(image.pixels(ix, best_iz)));
  return profile_fwhm(profile, g.dx);
}

template <typename Real>
double peak_dip_db(const IntensityImage<Real>& image, Point a, Point b, double depth_window) {
  const auto& g = image.grid;
  if (a.x > b.x) std::swap(a, b);
  const double sep = b.x - a.x;
  if (!(sep > 0.0)) throw InvalidArgument("peak_dip_db: targets must be laterally separated");
  const Window w = pixel_window(g, 0.5 * (a.x + b.x), 0.5 * (a.z + b.z), sep, 0.5 * depth_window);
  // Brightest row near the targets.
  int row = w.iz0;
  double best = -1.0;
  for (int iz = w.iz0; iz <= w.iz1; ++iz) {
    for (int ix = w.ix0; ix <= w.ix1; ++ix) {
      if (image.pixels(ix, iz) > best) {
        best = image.pixels(ix, iz);
        row = iz;
      }
    }
  }
  auto col = [&](double x) { return static_cast<int>(std::lround((x - g.x0) / g.dx)); };
  const int quarter = std::max(1, static_cast<int>(std::lround(0.25 * sep / g.dx)));
  auto local_max = [&](int c) {
    double m = 0.0;
    for (int ix = std::max(0, c - quarter); ix <= std::min(g.nx - 1, c + quarter); ++ix) {
      m = std::max(m, static_cast<double>(image.pixels(ix, row)));
    }
    return m;
  };
  const int ca = col(a.x), cb = col(b.x);
  const double peak = std::min(local_max(ca), local_max(cb));
  double dip = peak;
  for (int ix = ca; ix <= cb; ++ix) dip = std::min(dip, static_cast<double>(image.pixels(ix, row)));
  if (!(dip > 0.0)) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak / dip);
}

template <typename Real>
GammaMatch gamma_match(const IntensityImage<Real>& image, const IntensityImage<Real>& reference) {
  const double i_max = image.pixels.maxCoeff();
  const double r_max = reference.pixels.maxCoeff();
  if (!(i_max > 0.0) || !(r_max > 0.0)) throw DataError("gamma_match: degenerate all-zero image");
  const Eigen::ArrayXXd norm = image.pixels.template cast<double>() / i_max;
  const double target = (reference.pixels.template cast<double>() / r_max).pow(kReferenceGamma).mean();
  auto cost = [&](double g) { return std::abs(norm.pow(g).mean() - target); };

  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.1, b = 1.0;
  double c = b - ratio * (b - a), d = a + ratio * (b - a);
  double fc = cost(c), fd = cost(d);
  while (b - a > 1e-7) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - ratio * (b - a);
      fc = cost(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + ratio * (b - a);
      fd = cost(d);
    }
  }
  GammaMatch out;
  out.gamma = 0.5 * (a + b);
  out.display = IntensityImage<double>{image.grid, norm.pow(out.gamma)};
  return out;
}

#define KKBEAM_METRICS_INSTANTIATE(R)                                                  \
  template std::vector<double> roi_values(const IntensityImage<R>&, const Roi&);       \
  template double gcnr(const IntensityImage<R>&, const Roi&, const Roi&, int);         \
  template double lateral_fwhm(const IntensityImage<R>&, Point, double);               \
  template double peak_dip_db(const IntensityImage<R>&, Point, Point, double);         \
  template GammaMatch gamma_match(const IntensityImage<R>&, const IntensityImage<R>&);
KKBEAM_METRICS_INSTANTIATE(float)
KKBEAM_METRICS_INSTANTIATE(double)

}  // namespace kkbeam
