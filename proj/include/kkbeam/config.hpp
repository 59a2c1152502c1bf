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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "kkbeam/beamform.hpp"
#include "kkbeam/core.hpp"
#include "kkbeam/metrics.hpp"
#include "kkbeam/simulate.hpp"

namespace kkbeam {

enum class PhantomType { Points, Wires, Speckle, Empty };
enum class Compounding { None, Coherent, Incoherent };

struct PhantomSpec {
  PhantomType type = PhantomType::Points;
  std::vector<Scatterer> points;
  std::vector<double> wire_spacings;
  double wire_depth = 0.0;
  double wire_x0 = 0.0;
  Rect region;
  double density_per_mm2 = 0.0;
  std::optional<Circle> inclusion;
};

struct SamplingSpec {
  std::string scheme = "vernier";  // vernier | confocal | explicit
  int receive_count = 19;
  std::vector<int> shifts{0};
  std::vector<double> explicit_angles;  // radians
  int histogram_bins = 15;
};

struct BeamformSpec {
  bool das = true;
  bool kk = true;
  Interpolation interpolation = Interpolation::Linear;
  Compounding compounding = Compounding::None;
  double f_number = 0.0;  // DAS receive gating; 0 = full aperture
};

struct MetricsSpec {
  std::optional<Roi> inside;
  std::optional<Roi> outside;
  int bins = 256;
  std::vector<Point> fwhm_targets;
  double fwhm_window = 2e-3;
  std::optional<std::pair<Point, Point>> dip_pair;
  double dip_depth_window = 0.5e-3;
};

struct BenchCase {
  bool kk = true;
  int num_transmits = 15;
  int num_receives = 21;  // element count for DAS rows
};

struct BenchSpec {
  int repetitions = 5;
  std::string scheme = "confocal";
  std::vector<BenchCase> cases;
};

struct OutputSpec {
  std::filesystem::path dir = "out";
  std::string rf = "rf.kkrf";
  std::string compressed_prefix = "compressed";
  std::string image_prefix = "image";
  std::string metrics = "metrics.csv";
  std::string support = "support.csv";
  std::string histogram = "histogram.csv";
  std::string bench = "bench.csv";

  std::filesystem::path resolve(const std::string& name) const;
};

/// Everything one CLI run needs, parsed from a sectioned key=value file plus
/// overrides. Lengths are metres, frequencies Hz, angles degrees in the file
/// and radians here.
struct PipelineConfig {
  std::uint64_t seed = 1;
  int threads = 1;
  std::string input;

  TransducerArray array;
  AcquisitionParams params;
  double max_angle = 0.0;
  double noise_rms = 0.0;
  bool spherical_spreading = false;

  PhantomSpec phantom;
  SamplingSpec sampling;
  ImageGrid grid;
  BeamformSpec beamform;
  MetricsSpec metrics;
  BenchSpec bench;
  OutputSpec output;

  /// Effective configuration with every key, as INI text.
  std::string echo;

  Phantom build_phantom() const;
  std::vector<ReceiveAngleSet> receive_sets() const;
  ReceiveAngleSet receive_set(int num_transmits, int num_receives, int shift) const;
};

/// Loads `path` (may be empty for all defaults) and applies overrides of the
/// form "section.key=value". Unknown sections or keys throw ConfigError.
PipelineConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});
PipelineConfig parse_config(const std::string& ini_text, const std::vector<std::string>& overrides = {});

/// All recognised "section.key" names with their defaults, in file order.
const std::vector<std::pair<std::string, std::string>>& config_schema();

}  // namespace kkbeam
