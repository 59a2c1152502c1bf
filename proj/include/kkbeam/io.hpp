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
#include <string>
#include <vector>

#include "kkbeam/core.hpp"

namespace kkbeam {

/// Container kinds in the RF file header.
enum class ContainerKind : std::uint8_t { Real = 0, Analytic = 1, Compressed = 2 };

inline constexpr std::uint16_t kContainerVersion = 1;

/// In-memory image of an RF container file.
///
/// Layout (little-endian): "KKRF", u16 version, u8 kind, u32 N, u32 L-or-M,
/// u32 T, f64 fs, nu, c, pitch, t0, f64[N] transmit angles, f64[M] receive
/// angles (kind 2 only), then a trailer of f64 fractional bandwidth and u32
/// source element count, plus u8 scheme, i32 shift, f64 transmit step for
/// kind 2. The payload follows: row-major samples, f32 for real data or
/// interleaved f32 (re, im) pairs for complex data.
struct RFContainer {
  ContainerKind kind = ContainerKind::Real;
  TransducerArray array;
  AcquisitionParams params;
  ReceiveAngleSet receive;  // kind 2
  TraceVolume<float> real;
  TraceVolume<std::complex<float>> complex;

  RFVolume<float> as_real() const;
  AnalyticRF<float> as_analytic() const;
  CompressedRF<float> as_compressed() const;
};

std::vector<std::uint8_t> encode_container(const RFContainer& container);
RFContainer decode_container(const std::vector<std::uint8_t>& bytes);

void write_container(const std::filesystem::path& path, const RFContainer& container);
RFContainer read_container(const std::filesystem::path& path);

RFContainer make_container(const RFVolume<float>& rf);
RFContainer make_container(const AnalyticRF<float>& rf);
RFContainer make_container(const CompressedRF<float>& rf);

/// Binary 16-bit PGM (P5, maxval 65535, big-endian samples) of a display
/// image in [0, 1]; rows are depth, columns are lateral position.
std::vector<std::uint8_t> encode_pgm16(const IntensityImage<double>& display);
void write_pgm16(const std::filesystem::path& path, const IntensityImage<double>& display);

/// Raw little-endian f32 dump, depth-major (row iz, then ix).
void write_raw_f32(const std::filesystem::path& path, const IntensityImage<float>& image);

void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path);

}  // namespace kkbeam
