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


#include "kkbeam/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>

#include "kkbeam/sampling.hpp"

namespace kkbeam {

namespace {

class Writer {
 public:
  void u8(std::uint8_t v) { bytes_.push_back(v); }
  void u16(std::uint16_t v) { put(v, 2); }
  void u32(std::uint32_t v) { put(v, 4); }
  void i32(std::int32_t v) { put(static_cast<std::uint32_t>(v), 4); }
  void f32(float v) { put(std::bit_cast<std::uint32_t>(v), 4); }
  void f64(double v) { put(std::bit_cast<std::uint64_t>(v), 8); }
  void raw(const char* s, std::size_t n) { bytes_.insert(bytes_.end(), s, s + n); }
  std::vector<std::uint8_t> take() { return std::move(bytes_); }
  void reserve(std::size_t n) { bytes_.reserve(n); }

 private:
  void put(std::uint64_t v, int width) {
    for (int i = 0; i < width; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> bytes_;
};

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}
  std::uint8_t u8() { return static_cast<std::uint8_t>(get(1)); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(get(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  float f32() { return std::bit_cast<float>(static_cast<std::uint32_t>(get(4))); }
  double f64() { return std::bit_cast<double>(get(8)); }
  std::string raw(std::size_t n) {
    need(n);
    std::string s(bytes_.begin() + pos_, bytes_.begin() + pos_ + n);
    pos_ += n;
    return s;
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size()) throw DataError("RF container truncated");
  }
  std::uint64_t get(int width) {
    need(width);
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v |= std::uint64_t(bytes_[pos_ + i]) << (8 * i);
    pos_ += width;
    return v;
  }
  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

RFVolume<float> RFContainer::as_real() const {
  if (kind != ContainerKind::Real) throw DataError("expected a real RF container (kind 0)");
  return {array, params, real};
}

AnalyticRF<float> RFContainer::as_analytic() const {
  if (kind != ContainerKind::Analytic) throw DataError("expected an analytic RF container (kind 1)");
  return {array, params, complex};
}

CompressedRF<float> RFContainer::as_compressed() const {
  if (kind != ContainerKind::Compressed) throw DataError("expected a compressed RF container (kind 2)");
  return {array, params, receive, complex};
}

RFContainer make_container(const RFVolume<float>& rf) {
  RFContainer c;
  c.kind = ContainerKind::Real;
  c.array = rf.array;
  c.params = rf.params;
  c.real = rf.data;
  return c;
}

RFContainer make_container(const AnalyticRF<float>& rf) {
  RFContainer c;
  c.kind = ContainerKind::Analytic;
  c.array = rf.array;
  c.params = rf.params;
  c.complex = rf.data;
  return c;
}

RFContainer make_container(const CompressedRF<float>& rf) {
  RFContainer c;
  c.kind = ContainerKind::Compressed;
  c.array = rf.array;
  c.params = rf.params;
  c.receive = rf.receive;
  c.complex = rf.data;
  return c;
}

std::vector<std::uint8_t> encode_container(const RFContainer& c) {
  const bool is_complex = c.kind != ContainerKind::Real;
  const int groups = is_complex ? c.complex.groups() : c.real.groups();
  const int channels = is_complex ? c.complex.channels() : c.real.channels();
  const int samples = is_complex ? c.complex.samples() : c.real.samples();
  if (groups != c.params.num_transmits()) throw DataError("container: transmit table does not match data");
  if (c.kind == ContainerKind::Compressed && channels != c.receive.size()) {
    throw DataError("container: receive table does not match data");
  }

  Writer w;
  const std::size_t values = std::size_t(groups) * channels * samples * (is_complex ? 2 : 1);
  w.reserve(values * 4 + 256 + 8 * (groups + channels));
  w.raw("KKRF", 4);
  w.u16(kContainerVersion);
  w.u8(static_cast<std::uint8_t>(c.kind));
  w.u32(groups);
  w.u32(channels);
  w.u32(samples);
  w.f64(c.array.sampling_frequency);
  w.f64(c.array.center_frequency);
  w.f64(c.params.sound_speed);
  w.f64(c.array.pitch);
  w.f64(c.params.t0);
  for (double a : c.params.transmit_angles) w.f64(a);
  if (c.kind == ContainerKind::Compressed) {
    for (double a : c.receive.angles) w.f64(a);
  }
  w.f64(c.array.fractional_bandwidth);
  w.u32(c.array.num_elements);
  if (c.kind == ContainerKind::Compressed) {
    w.u8(static_cast<std::uint8_t>(c.receive.scheme));
    w.i32(c.receive.shift);
    w.f64(c.receive.delta_theta_i);
  }
  if (is_complex) {
    const auto& st = c.complex.storage();
    for (Eigen::Index r = 0; r < st.rows(); ++r) {
      for (Eigen::Index k = 0; k < st.cols(); ++k) {
        w.f32(st(r, k).real());
        w.f32(st(r, k).imag());
      }
    }
  } else {
    const auto& st = c.real.storage();
    for (Eigen::Index r = 0; r < st.rows(); ++r) {
      for (Eigen::Index k = 0; k < st.cols(); ++k) w.f32(st(r, k));
    }
  }
  return w.take();
}

RFContainer decode_container(const std::vector<std::uint8_t>& bytes) {
  Reader r(bytes);
  if (r.raw(4) != "KKRF") throw DataError("not an RF container (bad magic)");
  const auto version = r.u16();
  if (version != kContainerVersion) throw DataError("unsupported RF container version " + std::to_string(version));
  const auto kind = r.u8();
  if (kind > 2) throw DataError("unknown RF container kind " + std::to_string(kind));
  RFContainer c;
  c.kind = static_cast<ContainerKind>(kind);
  const int groups = static_cast<int>(r.u32());
  const int channels = static_cast<int>(r.u32());
  const int samples = static_cast<int>(r.u32());
  c.array.sampling_frequency = r.f64();
  c.array.center_frequency = r.f64();
  c.params.sound_speed = r.f64();
  c.array.pitch = r.f64();
  c.params.t0 = r.f64();
  c.params.num_samples = samples;
  c.params.transmit_angles.resize(groups);
  for (auto& a : c.params.transmit_angles) a = r.f64();
  if (c.kind == ContainerKind::Compressed) {
    std::vector<double> rx(channels);
    for (auto& a : rx) a = r.f64();
    c.receive = explicit_angles(std::move(rx));
  }
  c.array.fractional_bandwidth = r.f64();
  c.array.num_elements = static_cast<int>(r.u32());
  if (c.kind == ContainerKind::Compressed) {
    c.receive.scheme = static_cast<ReceiveScheme>(r.u8());
    c.receive.shift = r.i32();
    c.receive.delta_theta_i = r.f64();
  } else if (c.array.num_elements != channels) {
    throw DataError("RF container: element count does not match channel dimension");
  }
  const bool is_complex = c.kind != ContainerKind::Real;
  const std::size_t values = std::size_t(groups) * channels * samples * (is_complex ? 2 : 1);
  if (r.remaining() != values * 4) throw DataError("RF container payload length does not match its dimensions");
  if (is_complex) {
    TraceVolume<std::complex<float>> v(groups, channels, samples);
    auto& st = v.storage();
    for (Eigen::Index i = 0; i < st.rows(); ++i) {
      for (Eigen::Index k = 0; k < st.cols(); ++k) {
        const float re = r.f32();
        const float im = r.f32();
        st(i, k) = {re, im};
      }
    }
    c.complex = std::move(v);
  } else {
    TraceVolume<float> v(groups, channels, samples);
    auto& st = v.storage();
    for (Eigen::Index i = 0; i < st.rows(); ++i) {
      for (Eigen::Index k = 0; k < st.cols(); ++k) st(i, k) = r.f32();
    }
    c.real = std::move(v);
  }
  return c;
}

void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_container(const std::filesystem::path& path, const RFContainer& container) {
  write_bytes(path, encode_container(container));
}

RFContainer read_container(const std::filesystem::path& path) { return decode_container(read_bytes(path)); }

std::vector<std::uint8_t> encode_pgm16(const IntensityImage<double>& display) {
  const auto& g = display.grid;
  const std::string header = "P5\n" + std::to_string(g.nx) + " " + std::to_string(g.nz) + "\n65535\n";
  std::vector<std::uint8_t> bytes(header.begin(), header.end());
  bytes.reserve(header.size() + 2 * g.pixels());
  for (int iz = 0; iz < g.nz; ++iz) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const double v = std::clamp(display.pixels(ix, iz), 0.0, 1.0);
      const auto q = static_cast<std::uint16_t>(std::lround(v * 65535.0));
      bytes.push_back(static_cast<std::uint8_t>(q >> 8));
      bytes.push_back(static_cast<std::uint8_t>(q & 0xff));
    }
  }
  return bytes;
}

void write_pgm16(const std::filesystem::path& path, const IntensityImage<double>& display) {
  write_bytes(path, encode_pgm16(display));
}

void write_raw_f32(const std::filesystem::path& path, const IntensityImage<float>& image) {
  Writer w;
  const auto& g = image.grid;
  w.reserve(4 * g.pixels());
  for (int iz = 0; iz < g.nz; ++iz) {
    for (int ix = 0; ix < g.nx; ++ix) w.f32(image.pixels(ix, iz));
  }
  write_bytes(path, w.take());
}

}  // namespace kkbeam
