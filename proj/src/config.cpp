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


#include "kkbeam/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "kkbeam/sampling.hpp"

namespace kkbeam {

namespace pt = boost::property_tree;

const std::vector<std::pair<std::string, std::string>>& config_schema() {
  static const std::vector<std::pair<std::string, std::string>> schema = {
      {"run.seed", "1"},
      {"run.threads", "1"},
      {"run.input", ""},
      {"array.pitch", "0.00023"},
      {"array.elements", "192"},
      {"array.center_frequency", "5200000"},
      {"array.sampling_frequency", "20830000"},
      {"array.fractional_bandwidth", "0.6"},
      {"acquisition.sound_speed", "1540"},
      {"acquisition.transmit_count", "15"},
      {"acquisition.max_angle_deg", "24"},
      {"acquisition.samples", "2048"},
      {"acquisition.t0", "0"},
      {"acquisition.noise_rms", "0"},
      {"acquisition.spherical_spreading", "false"},
      {"phantom.type", "points"},
      {"phantom.points", "0:0.012"},
      {"phantom.wire_spacings", "0.00025,0.0005,0.001"},
      {"phantom.wire_depth", "0.012"},
      {"phantom.wire_x0", "-0.001"},
      {"phantom.region", "-0.007,0.0095,0.007,0.0185"},
      {"phantom.density_per_mm2", "490"},
      {"phantom.inclusion", "0,0.014,0.002"},
      {"sampling.scheme", "vernier"},
      {"sampling.receive_count", "19"},
      {"sampling.shifts", "0"},
      {"sampling.angles_deg", ""},
      {"sampling.histogram_bins", "15"},
      {"grid.center_x", "0"},
      {"grid.z0", "0.00876"},
      {"grid.dx", "0.000057"},
      {"grid.dz", "0.000036"},
      {"grid.nx", "180"},
      {"grid.nz", "180"},
      {"beamform.methods", "das,kk"},
      {"beamform.interpolation", "linear"},
      {"beamform.compounding", "none"},
      {"beamform.f_number", "0"},
      {"metrics.inside", ""},
      {"metrics.outside", ""},
      {"metrics.bins", "256"},
      {"metrics.fwhm_targets", ""},
      {"metrics.fwhm_window", "0.002"},
      {"metrics.dip_pair", ""},
      {"metrics.dip_depth_window", "0.0005"},
      {"bench.repetitions", "5"},
      {"bench.scheme", "confocal"},
      {"bench.cases", "das:15:192,kk:15:7,kk:15:21,kk:15:57"},
      {"output.dir", "out"},
      {"output.rf", "rf.kkrf"},
      {"output.compressed_prefix", "compressed"},
      {"output.image_prefix", "image"},
      {"output.metrics", "metrics.csv"},
      {"output.support", "support.csv"},
      {"output.histogram", "histogram.csv"},
      {"output.bench", "bench.csv"},
  };
  return schema;
}

namespace {

// Sidecar files carry an extra section that is informational only.
constexpr const char* kProvenanceSection = "provenance";

std::vector<std::string> split(const std::string& text, const char* separators) {
  std::vector<std::string> parts;
  boost::split(parts, text, boost::is_any_of(separators));
  std::vector<std::string> out;
  for (auto& p : parts) {
    boost::trim(p);
    if (!p.empty()) out.push_back(p);
  }
  return out;
}

class Values {
 public:
  explicit Values(const std::map<std::string, std::string>& map) : map_(map) {}

  const std::string& text(const std::string& key) const { return map_.at(key); }

  double real(const std::string& key) const { return to_real(key, text(key)); }

  long integer(const std::string& key) const {
    const auto& s = text(key);
    try {
      std::size_t used = 0;
      const long v = std::stol(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw ConfigError(key + ": expected an integer, got '" + s + "'");
    }
  }

  bool flag(const std::string& key) const {
    const auto s = boost::to_lower_copy(text(key));
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw ConfigError(key + ": expected true or false, got '" + s + "'");
  }

  std::vector<double> reals(const std::string& key) const {
    std::vector<double> out;
    for (const auto& p : split(text(key), ",")) out.push_back(to_real(key, p));
    return out;
  }

  static double to_real(const std::string& key, const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw ConfigError(key + ": expected a number, got '" + s + "'");
    }
  }

 private:
  const std::map<std::string, std::string>& map_;
};

std::vector<Point> parse_points(const std::string& key, const std::string& text) {
  std::vector<Point> out;
  for (const auto& item : split(text, ",")) {
    const auto xy = split(item, ":");
    if (xy.size() != 2) throw ConfigError(key + ": expected x:z pairs, got '" + item + "'");
    out.push_back({Values::to_real(key, xy[0]), Values::to_real(key, xy[1])});
  }
  return out;
}

std::optional<Roi> parse_roi(const std::string& key, const std::string& text) {
  if (text.empty()) return std::nullopt;
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError(key + ": expected circle:cx,cz,r or rect:x0,z0,x1,z1");
  const auto kind = boost::trim_copy(text.substr(0, colon));
  std::vector<double> v;
  for (const auto& p : split(text.substr(colon + 1), ",")) v.push_back(Values::to_real(key, p));
  if (kind == "circle" && v.size() == 3) {
    if (!(v[2] > 0.0)) throw ConfigError(key + ": circle radius must be positive");
    return Roi::circle(v[0], v[1], v[2]);
  }
  if (kind == "rect" && v.size() == 4) {
    if (!(v[2] > v[0] && v[3] > v[1])) throw ConfigError(key + ": rect needs x0 < x1 and z0 < z1");
    return Roi::rect(v[0], v[1], v[2], v[3]);
  }
  throw ConfigError(key + ": expected circle:cx,cz,r or rect:x0,z0,x1,z1");
}

void apply_override(std::map<std::string, std::string>& values, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' is not section.key=value");
  const auto key = boost::trim_copy(assignment.substr(0, eq));
  if (!values.contains(key)) throw ConfigError("unknown config key '" + key + "'");
  values[key] = boost::trim_copy(assignment.substr(eq + 1));
}

std::string render_ini(const std::map<std::string, std::string>& values) {
  std::ostringstream os;
  std::string section;
  for (const auto& [key, _] : config_schema()) {
    const auto dot = key.find('.');
    const auto sec = key.substr(0, dot);
    if (sec != section) {
      if (!section.empty()) os << "\n";
      os << "[" << sec << "]\n";
      section = sec;
    }
    os << key.substr(dot + 1) << " = " << values.at(key) << "\n";
  }
  return os.str();
}

PipelineConfig build(const std::map<std::string, std::string>& map) {
  const Values v(map);
  PipelineConfig c;

  const long seed = v.integer("run.seed");
  if (seed < 0) throw ConfigError("run.seed must be nonnegative");
  c.seed = static_cast<std::uint64_t>(seed);
  c.threads = static_cast<int>(v.integer("run.threads"));
  if (c.threads < 1) throw ConfigError("run.threads must be at least 1");
  c.input = v.text("run.input");

  c.array.pitch = v.real("array.pitch");
  c.array.num_elements = static_cast<int>(v.integer("array.elements"));
  c.array.center_frequency = v.real("array.center_frequency");
  c.array.sampling_frequency = v.real("array.sampling_frequency");
  c.array.fractional_bandwidth = v.real("array.fractional_bandwidth");

  const int N = static_cast<int>(v.integer("acquisition.transmit_count"));
  c.max_angle = deg2rad(v.real("acquisition.max_angle_deg"));
  c.params.sound_speed = v.real("acquisition.sound_speed");
  c.params.num_samples = static_cast<int>(v.integer("acquisition.samples"));
  c.params.t0 = v.real("acquisition.t0");
  c.noise_rms = v.real("acquisition.noise_rms");
  c.spherical_spreading = v.flag("acquisition.spherical_spreading");
  if (c.noise_rms < 0.0) throw ConfigError("acquisition.noise_rms must be nonnegative");
  if (N == 1) {
    c.params.transmit_angles = {0.0};
  } else {
    c.params.transmit_angles = transmit_angles(N, c.max_angle);
  }

  const auto type = v.text("phantom.type");
  if (type == "points") {
    c.phantom.type = PhantomType::Points;
  } else if (type == "wires") {
    c.phantom.type = PhantomType::Wires;
  } else if (type == "speckle") {
    c.phantom.type = PhantomType::Speckle;
  } else if (type == "empty") {
    c.phantom.type = PhantomType::Empty;
  } else {
    throw ConfigError("phantom.type must be points, wires, speckle or empty");
  }
  for (const auto& item : split(v.text("phantom.points"), ",")) {
    const auto parts = split(item, ":");
    if (parts.size() != 2 && parts.size() != 3) throw ConfigError("phantom.points: expected x:z[:reflectivity]");
    Scatterer s;
    s.x = Values::to_real("phantom.points", parts[0]);
    s.z = Values::to_real("phantom.points", parts[1]);
    if (parts.size() == 3) s.reflectivity = Values::to_real("phantom.points", parts[2]);
    c.phantom.points.push_back(s);
  }
  c.phantom.wire_spacings = v.reals("phantom.wire_spacings");
  c.phantom.wire_depth = v.real("phantom.wire_depth");
  c.phantom.wire_x0 = v.real("phantom.wire_x0");
  const auto region = v.reals("phantom.region");
  if (region.size() != 4) throw ConfigError("phantom.region: expected x0,z0,x1,z1");
  c.phantom.region = Rect{region[0], region[1], region[2], region[3]};
  c.phantom.density_per_mm2 = v.real("phantom.density_per_mm2");
  const auto inclusion = v.reals("phantom.inclusion");
  if (inclusion.size() == 3) {
    c.phantom.inclusion = Circle{{inclusion[0], inclusion[1]}, inclusion[2]};
  } else if (!inclusion.empty()) {
    throw ConfigError("phantom.inclusion: expected cx,cz,r or empty");
  }

  c.sampling.scheme = v.text("sampling.scheme");
  if (c.sampling.scheme != "vernier" && c.sampling.scheme != "confocal" && c.sampling.scheme != "explicit") {
    throw ConfigError("sampling.scheme must be vernier, confocal or explicit");
  }
  c.sampling.receive_count = static_cast<int>(v.integer("sampling.receive_count"));
  c.sampling.shifts.clear();
  for (double s : v.reals("sampling.shifts")) {
    if (s != std::floor(s)) throw ConfigError("sampling.shifts must be integers");
    c.sampling.shifts.push_back(static_cast<int>(s));
  }
  if (c.sampling.shifts.empty()) c.sampling.shifts = {0};
  for (double a : v.reals("sampling.angles_deg")) c.sampling.explicit_angles.push_back(deg2rad(a));
  c.sampling.histogram_bins = static_cast<int>(v.integer("sampling.histogram_bins"));
  if (c.sampling.scheme == "explicit" && c.sampling.explicit_angles.empty()) {
    throw ConfigError("sampling.angles_deg is required for the explicit scheme");
  }

  c.grid = ImageGrid::centered(v.real("grid.center_x"), v.real("grid.z0"), v.real("grid.dx"), v.real("grid.dz"),
                               static_cast<int>(v.integer("grid.nx")), static_cast<int>(v.integer("grid.nz")));

  c.beamform.das = c.beamform.kk = false;
  for (const auto& m : split(v.text("beamform.methods"), ",")) {
    if (m == "das") {
      c.beamform.das = true;
    } else if (m == "kk") {
      c.beamform.kk = true;
    } else {
      throw ConfigError("beamform.methods: unknown method '" + m + "'");
    }
  }
  if (!c.beamform.das && !c.beamform.kk) throw ConfigError("beamform.methods is empty");
  const auto interp = v.text("beamform.interpolation");
  if (interp == "linear") {
    c.beamform.interpolation = Interpolation::Linear;
  } else if (interp == "nearest") {
    c.beamform.interpolation = Interpolation::Nearest;
  } else {
    throw ConfigError("beamform.interpolation must be linear or nearest");
  }
  const auto comp = v.text("beamform.compounding");
  if (comp == "none") {
    c.beamform.compounding = Compounding::None;
  } else if (comp == "coherent") {
    c.beamform.compounding = Compounding::Coherent;
  } else if (comp == "incoherent") {
    c.beamform.compounding = Compounding::Incoherent;
  } else {
    throw ConfigError("beamform.compounding must be none, coherent or incoherent");
  }
  c.beamform.f_number = v.real("beamform.f_number");
  if (c.beamform.f_number < 0.0) throw ConfigError("beamform.f_number must be nonnegative");

  c.metrics.inside = parse_roi("metrics.inside", v.text("metrics.inside"));
  c.metrics.outside = parse_roi("metrics.outside", v.text("metrics.outside"));
  if (c.metrics.inside.has_value() != c.metrics.outside.has_value()) {
    throw ConfigError("metrics.inside and metrics.outside must be given together");
  }
  c.metrics.bins = static_cast<int>(v.integer("metrics.bins"));
  c.metrics.fwhm_targets = parse_points("metrics.fwhm_targets", v.text("metrics.fwhm_targets"));
  c.metrics.fwhm_window = v.real("metrics.fwhm_window");
  const auto dip = parse_points("metrics.dip_pair", v.text("metrics.dip_pair"));
  if (dip.size() == 2) {
    c.metrics.dip_pair = std::make_pair(dip[0], dip[1]);
  } else if (!dip.empty()) {
    throw ConfigError("metrics.dip_pair: expected exactly two x:z points");
  }
  c.metrics.dip_depth_window = v.real("metrics.dip_depth_window");

  c.bench.repetitions = static_cast<int>(v.integer("bench.repetitions"));
  if (c.bench.repetitions < 3) throw ConfigError("bench.repetitions must be at least 3");
  c.bench.scheme = v.text("bench.scheme");
  if (c.bench.scheme != "vernier" && c.bench.scheme != "confocal") {
    throw ConfigError("bench.scheme must be vernier or confocal");
  }
  for (const auto& item : split(v.text("bench.cases"), ",")) {
    const auto parts = split(item, ":");
    if (parts.size() != 3 || (parts[0] != "das" && parts[0] != "kk")) {
      throw ConfigError("bench.cases: expected method:N:M entries, got '" + item + "'");
    }
    BenchCase bc;
    bc.kk = parts[0] == "kk";
    bc.num_transmits = static_cast<int>(Values::to_real("bench.cases", parts[1]));
    bc.num_receives = static_cast<int>(Values::to_real("bench.cases", parts[2]));
    if (bc.num_transmits < 2 || bc.num_receives < 1) throw ConfigError("bench.cases: N >= 2 and M >= 1 required");
    c.bench.cases.push_back(bc);
  }

  c.output.dir = v.text("output.dir");
  c.output.rf = v.text("output.rf");
  c.output.compressed_prefix = v.text("output.compressed_prefix");
  c.output.image_prefix = v.text("output.image_prefix");
  c.output.metrics = v.text("output.metrics");
  c.output.support = v.text("output.support");
  c.output.histogram = v.text("output.histogram");
  c.output.bench = v.text("output.bench");

  try {
    c.array.validate();
    c.params.validate();
    c.grid.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  c.echo = render_ini(map);
  return c;
}

}  // namespace

std::filesystem::path OutputSpec::resolve(const std::string& name) const {
  const std::filesystem::path p(name);
  return p.is_absolute() ? p : dir / p;
}

PipelineConfig parse_config(const std::string& ini_text, const std::vector<std::string>& overrides) {
  std::map<std::string, std::string> values(config_schema().begin(), config_schema().end());
  pt::ptree tree;
  try {
    std::istringstream in(ini_text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax: ") + e.what());
  }
  for (const auto& [section, body] : tree) {
    if (section == kProvenanceSection) continue;
    if (body.empty()) throw ConfigError("config key '" + section + "' is outside any section");
    for (const auto& [name, value] : body) {
      const auto key = section + "." + name;
      if (!values.contains(key)) throw ConfigError("unknown config key '" + key + "'");
      values[key] = boost::trim_copy(value.get_value<std::string>());
    }
  }
  for (const auto& o : overrides) apply_override(values, o);
  return build(values);
}

PipelineConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::string text;
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path.string());
    text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  return parse_config(text, overrides);
}

Phantom PipelineConfig::build_phantom() const {
  switch (phantom.type) {
    case PhantomType::Points: return Phantom{phantom.points, "points"};
    case PhantomType::Wires: return wire_phantom(phantom.wire_spacings, phantom.wire_depth, phantom.wire_x0);
    case PhantomType::Speckle: {
      const Circle inc = phantom.inclusion.value_or(Circle{{0.0, 0.0}, 0.0});
      return speckle_phantom(phantom.region, phantom.density_per_mm2, inc.center, inc.radius, seed);
    }
    case PhantomType::Empty: return Phantom{{}, "empty"};
  }
  return {};
}

ReceiveAngleSet PipelineConfig::receive_set(int num_transmits, int num_receives, int shift) const {
  if (sampling.scheme == "explicit") return explicit_angles(sampling.explicit_angles);
  if (sampling.scheme == "confocal") return confocal_angles(num_transmits, num_receives, max_angle);
  return uniform_vernier_angles(num_transmits, num_receives, max_angle, shift);
}

std::vector<ReceiveAngleSet> PipelineConfig::receive_sets() const {
  const int N = params.num_transmits();
  if (sampling.scheme != "vernier") return {receive_set(N, sampling.receive_count, 0)};
  std::vector<ReceiveAngleSet> sets;
  for (int j : sampling.shifts) sets.push_back(receive_set(N, sampling.receive_count, j));
  return sets;
}

}  // namespace kkbeam
