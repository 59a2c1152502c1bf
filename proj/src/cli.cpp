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


#include "kkbeam/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "kkbeam/beamform.hpp"
#include "kkbeam/compress.hpp"
#include "kkbeam/io.hpp"
#include "kkbeam/metrics.hpp"
#include "kkbeam/parallel.hpp"
#include "kkbeam/sampling.hpp"
#include "kkbeam/simulate.hpp"
#include "kkbeam/spectral.hpp"

namespace kkbeam {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kNoiseSeedSalt = 0x9e3779b97f4a7c15ULL;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

int threads_for(const PipelineConfig& config) { return resolve_threads(config.threads); }

void write_text(const fs::path& path, const std::string& text) {
  write_bytes(path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

fs::path write_sidecar(const PipelineConfig& config, const std::string& command, const std::string& input = {}) {
  std::ostringstream os;
  os << config.echo << "\n[provenance]\ncommand = " << command << "\n";
  if (!input.empty()) os << "input = " << input << "\n";
  os << "seed = " << config.seed << "\n";
  const auto path = config.output.resolve(command + ".provenance.ini");
  write_text(path, os.str());
  return path;
}

RFVolume<float> simulate_volume(const PipelineConfig& config, const TransducerArray& array,
                                const AcquisitionParams& params) {
  SimulationOptions options;
  options.noise_rms = config.noise_rms;
  options.noise_seed = config.seed ^ kNoiseSeedSalt;
  options.spherical_spreading = config.spherical_spreading;
  options.threads = threads_for(config);
  return simulate_rf<float>(array, params, config.build_phantom(), make_pulse(array), options);
}

// Receive sets sized for the data actually being processed.
std::vector<ReceiveAngleSet> sets_for(const PipelineConfig& config, const AcquisitionParams& params) {
  const int N = params.num_transmits();
  if (N == config.params.num_transmits()) return config.receive_sets();
  PipelineConfig adjusted = config;
  adjusted.params = params;
  adjusted.max_angle = std::max(std::abs(params.transmit_angles.front()), std::abs(params.transmit_angles.back()));
  return adjusted.receive_sets();
}

int guard_reference(const PipelineConfig& config, const TransducerArray& array, const AcquisitionParams& params,
                    const std::vector<ReceiveAngleSet>& sets) {
  const double delay = make_pulse(array).peak_delay();
  int last = 0;
  for (const auto& s : sets) last = std::max(last, last_used_sample(config.grid, array, params, delay, &s));
  return last;
}

struct Inputs {
  std::optional<RFVolume<float>> rf;
  std::optional<AnalyticRF<float>> analytic;
  std::optional<CompressedRF<float>> compressed;

  static Inputs from(const RFContainer& c) {
    Inputs in;
    switch (c.kind) {
      case ContainerKind::Real: in.rf = c.as_real(); break;
      case ContainerKind::Analytic: in.analytic = c.as_analytic(); break;
      case ContainerKind::Compressed: in.compressed = c.as_compressed(); break;
    }
    return in;
  }
  const TransducerArray& array() const {
    return rf ? rf->array : analytic ? analytic->array : compressed->array;
  }
  const AcquisitionParams& params() const {
    return rf ? rf->params : analytic ? analytic->params : compressed->params;
  }
};

struct NamedImage {
  std::string name;
  IntensityImage<float> image;
};

std::vector<NamedImage> form_images(const PipelineConfig& config, const Inputs& in) {
  const int threads = threads_for(config);
  const auto& array = in.array();
  const auto& params = in.params();
  BeamformConfig bc;
  bc.grid = config.grid;
  bc.interpolation = config.beamform.interpolation;
  bc.pulse_delay = make_pulse(array).peak_delay();
  bc.threads = threads;

  std::vector<NamedImage> images;
  if (config.beamform.das) {
    std::optional<AnalyticRF<float>> local;
    const AnalyticRF<float>* analytic = nullptr;
    if (in.rf) {
      local = analytic_staged(*in.rf, threads);
      analytic = &*local;
    } else if (in.analytic) {
      analytic = &*in.analytic;
    } else {
      throw DataError("DAS needs real or analytic RF; the input is compressed (kind 2)");
    }
    BeamformConfig das_config = bc;
    if (config.beamform.f_number > 0.0) {
      das_config.max_acceptance_angle = std::atan(1.0 / (2.0 * config.beamform.f_number));
    }
    const auto luts = build_das_luts<float>(config.grid, array, params);
    images.push_back({"das", intensity(das(*analytic, luts, das_config))});
  }

  if (config.beamform.kk) {
    std::vector<CompressedRF<float>> compressed;
    if (in.compressed) {
      compressed.push_back(*in.compressed);
    } else {
      const auto sets = sets_for(config, params);
      CompressOptions options;
      options.threads = threads;
      options.last_used_sample = guard_reference(config, array, params, sets);
      if (in.rf) {
        compressed = compress_staged(*in.rf, sets, threads, options);
      } else {
        for (const auto& s : sets) compressed.push_back(compress(*in.analytic, s, options));
      }
    }
    std::vector<ComplexImage<float>> parts;
    for (const auto& c : compressed) {
      const auto luts = build_kk_luts<float>(config.grid, c.params.transmit_angles, c.receive, c.params.sound_speed);
      parts.push_back(kk(c, luts, bc));
      images.push_back({"kk_" + c.receive.describe(), intensity(parts.back())});
    }
    if (config.beamform.compounding == Compounding::Coherent) {
      images.push_back({"kk_coherent", compound_coherent(parts)});
    } else if (config.beamform.compounding == Compounding::Incoherent) {
      images.push_back({"kk_incoherent", compound_incoherent(parts)});
    }
  }
  return images;
}

FileList write_images(const PipelineConfig& config, const std::vector<NamedImage>& images) {
  FileList files;
  const auto& reference = images.front().image;
  const bool reference_ok = reference.pixels.maxCoeff() > 0.0f;
  std::ostringstream csv;
  csv << "image,metric,value\n";
  for (const auto& [name, image] : images) {
    GammaMatch display;
    if (!(image.pixels.maxCoeff() > 0.0f)) {
      display.gamma = kReferenceGamma;
      display.display = IntensityImage<double>::zeros(image.grid);
    } else {
      display = gamma_match(image, reference_ok ? reference : image);
    }
    const auto stem = config.output.image_prefix + "_" + name;
    files.push_back(config.output.resolve(stem + ".pgm"));
    write_pgm16(files.back(), display.display);
    files.push_back(config.output.resolve(stem + ".f32"));
    write_raw_f32(files.back(), image);

    const auto [ix, iz] = image.argmax();
    csv << name << ",peak_ix," << ix << "\n";
    csv << name << ",peak_iz," << iz << "\n";
    csv << name << ",peak_x," << num(image.grid.x(ix)) << "\n";
    csv << name << ",peak_z," << num(image.grid.z(iz)) << "\n";
    csv << name << ",gamma," << num(display.gamma) << "\n";
    if (config.metrics.inside) {
      csv << name << ",gcnr," << num(gcnr(image, *config.metrics.inside, *config.metrics.outside, config.metrics.bins))
          << "\n";
    }
    for (std::size_t k = 0; k < config.metrics.fwhm_targets.size(); ++k) {
      double width = std::nan("");
      try {
        width = lateral_fwhm(image, config.metrics.fwhm_targets[k], config.metrics.fwhm_window);
      } catch (const DataError&) {
      }
      csv << name << ",fwhm_" << k << "," << num(width) << "\n";
    }
    if (config.metrics.dip_pair) {
      double dip = std::nan("");
      try {
        dip = peak_dip_db(image, config.metrics.dip_pair->first, config.metrics.dip_pair->second,
                          config.metrics.dip_depth_window);
      } catch (const DataError&) {
      }
      csv << name << ",dip_db," << num(dip) << "\n";
    }
  }
  files.push_back(config.output.resolve(config.output.metrics));
  write_text(files.back(), csv.str());
  return files;
}

template <typename T>
double median(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

FileList cmd_simulate(const PipelineConfig& config) {
  const auto rf = simulate_volume(config, config.array, config.params);
  FileList files{config.output.resolve(config.output.rf)};
  write_container(files.front(), make_container(rf));
  files.push_back(write_sidecar(config, "simulate"));
  return files;
}

FileList cmd_compress(const PipelineConfig& config, const fs::path& input) {
  const auto container = read_container(input);
  const auto in = Inputs::from(container);
  if (in.compressed) throw DataError("compress: input is already compressed (kind 2)");
  const int threads = threads_for(config);
  const auto sets = sets_for(config, in.params());
  CompressOptions options;
  options.threads = threads;
  options.last_used_sample = guard_reference(config, in.array(), in.params(), sets);
  std::vector<CompressedRF<float>> out;
  if (in.rf) {
    out = compress_staged(*in.rf, sets, threads, options);
  } else {
    for (const auto& s : sets) out.push_back(compress(*in.analytic, s, options));
  }
  FileList files;
  for (const auto& c : out) {
    files.push_back(config.output.resolve(config.output.compressed_prefix + "_" + c.receive.describe() + ".kkrf"));
    write_container(files.back(), make_container(c));
  }
  files.push_back(write_sidecar(config, "compress", input.string()));
  return files;
}

FileList cmd_beamform(const PipelineConfig& config, const fs::path& input) {
  const auto in = Inputs::from(read_container(input));
  auto files = write_images(config, form_images(config, in));
  files.push_back(write_sidecar(config, "beamform", input.string()));
  return files;
}

FileList cmd_pipeline(const PipelineConfig& config) {
  Inputs in;
  in.rf = simulate_volume(config, config.array, config.params);
  FileList files;
  if (!config.output.rf.empty()) {
    files.push_back(config.output.resolve(config.output.rf));
    write_container(files.back(), make_container(*in.rf));
  }
  for (auto& f : write_images(config, form_images(config, in))) files.push_back(std::move(f));
  files.push_back(write_sidecar(config, "pipeline"));
  return files;
}

FileList cmd_support(const PipelineConfig& config) {
  const auto& transmit = config.params.transmit_angles;
  const int N = config.params.num_transmits();
  std::vector<ReceiveAngleSet> sets;
  if (config.sampling.scheme == "explicit") {
    sets.push_back(explicit_angles(config.sampling.explicit_angles));
  } else {
    sets = config.receive_sets();
  }
  std::ostringstream samples_csv, hist_csv;
  samples_csv << "set,transmit,receive,delta_theta_deg,kx\n";
  hist_csv << "set,bin,left_deg,right_deg,count\n";
  for (const auto& s : sets) {
    const auto samples = support(transmit, s, config.array.center_frequency, config.params.sound_speed);
    const int M = s.size();
    for (std::size_t k = 0; k < samples.size(); ++k) {
      samples_csv << s.describe() << "," << k / M << "," << k % M << "," << num(rad2deg(samples[k].delta_theta))
                  << "," << num(samples[k].kx) << "\n";
    }
    const auto h = support_histogram(samples, config.sampling.histogram_bins);
    for (int b = 0; b < h.num_bins(); ++b) {
      hist_csv << s.describe() << "," << b << "," << num(rad2deg(h.edges[b])) << "," << num(rad2deg(h.edges[b + 1]))
               << "," << h.counts[b] << "\n";
    }
  }
  (void)N;
  FileList files{config.output.resolve(config.output.support), config.output.resolve(config.output.histogram)};
  write_text(files[0], samples_csv.str());
  write_text(files[1], hist_csv.str());
  files.push_back(write_sidecar(config, "support"));
  return files;
}

std::vector<BenchRow> cmd_bench(const PipelineConfig& config, std::ostream& console) {
  const int threads = threads_for(config);
  std::map<std::pair<int, int>, RFVolume<float>> cache;
  std::vector<BenchRow> rows;

  for (const auto& bc : config.bench.cases) {
    TransducerArray array = config.array;
    if (!bc.kk) array.num_elements = bc.num_receives;
    AcquisitionParams params = config.params;
    params.transmit_angles = transmit_angles(bc.num_transmits, config.max_angle);
    const auto key = std::make_pair(bc.num_transmits, array.num_elements);
    if (!cache.contains(key)) cache.emplace(key, simulate_volume(config, array, params));
    const auto& rf = cache.at(key);

    BeamformConfig bf;
    bf.grid = config.grid;
    bf.interpolation = config.beamform.interpolation;
    bf.pulse_delay = make_pulse(array).peak_delay();
    bf.threads = threads;

    BenchRow row;
    row.method = bc.kk ? "kk" : "das";
    row.num_transmits = bc.num_transmits;
    row.num_receives = bc.num_receives;
    std::vector<StageTimings> runs;

    if (bc.kk) {
      PipelineConfig scheme = config;
      scheme.sampling.scheme = config.bench.scheme;
      const auto set = scheme.receive_set(bc.num_transmits, bc.num_receives, 0);
      const auto luts = build_kk_luts<float>(config.grid, params.transmit_angles, set, params.sound_speed);
      row.lut_entries = luts.entries();
      CompressOptions options;
      options.threads = threads;
      options.last_used_sample = guard_reference(config, array, params, {set});
      for (int r = 0; r <= config.bench.repetitions; ++r) {
        StageTimings t;
        StageClock total;
        const auto c = compress_staged(rf, set, threads, &t, options);
        StageClock beam;
        const auto image = kk(c, luts, bf);
        t.beamform_ms = beam.lap();
        t.total_ms = total.lap();
        if (r > 0) runs.push_back(t);  // run 0 is the warm-up
      }
    } else {
      const auto luts = build_das_luts<float>(config.grid, array, params);
      row.lut_entries = luts.entries();
      for (int r = 0; r <= config.bench.repetitions; ++r) {
        StageTimings t;
        StageClock total;
        const auto analytic = analytic_staged(rf, threads, &t);
        StageClock beam;
        const auto image = das(analytic, luts, bf);
        t.beamform_ms = beam.lap();
        t.total_ms = total.lap();
        if (r > 0) runs.push_back(t);
      }
    }
    auto pick = [&](double StageTimings::*field) {
      std::vector<double> v;
      for (const auto& t : runs) v.push_back(t.*field);
      return median(v);
    };
    row.timings.reorg_fft_ms = pick(&StageTimings::reorg_fft_ms);
    row.timings.hilbert_compress_ms = pick(&StageTimings::hilbert_compress_ms);
    row.timings.ifft_ms = pick(&StageTimings::ifft_ms);
    row.timings.beamform_ms = pick(&StageTimings::beamform_ms);
    row.timings.total_ms = pick(&StageTimings::total_ms);
    row.timings.compression_ratio = bc.kk ? double(array.num_elements) / bc.num_receives : 1.0;
    rows.push_back(row);
  }

  std::ostringstream csv;
  csv << "method,N,M,reorg_fft_ms,hilbert_compress_ms,ifft_ms,beamform_ms,total_ms,compression_ratio,lut_entries\n";
  console << std::left << std::setw(6) << "method" << std::right << std::setw(5) << "N" << std::setw(6) << "M"
          << std::setw(12) << "reorg+fft" << std::setw(12) << "hilb/comp" << std::setw(10) << "ifft" << std::setw(12)
          << "beamform" << std::setw(10) << "total" << std::setw(8) << "ratio" << std::setw(10) << "LUT" << "\n";
  console << std::fixed << std::setprecision(2);
  for (const auto& r : rows) {
    const auto& t = r.timings;
    csv << r.method << "," << r.num_transmits << "," << r.num_receives << "," << num(t.reorg_fft_ms) << ","
        << num(t.hilbert_compress_ms) << "," << num(t.ifft_ms) << "," << num(t.beamform_ms) << "," << num(t.total_ms)
        << "," << num(t.compression_ratio) << "," << r.lut_entries << "\n";
    console << std::left << std::setw(6) << r.method << std::right << std::setw(5) << r.num_transmits << std::setw(6)
            << r.num_receives << std::setw(12) << t.reorg_fft_ms << std::setw(12) << t.hilbert_compress_ms
            << std::setw(10) << t.ifft_ms << std::setw(12) << t.beamform_ms << std::setw(10) << t.total_ms
            << std::setprecision(1) << std::setw(8) << t.compression_ratio << std::setprecision(2) << std::setw(10)
            << r.lut_entries << "\n";
  }
  console << std::defaultfloat;
  write_text(config.output.resolve(config.output.bench), csv.str());
  write_sidecar(config, "bench");
  return rows;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  // "--section.key=value" is shorthand for "--set section.key=value".
  std::vector<std::string> overrides;
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    const auto eq = a.find('=');
    const auto name = a.substr(0, eq);
    if (a.rfind("--", 0) == 0 && eq != std::string::npos && name.find('.') != std::string::npos) {
      overrides.push_back(a.substr(2));
    } else {
      args.push_back(a);
    }
  }
  std::reverse(args.begin(), args.end());

  CLI::App app{"Far-field compressive plane-wave beamforming toolkit", "kkbeam"};
  app.require_subcommand(1);
  std::string config_path, input_path, output_dir;
  std::vector<std::string> set_overrides;
  std::optional<long> seed;
  std::optional<int> threads;
  auto add_common = [&](CLI::App* cmd, bool needs_input) {
    cmd->add_option("-c,--config", config_path, "configuration file");
    cmd->add_option("--set,--key", set_overrides, "override, section.key=value");
    cmd->add_option("--seed", seed, "RNG seed");
    cmd->add_option("--threads", threads, "worker threads");
    cmd->add_option("-o,--output-dir", output_dir, "output directory");
    if (needs_input) cmd->add_option("-i,--input", input_path, "input RF container");
  };
  auto* sim = app.add_subcommand("simulate", "synthesize plane-wave RF data");
  auto* comp = app.add_subcommand("compress", "shear-and-sum RF into receive plane waves");
  auto* beam = app.add_subcommand("beamform", "form images from an RF container");
  auto* pipe = app.add_subcommand("pipeline", "simulate and beamform in one run");
  auto* supp = app.add_subcommand("support", "k-space support samples and histograms");
  auto* bench = app.add_subcommand("bench", "stage timings for DAS and KK");
  add_common(sim, false);
  add_common(comp, true);
  add_common(beam, true);
  add_common(pipe, false);
  add_common(supp, false);
  add_common(bench, false);

  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    overrides.insert(overrides.end(), set_overrides.begin(), set_overrides.end());
    if (seed) overrides.push_back("run.seed=" + std::to_string(*seed));
    if (threads) overrides.push_back("run.threads=" + std::to_string(*threads));
    if (!output_dir.empty()) overrides.push_back("output.dir=" + output_dir);
    const auto config = load_config(config_path, overrides);
    const fs::path input = input_path.empty() ? fs::path(config.input) : fs::path(input_path);
    auto need_input = [&] {
      if (input.empty()) throw ConfigError("an input file is required (--input or run.input)");
      return input;
    };
    FileList files;
    if (sim->parsed()) {
      files = cmd_simulate(config);
    } else if (comp->parsed()) {
      files = cmd_compress(config, need_input());
    } else if (beam->parsed()) {
      files = cmd_beamform(config, need_input());
    } else if (pipe->parsed()) {
      files = cmd_pipeline(config);
    } else if (supp->parsed()) {
      files = cmd_support(config);
    } else if (bench->parsed()) {
      cmd_bench(config, out);
    }
    for (const auto& f : files) out << f.string() << "\n";
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InvalidArgument& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace kkbeam
