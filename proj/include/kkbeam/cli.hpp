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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "kkbeam/config.hpp"
#include "kkbeam/pipeline.hpp"

namespace kkbeam {

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitConfig = 2, kExitData = 3, kExitIo = 4 };

using FileList = std::vector<std::filesystem::path>;

/// Each command writes its outputs under config.output.dir plus a
/// "<command>.provenance.ini" sidecar that can be fed back as --config.
FileList cmd_simulate(const PipelineConfig& config);
FileList cmd_compress(const PipelineConfig& config, const std::filesystem::path& input);
FileList cmd_beamform(const PipelineConfig& config, const std::filesystem::path& input);
FileList cmd_pipeline(const PipelineConfig& config);
FileList cmd_support(const PipelineConfig& config);

struct BenchRow {
  std::string method;  // "das" or "kk"
  int num_transmits = 0;
  int num_receives = 0;  // elements for DAS rows
  StageTimings timings;  // per-stage medians
  std::size_t lut_entries = 0;
};

std::vector<BenchRow> cmd_bench(const PipelineConfig& config, std::ostream& console);

/// Entry point behind the kkbeam executable. Returns an ExitCode.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kkbeam
