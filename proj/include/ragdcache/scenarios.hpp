// Copyright 2026 The ragdcache Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Experiment matrices built on top of sim: the single-instance model x batch
// grid, the shared-system configuration comparison, and the calibration that
// produces configs/paper.json.

#include <cstdint>
#include <string>
#include <vector>

#include "ragdcache/config.hpp"

namespace ragdcache {

/// Every (model, batch size) cell from cfg.single, cache off then on.
std::vector<SingleInstanceCell> run_single_matrix(const PaperConfig& cfg,
                                                  const std::vector<WorkItem>& items);

struct ModelUplift {
  std::string model_id;
  double throughput_off = 0.0;  // mean over batch sizes
  double throughput_on = 0.0;
  double uplift = 0.0;          // throughput_on / throughput_off - 1
  double ttft_reduction = 0.0;  // 1 - mean ttft on / mean ttft off
  std::uint64_t hit_path_queries = 0;
  std::uint64_t hit_path_faster = 0;
};

/// Per-model summary in first-seen model order. Throughput is averaged over
/// the batch-size cells before the ratio is taken.
std::vector<ModelUplift> summarize_uplift(const std::vector<SingleInstanceCell>& cells);

/// Mean of the per-model uplifts.
double mean_uplift(const std::vector<ModelUplift>& rows);

/// Baseline k=1 throughput averaged over cfg.calibration.seeds.
double baseline_throughput(const PaperConfig& cfg);

/// Sets the GPU rate (and the generator GPU and CPU rates derived from it)
/// from one value.
void set_gpu_rate(PaperConfig& cfg, double gpu_rate);

struct CalibrationStep {
  std::string name;
  double value = 0.0;
  double achieved = 0.0;
  double target = 0.0;
};

/// Fits, in order: the Zipf exponent to the coverage target, the GPU rate
/// to the baseline throughput target, and the per-token decode time to the
/// mean single-instance uplift target. Writes the results into `cfg`.
std::vector<CalibrationStep> calibrate(PaperConfig& cfg);

}  // namespace ragdcache
