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

// Run configuration: model profiles, device rates, cost constants and
// workload parameters, loaded from JSON (configs/paper.json by default).

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ragdcache/sim.hpp"

namespace ragdcache {

struct WorkloadParams {
  std::uint64_t n_docs = 1000;
  std::uint64_t n_queries = 1000;
  double zipf_s = 1.0;
  double coverage_target = 0.031;
  std::uint32_t q_tokens = 16;
  std::uint32_t doc_tokens = 120;
  std::uint64_t seed = 7;
};

struct SharedParams {
  std::string model = "llama-1b-like";
  double rate = 40.0;
  ArrivalProcess process = ArrivalProcess::kPoisson;
  double threshold = 1.0;
  std::uint32_t tries = 3;
  std::uint32_t k = 1;
  std::uint64_t memory_capacity_bytes = 0;
  KeyGranularity granularity = KeyGranularity::kCombination;
};

struct SingleParams {
  std::vector<std::string> models = {"opt-1.3b-like", "opt-2.7b-like", "opt-6.7b-like"};
  std::vector<std::uint32_t> batch_sizes = {1, 2, 4, 8, 16, 32};
  std::uint64_t memory_capacity_bytes = 16ULL << 30;
  bool decode_enabled = true;
  double decode_seconds_per_token = 0.0;
  std::uint32_t answer_tokens = 32;
};

struct Calibration {
  double target_baseline_throughput = 23.96;
  double achieved_baseline_throughput = 0.0;
  double target_single_uplift = 0.145;
  double achieved_single_uplift = 0.0;
  // CPU generator speed relative to one GPU (peak fp32 ratio of the
  // reference hardware).
  double cpu_to_gpu_ratio = 0.131;
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  std::string notes;
};

struct PaperConfig {
  std::uint32_t version = 1;
  std::map<std::string, ModelProfile> models;
  TopologyRates rates;
  CostParams cost;  // cost.model is replaced per run
  WorkloadParams workload;
  SharedParams shared;
  SingleParams single;
  Calibration calibration;

  const ModelProfile& model(const std::string& id) const;
};

/// Built-in defaults: the four model profiles and uncalibrated rates.
PaperConfig default_config();

/// Defaults overlaid with every key present in the file.
PaperConfig load_config(const std::filesystem::path& path);
void save_config(const std::filesystem::path& path, const PaperConfig& cfg);

/// Shared-system run for `config` on `model_id`, from the shared section.
SimConfig make_shared_config(const PaperConfig& cfg, Configuration config, std::uint32_t k,
                             std::uint64_t seed);
/// Single-instance cell for `model_id`.
SimConfig make_single_config(const PaperConfig& cfg, const std::string& model_id,
                             std::uint32_t batch_size, bool cache_enabled);

std::vector<WorkItem> make_workload(const PaperConfig& cfg, std::uint32_t k, std::uint64_t seed);

void to_json(nlohmann::json& j, const ModelProfile& m);
void from_json(const nlohmann::json& j, ModelProfile& m);
void to_json(nlohmann::json& j, const DeviceProfile& d);
void from_json(const nlohmann::json& j, DeviceProfile& d);
void to_json(nlohmann::json& j, const CostParams& c);
void from_json(const nlohmann::json& j, CostParams& c);
void to_json(nlohmann::json& j, const SimConfig& c);
void to_json(nlohmann::json& j, const PaperConfig& c);
void from_json(const nlohmann::json& j, PaperConfig& c);

}  // namespace ragdcache
