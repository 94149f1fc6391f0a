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

#include "ragdcache/config.hpp"

#include <fstream>
#include <stdexcept>

namespace ragdcache {

using nlohmann::json;

namespace {

template <typename T>
void overlay(const json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

ModelProfile profile(std::string id, std::uint32_t layers, std::uint32_t hidden,
                     std::uint32_t heads, std::uint32_t head_dim) {
  ModelProfile m;
  m.model_id = std::move(id);
  m.layers = layers;
  m.hidden_dim = hidden;
  m.kv_heads = heads;
  m.head_dim = head_dim;
  m.elem_width = 2;
  return m;
}

}  // namespace

const ModelProfile& PaperConfig::model(const std::string& id) const {
  auto it = models.find(id);
  if (it == models.end()) throw std::invalid_argument("unknown model profile '" + id + "'");
  return it->second;
}

PaperConfig default_config() {
  PaperConfig c;
  for (auto m : {profile("opt-1.3b-like", 24, 2048, 32, 64),
                 profile("opt-2.7b-like", 32, 2560, 32, 80),
                 profile("opt-6.7b-like", 32, 4096, 32, 128),
                 profile("llama-1b-like", 16, 2048, 32, 64)}) {
    c.models.emplace(m.model_id, m);
  }
  c.rates = TopologyRates{1e10, 1e10, 1.31e9};
  c.cost.model = c.models.at("opt-1.3b-like");
  c.cost.disk_read_bw = 3.4e9;
  c.cost.disk_write_bw = 2.4e9;
  c.cost.disk_seek = 1e-4;
  c.cost.mem_bw = 12e9;
  c.cost.network_delay = 0.005;
  return c;
}

void to_json(json& j, const ModelProfile& m) {
  j = json{{"model_id", m.model_id},     {"layers", m.layers},     {"hidden_dim", m.hidden_dim},
           {"kv_heads", m.kv_heads},     {"head_dim", m.head_dim}, {"elem_width", m.elem_width}};
}

void from_json(const json& j, ModelProfile& m) {
  overlay(j, "model_id", m.model_id);
  overlay(j, "layers", m.layers);
  overlay(j, "hidden_dim", m.hidden_dim);
  overlay(j, "kv_heads", m.kv_heads);
  overlay(j, "head_dim", m.head_dim);
  overlay(j, "elem_width", m.elem_width);
}

void to_json(json& j, const DeviceProfile& d) {
  j = json{{"device_id", d.device_id},
           {"kind", to_string(d.kind)},
           {"compute_rate", d.compute_rate},
           {"concurrency", d.concurrency}};
}

void from_json(const json& j, DeviceProfile& d) {
  overlay(j, "device_id", d.device_id);
  if (j.contains("kind")) d.kind = device_kind_from_string(j.at("kind").get<std::string>());
  overlay(j, "compute_rate", d.compute_rate);
  overlay(j, "concurrency", d.concurrency);
}

void to_json(json& j, const CostParams& c) {
  j = json{{"model", c.model},
           {"disk_read_bw", c.disk_read_bw},
           {"disk_write_bw", c.disk_write_bw},
           {"disk_seek", c.disk_seek},
           {"mem_bw", c.mem_bw},
           {"network_delay", c.network_delay},
           {"decode_enabled", c.decode_enabled},
           {"decode_seconds_per_token", c.decode_seconds_per_token},
           {"answer_tokens", c.answer_tokens}};
}

void from_json(const json& j, CostParams& c) {
  overlay(j, "model", c.model);
  overlay(j, "disk_read_bw", c.disk_read_bw);
  overlay(j, "disk_write_bw", c.disk_write_bw);
  overlay(j, "disk_seek", c.disk_seek);
  overlay(j, "mem_bw", c.mem_bw);
  overlay(j, "network_delay", c.network_delay);
  overlay(j, "decode_enabled", c.decode_enabled);
  overlay(j, "decode_seconds_per_token", c.decode_seconds_per_token);
  overlay(j, "answer_tokens", c.answer_tokens);
}

void to_json(json& j, const SimConfig& c) {
  j = json{{"configuration", to_string(c.configuration)},
           {"devices", c.devices},
           {"cost", c.cost},
           {"threshold", c.threshold},
           {"arrival", {{"rate", c.arrival.rate}, {"process", to_string(c.arrival.process)}}},
           {"k", c.k},
           {"tries", c.tries},
           {"seed", c.seed},
           {"memory_capacity_bytes", c.memory_capacity_bytes},
           {"granularity", to_string(c.granularity)},
           {"batch_size", c.batch_size},
           {"cache_enabled", c.cache_enabled}};
}

void to_json(json& j, const PaperConfig& c) {
  json models = json::object();
  for (const auto& [id, m] : c.models) models[id] = m;
  json cost = c.cost;
  cost.erase("model");
  j = json{
      {"version", c.version},
      {"calibration",
       {{"target_baseline_throughput", c.calibration.target_baseline_throughput},
        {"achieved_baseline_throughput", c.calibration.achieved_baseline_throughput},
        {"target_single_uplift", c.calibration.target_single_uplift},
        {"achieved_single_uplift", c.calibration.achieved_single_uplift},
        {"cpu_to_gpu_ratio", c.calibration.cpu_to_gpu_ratio},
        {"seeds", c.calibration.seeds},
        {"notes", c.calibration.notes}}},
      {"models", models},
      {"devices",
       {{"gpu_rate", c.rates.gpu_rate},
        {"generator_gpu_rate", c.rates.generator_gpu_rate},
        {"cpu_rate", c.rates.cpu_rate}}},
      {"cost", cost},
      {"workload",
       {{"n_docs", c.workload.n_docs},
        {"n_queries", c.workload.n_queries},
        {"zipf_s", c.workload.zipf_s},
        {"coverage_target", c.workload.coverage_target},
        {"q_tokens", c.workload.q_tokens},
        {"doc_tokens", c.workload.doc_tokens},
        {"seed", c.workload.seed}}},
      {"shared",
       {{"model", c.shared.model},
        {"rate", c.shared.rate},
        {"process", to_string(c.shared.process)},
        {"threshold", c.shared.threshold},
        {"tries", c.shared.tries},
        {"k", c.shared.k},
        {"memory_capacity_bytes", c.shared.memory_capacity_bytes},
        {"granularity", to_string(c.shared.granularity)}}},
      {"single",
       {{"models", c.single.models},
        {"batch_sizes", c.single.batch_sizes},
        {"memory_capacity_bytes", c.single.memory_capacity_bytes},
        {"decode_enabled", c.single.decode_enabled},
        {"decode_seconds_per_token", c.single.decode_seconds_per_token},
        {"answer_tokens", c.single.answer_tokens}}},
  };
}

void from_json(const json& j, PaperConfig& c) {
  c = default_config();
  overlay(j, "version", c.version);
  if (j.contains("calibration")) {
    const json& k = j.at("calibration");
    overlay(k, "target_baseline_throughput", c.calibration.target_baseline_throughput);
    overlay(k, "achieved_baseline_throughput", c.calibration.achieved_baseline_throughput);
    overlay(k, "target_single_uplift", c.calibration.target_single_uplift);
    overlay(k, "achieved_single_uplift", c.calibration.achieved_single_uplift);
    overlay(k, "cpu_to_gpu_ratio", c.calibration.cpu_to_gpu_ratio);
    overlay(k, "seeds", c.calibration.seeds);
    overlay(k, "notes", c.calibration.notes);
  }
  if (j.contains("models")) {
    for (const auto& [id, mj] : j.at("models").items()) {
      ModelProfile m = c.models.contains(id) ? c.models.at(id) : ModelProfile{};
      from_json(mj, m);
      m.model_id = id;
      m.validate();
      c.models[id] = m;
    }
  }
  if (j.contains("devices")) {
    const json& d = j.at("devices");
    overlay(d, "gpu_rate", c.rates.gpu_rate);
    overlay(d, "generator_gpu_rate", c.rates.generator_gpu_rate);
    overlay(d, "cpu_rate", c.rates.cpu_rate);
  }
  if (j.contains("cost")) from_json(j.at("cost"), c.cost);
  if (j.contains("workload")) {
    const json& w = j.at("workload");
    overlay(w, "n_docs", c.workload.n_docs);
    overlay(w, "n_queries", c.workload.n_queries);
    overlay(w, "zipf_s", c.workload.zipf_s);
    overlay(w, "coverage_target", c.workload.coverage_target);
    overlay(w, "q_tokens", c.workload.q_tokens);
    overlay(w, "doc_tokens", c.workload.doc_tokens);
    overlay(w, "seed", c.workload.seed);
  }
  if (j.contains("shared")) {
    const json& s = j.at("shared");
    overlay(s, "model", c.shared.model);
    overlay(s, "rate", c.shared.rate);
    if (s.contains("process")) {
      c.shared.process = arrival_process_from_string(s.at("process").get<std::string>());
    }
    overlay(s, "threshold", c.shared.threshold);
    overlay(s, "tries", c.shared.tries);
    overlay(s, "k", c.shared.k);
    overlay(s, "memory_capacity_bytes", c.shared.memory_capacity_bytes);
    if (s.contains("granularity")) {
      c.shared.granularity = key_granularity_from_string(s.at("granularity").get<std::string>());
    }
  }
  if (j.contains("single")) {
    const json& s = j.at("single");
    overlay(s, "models", c.single.models);
    overlay(s, "batch_sizes", c.single.batch_sizes);
    overlay(s, "memory_capacity_bytes", c.single.memory_capacity_bytes);
    overlay(s, "decode_enabled", c.single.decode_enabled);
    overlay(s, "decode_seconds_per_token", c.single.decode_seconds_per_token);
    overlay(s, "answer_tokens", c.single.answer_tokens);
  }
  c.cost.model = c.model(c.shared.model);
}

PaperConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw std::runtime_error("config " + path.string() + ": " + e.what());
  }
  try {
    return j.get<PaperConfig>();
  } catch (const json::exception& e) {
    throw std::runtime_error("config " + path.string() + ": " + e.what());
  }
}

void save_config(const std::filesystem::path& path, const PaperConfig& cfg) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write config " + path.string());
  out << json(cfg).dump(2) << '\n';
}

SimConfig make_shared_config(const PaperConfig& cfg, Configuration config, std::uint32_t k,
                             std::uint64_t seed) {
  SimConfig s;
  s.configuration = config;
  s.devices = make_devices(config, cfg.rates);
  s.cost = cfg.cost;
  s.cost.model = cfg.model(cfg.shared.model);
  s.cost.decode_enabled = false;
  s.threshold = cfg.shared.threshold;
  s.arrival = ArrivalSpec{cfg.shared.rate, cfg.shared.process};
  s.k = k;
  s.tries = cfg.shared.tries;
  s.seed = seed;
  s.memory_capacity_bytes = cfg.shared.memory_capacity_bytes;
  s.granularity = cfg.shared.granularity;
  return s;
}

SimConfig make_single_config(const PaperConfig& cfg, const std::string& model_id,
                             std::uint32_t batch_size, bool cache_enabled) {
  SimConfig s;
  s.configuration = Configuration::kSingleInstance;
  s.devices = make_devices(Configuration::kSingleInstance, cfg.rates);
  s.cost = cfg.cost;
  s.cost.model = cfg.model(model_id);
  s.cost.decode_enabled = cfg.single.decode_enabled;
  s.cost.decode_seconds_per_token = cfg.single.decode_seconds_per_token;
  s.cost.answer_tokens = cfg.single.answer_tokens;
  s.k = 1;
  s.seed = cfg.workload.seed;
  s.memory_capacity_bytes = cfg.single.memory_capacity_bytes;
  s.granularity = KeyGranularity::kCombination;
  s.batch_size = batch_size;
  s.cache_enabled = cache_enabled;
  return s;
}

std::vector<WorkItem> make_workload(const PaperConfig& cfg, std::uint32_t k, std::uint64_t seed) {
  return zipf_stream(cfg.workload.n_docs, cfg.workload.zipf_s, cfg.workload.n_queries, seed, k,
                     TokenDefaults{cfg.workload.q_tokens, cfg.workload.doc_tokens});
}

}  // namespace ragdcache
