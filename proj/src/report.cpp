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

#include "ragdcache/report.hpp"

#include <ostream>

#include "ragdcache/bytes.hpp"

namespace ragdcache {

using nlohmann::json;

void to_json(json& j, const RunManifest& m) {
  j = json{{"tool_version", m.tool_version}, {"command", m.command},
           {"seed", m.seed},                 {"input_hash", m.input_hash},
           {"config", m.config},             {"outputs", m.outputs}};
}

void to_json(json& j, const TryMetrics& m) {
  j = json{{"try_index", m.try_index},
           {"completed", m.completed},
           {"makespan", m.makespan},
           {"throughput", m.throughput},
           {"mean_latency", m.mean_latency},
           {"median_latency", m.median_latency},
           {"p95_latency", m.p95_latency},
           {"ttft_mean", m.ttft_mean},
           {"mean_queue_wait", m.mean_queue_wait},
           {"mean_kv_load", m.mean_kv_load},
           {"mean_prefill", m.mean_prefill},
           {"lookups", m.lookups},
           {"memory_hits", m.memory_hits},
           {"disk_hits", m.disk_hits},
           {"generation_tasks", m.generation_tasks},
           {"memory_hit_ratio", m.memory_hit_ratio},
           {"disk_hit_ratio", m.disk_hit_ratio}};
}

void to_json(json& j, const MetricsReport& m) {
  j = json{{"overall", m.overall}, {"tries", m.tries}};
  j["overall"].erase("try_index");
}

void to_json(json& j, const QueryRecord& r) {
  json origins = json::array();
  for (auto o : r.origins) origins.push_back(to_string(o));
  j = json{{"query_id", r.query_id},   {"try_index", r.try_index},
           {"instance", r.instance},   {"arrival", r.arrival},
           {"dispatch", r.dispatch},   {"first_token", r.first_token},
           {"queue_wait", r.queue_wait}, {"kv_load", r.kv_load},
           {"prefill", r.prefill},     {"network", r.network},
           {"origins", origins}};
}

void to_json(json& j, const SingleInstanceCell& c) {
  j = json{{"model_id", c.model_id},
           {"batch_size", c.batch_size},
           {"cache_enabled", c.cache_enabled},
           {"queries", c.queries},
           {"total_time", c.total_time},
           {"throughput", c.throughput},
           {"ttft_mean", c.ttft_mean},
           {"kv_load_mean", c.kv_load_mean},
           {"prefill_mean", c.prefill_mean},
           {"decode_per_batch", c.decode_per_batch},
           {"memory_hits", c.memory_hits},
           {"disk_hits", c.disk_hits},
           {"misses", c.misses},
           {"hit_path_queries", c.hit_path_queries},
           {"hit_path_faster", c.hit_path_faster}};
}

void to_json(json& j, const SweepRow& r) {
  j = json{{"rate", r.rate},
           {"throughput", r.throughput},
           {"mean_latency", r.mean_latency},
           {"mean_queue_wait", r.mean_queue_wait},
           {"mean_processing", r.mean_processing},
           {"mean_network", r.mean_network},
           {"queue_share", r.queue_share},
           {"processing_share", r.processing_share},
           {"network_share", r.network_share}};
}

std::string content_hash(const json& j) { return to_hex16(fnv1a64(j.dump())); }

json report_json(const RunManifest& manifest, const SimResult& result) {
  return json{{"manifest", manifest}, {"metrics", result.metrics}, {"records", result.records}};
}

namespace {

void csv_row(std::ostream& os, const std::string& label, const TryMetrics& m) {
  os << label << ',' << m.completed << ',' << m.makespan << ',' << m.throughput << ','
     << m.mean_latency << ',' << m.median_latency << ',' << m.p95_latency << ',' << m.ttft_mean
     << ',' << m.mean_queue_wait << ',' << m.mean_kv_load << ',' << m.mean_prefill << ','
     << m.memory_hit_ratio << ',' << m.disk_hit_ratio << ',' << m.generation_tasks << '\n';
}

}  // namespace

void write_aggregates_csv(std::ostream& os, const MetricsReport& m) {
  os.precision(10);
  os << "try,completed,makespan,throughput,mean_latency,median_latency,p95_latency,ttft_mean,"
        "mean_queue_wait,mean_kv_load,mean_prefill,memory_hit_ratio,disk_hit_ratio,"
        "generation_tasks\n";
  for (const auto& t : m.tries) csv_row(os, std::to_string(t.try_index + 1), t);
  csv_row(os, "all", m.overall);
}

void write_single_csv(std::ostream& os, const std::vector<SingleInstanceCell>& cells) {
  os.precision(10);
  os << "model,batch_size,cache_enabled,queries,total_time,throughput,ttft_mean,kv_load_mean,"
        "prefill_mean,memory_hits,disk_hits,misses\n";
  for (const auto& c : cells) {
    os << c.model_id << ',' << c.batch_size << ',' << (c.cache_enabled ? 1 : 0) << ','
       << c.queries << ',' << c.total_time << ',' << c.throughput << ',' << c.ttft_mean << ','
       << c.kv_load_mean << ',' << c.prefill_mean << ',' << c.memory_hits << ',' << c.disk_hits
       << ',' << c.misses << '\n';
  }
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os.precision(10);
  os << "rate,throughput,mean_latency,mean_queue_wait,mean_processing,mean_network,queue_share,"
        "processing_share,network_share\n";
  for (const auto& r : rows) {
    os << r.rate << ',' << r.throughput << ',' << r.mean_latency << ',' << r.mean_queue_wait << ','
       << r.mean_processing << ',' << r.mean_network << ',' << r.queue_share << ','
       << r.processing_share << ',' << r.network_share << '\n';
  }
}

}  // namespace ragdcache
