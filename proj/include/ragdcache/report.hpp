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

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ragdcache/sim.hpp"

namespace ragdcache {

/// Describes how an output was produced. Embedded in every report.
struct RunManifest {
  std::string tool_version;
  std::string command;
  std::uint64_t seed = 0;
  std::string input_hash;  // hex FNV-1a over the canonical inputs
  nlohmann::json config;
  std::vector<std::string> outputs;
};

void to_json(nlohmann::json& j, const RunManifest& m);
void to_json(nlohmann::json& j, const TryMetrics& m);
void to_json(nlohmann::json& j, const MetricsReport& m);
void to_json(nlohmann::json& j, const QueryRecord& r);
void to_json(nlohmann::json& j, const SingleInstanceCell& c);
void to_json(nlohmann::json& j, const SweepRow& r);

/// Hex content hash of a JSON value's compact dump.
std::string content_hash(const nlohmann::json& j);

/// {"manifest", "metrics", "records"}.
nlohmann::json report_json(const RunManifest& manifest, const SimResult& result);

/// Header plus one row per try and a final "all" row.
void write_aggregates_csv(std::ostream& os, const MetricsReport& m);
void write_single_csv(std::ostream& os, const std::vector<SingleInstanceCell>& cells);
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

}  // namespace ragdcache
