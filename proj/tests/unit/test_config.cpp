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

#include <fstream>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ragdcache/config.hpp"

namespace {

using namespace ragdcache;
namespace fs = std::filesystem;

TEST(Config, RoundTripThroughJson) {
  PaperConfig c = default_config();
  c.workload.zipf_s = 0.77;
  c.shared.granularity = KeyGranularity::kPerDocument;
  c.shared.process = ArrivalProcess::kUniform;
  c.single.batch_sizes = {1, 3};
  c.calibration.seeds = {9};
  c.rates.cpu_rate = 123.0;
  const nlohmann::json j = c;
  const PaperConfig back = j.get<PaperConfig>();
  EXPECT_EQ(nlohmann::json(back), j);
}

TEST(Config, OverlayKeepsUnlistedDefaults) {
  const fs::path dir = oracle::temp_dir("config");
  const fs::path path = dir / "c.json";
  std::ofstream(path) << R"({"workload": {"zipf_s": 1.5}, "shared": {"k": 2},
                             "models": {"toy": {"layers": 1, "hidden_dim": 8, "kv_heads": 2, "head_dim": 4}}})";
  const PaperConfig c = load_config(path);
  const PaperConfig d = default_config();
  EXPECT_EQ(c.workload.zipf_s, 1.5);
  EXPECT_EQ(c.shared.k, 2u);
  EXPECT_EQ(c.workload.n_docs, d.workload.n_docs);
  EXPECT_EQ(c.model("toy").layers, 1u);
  EXPECT_EQ(c.model("toy").model_id, "toy");
  EXPECT_EQ(c.models.size(), d.models.size() + 1);
  fs::remove_all(dir);
}

TEST(Config, BadFilesRejected) {
  const fs::path dir = oracle::temp_dir("config");
  EXPECT_THROW(load_config(dir / "missing.json"), std::runtime_error);
  std::ofstream(dir / "bad.json") << "{ not json";
  EXPECT_THROW(load_config(dir / "bad.json"), std::runtime_error);
  std::ofstream(dir / "type.json") << R"({"workload": {"n_docs": "many"}})";
  EXPECT_THROW(load_config(dir / "type.json"), std::runtime_error);
  fs::remove_all(dir);
}

TEST(Config, ShippedConfigLoadsAndBuildsValidRuns) {
  const PaperConfig c = load_config(RAGDCACHE_PAPER_CONFIG);
  for (auto cfg : {Configuration::kBaseline, Configuration::kA, Configuration::kB}) {
    EXPECT_NO_THROW(make_shared_config(c, cfg, 1, 1).validate());
  }
  for (const auto& m : c.single.models) {
    EXPECT_NO_THROW(make_single_config(c, m, 32, true).validate());
  }
  EXPECT_GT(c.single.decode_seconds_per_token, 0.0);
}

}  // namespace
