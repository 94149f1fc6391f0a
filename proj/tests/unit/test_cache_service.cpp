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

#include <atomic>
#include <chrono>
#include <set>
#include <thread>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ragdcache/cache_service.hpp"

namespace {

using namespace ragdcache;
namespace fs = std::filesystem;

ModelProfile tiny() {
  ModelProfile m;
  m.model_id = "tiny";
  m.layers = 2;
  m.hidden_dim = 8;
  m.kv_heads = 2;
  m.head_dim = 4;
  return m;
}

class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override { dir_ = oracle::temp_dir("service"); }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

TEST_F(ServiceTest, GeneratesOnceThenHits) {
  KvStore store(dir_, 1 << 20);
  SharedCacheService svc(store);
  const KvKey k{tiny().hash(), {5}};
  int calls = 0;
  auto gen = [&] {
    ++calls;
    return synth_blob(tiny(), {5}, 3, 0);
  };
  EXPECT_EQ(svc.get_or_generate(k, gen).origin, FetchOrigin::kGenerated);
  EXPECT_EQ(svc.get_or_generate(k, gen).origin, FetchOrigin::kMemoryHit);
  store.set_memory_capacity(0);
  EXPECT_EQ(svc.get_or_generate(k, gen).origin, FetchOrigin::kDiskHit);
  EXPECT_EQ(calls, 1);
}

TEST_F(ServiceTest, ConcurrentCallersShareOneGeneration) {
  KvStore store(dir_, 1 << 20);
  SharedCacheService svc(store);
  const KvKey k{tiny().hash(), {8, 1}};
  std::atomic<int> calls{0};
  auto gen = [&] {
    ++calls;
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
    return synth_blob(tiny(), {8, 1}, 6, 3);
  };
  std::vector<BlobPtr> got(16);
  std::vector<std::thread> threads;
  for (int i = 0; i < 16; ++i) {
    threads.emplace_back([&, i] { got[i] = svc.get_or_generate(k, gen).blob; });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(calls.load(), 1);
  for (const auto& b : got) EXPECT_EQ(*b, *got[0]);
  EXPECT_EQ(svc.in_flight_count(), 0u);
}

TEST_F(ServiceTest, FailureReachesEveryWaiterAndReleasesKey) {
  KvStore store(dir_, 1 << 20);
  SharedCacheService svc(store);
  const KvKey k{tiny().hash(), {2}};
  std::atomic<int> calls{0};
  auto failing = [&]() -> KvBlob {
    ++calls;
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
    throw std::runtime_error("generator down");
  };
  std::atomic<int> failures{0};
  std::vector<std::thread> threads;
  for (int i = 0; i < 8; ++i) {
    threads.emplace_back([&] {
      try {
        svc.get_or_generate(k, failing);
      } catch (const std::runtime_error&) {
        ++failures;
      }
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(failures.load(), 8);
  EXPECT_FALSE(svc.in_flight(k));
  const auto ok = svc.get_or_generate(k, [] { return synth_blob(tiny(), {2}, 1, 0); });
  EXPECT_EQ(ok.origin, FetchOrigin::kGenerated);
}

TEST_F(ServiceTest, DistinctKeysDoNotBlockEachOther) {
  KvStore store(dir_, 1 << 20);
  SharedCacheService svc(store);
  std::atomic<int> calls{0};
  std::vector<std::thread> threads;
  for (int i = 0; i < 32; ++i) {
    threads.emplace_back([&, i] {
      const DocId d = static_cast<DocId>(i % 4);
      svc.get_or_generate(KvKey{tiny().hash(), {d}}, [&] {
        ++calls;
        return synth_blob(tiny(), {d}, 2, 0);
      });
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(calls.load(), 4);
}

}  // namespace
