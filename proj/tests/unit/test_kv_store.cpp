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
#include <random>
#include <thread>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ragdcache/kv_store.hpp"

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

KvKey key_for(const DocIds& ids) { return KvKey{tiny().hash(), ids}; }
KvBlob blob_for(const DocIds& ids, std::uint32_t tokens = 4) {
  return synth_blob(tiny(), ids, tokens, 1);
}

class KvStoreTest : public ::testing::Test {
 protected:
  void SetUp() override { dir_ = oracle::temp_dir("store"); }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

TEST_F(KvStoreTest, MissThenDiskThenMemory) {
  KvStore store(dir_, 0);
  const KvKey k = key_for({1});
  EXPECT_EQ(store.get(k).outcome, LookupOutcome::kMiss);
  EXPECT_EQ(store.put(k, blob_for({1})), PutOutcome::kWritten);
  EXPECT_EQ(store.contains(k), Residency::kOnDisk);  // capacity 0 keeps nothing in memory
  const auto r = store.get(k);
  EXPECT_EQ(r.outcome, LookupOutcome::kDiskHit);
  EXPECT_EQ(r.load_cost_bytes, encode(blob_for({1})).size());
  EXPECT_EQ(*r.blob, blob_for({1}));

  store.set_memory_capacity(1 << 20);
  EXPECT_EQ(store.get(k).outcome, LookupOutcome::kDiskHit);
  EXPECT_EQ(store.get(k).outcome, LookupOutcome::kMemoryHit);
  const auto s = store.stats();
  EXPECT_EQ(s.misses, 1u);
  EXPECT_EQ(s.disk_hits, 2u);
  EXPECT_EQ(s.memory_hits, 1u);
}

TEST_F(KvStoreTest, PutIsIdempotentAndImmutable) {
  KvStore store(dir_, 1 << 20);
  const KvKey k = key_for({1, 2});
  EXPECT_EQ(store.put(k, blob_for({1, 2})), PutOutcome::kWritten);
  EXPECT_EQ(store.put(k, blob_for({1, 2})), PutOutcome::kAlreadyPresent);
  try {
    store.put(k, blob_for({1, 2}, 5));
    FAIL() << "expected kImmutable";
  } catch (const StoreError& e) {
    EXPECT_EQ(e.kind(), StoreErrorKind::kImmutable);
  }
}

TEST_F(KvStoreTest, KeyMustMatchHeader) {
  KvStore store(dir_);
  try {
    store.put(key_for({2, 1}), blob_for({1, 2}));
    FAIL() << "expected kKeyMismatch";
  } catch (const StoreError& e) {
    EXPECT_EQ(e.kind(), StoreErrorKind::kKeyMismatch);
  }
  KvBlob bad = blob_for({3});
  bad.payload[0] ^= 1;
  try {
    store.put(key_for({3}), bad);
    FAIL() << "expected kInvalidBlob";
  } catch (const StoreError& e) {
    EXPECT_EQ(e.kind(), StoreErrorKind::kInvalidBlob);
  }
}

TEST_F(KvStoreTest, SurvivesReopen) {
  {
    KvStore store(dir_, 1 << 20);
    for (DocId i = 0; i < 5; ++i) store.put(key_for({i}), blob_for({i}));
  }
  KvStore again(dir_, 1 << 20);
  EXPECT_EQ(again.disk_keys().size(), 5u);
  EXPECT_EQ(again.get(key_for({3})).outcome, LookupOutcome::kDiskHit);
  EXPECT_EQ(*again.get(key_for({3})).blob, blob_for({3}));
}

TEST_F(KvStoreTest, TornManifestLineIsSkipped) {
  {
    KvStore store(dir_);
    store.put(key_for({1}), blob_for({1}));
  }
  {
    std::ofstream m(dir_ / "manifest.jsonl", std::ios::app);
    m << R"({"model_hash": "00)";
  }
  KvStore again(dir_);
  EXPECT_EQ(again.contains(key_for({1})), Residency::kOnDisk);
}

TEST_F(KvStoreTest, CorruptFileIsQuarantined) {
  const KvKey k = key_for({9});
  {
    KvStore store(dir_);
    store.put(k, blob_for({9}));
    const fs::path p = store.path_for(k);
    std::fstream f(p, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(-1, std::ios::end);
    f.put('\x5a');
  }
  KvStore store(dir_);
  try {
    store.get(k);
    FAIL() << "expected kCorrupt";
  } catch (const StoreError& e) {
    EXPECT_EQ(e.kind(), StoreErrorKind::kCorrupt);
  }
  EXPECT_EQ(store.contains(k), Residency::kAbsent);
  EXPECT_EQ(store.stats().corrupt, 1u);
  EXPECT_TRUE(fs::exists(fs::path(store.path_for(k)).concat(".corrupt")));
  // Re-putting after quarantine works.
  EXPECT_EQ(store.put(k, blob_for({9})), PutOutcome::kWritten);
  EXPECT_EQ(store.get(k).outcome, LookupOutcome::kDiskHit);
}

TEST_F(KvStoreTest, MemoryTierFollowsReferenceLru) {
  // Memory tier bookkeeping checked against the reference LRU with blob
  // sizes as weights.
  std::mt19937_64 rng(23);
  std::vector<KvBlob> blobs;
  for (DocId i = 0; i < 24; ++i) blobs.push_back(blob_for({i}, 1 + static_cast<std::uint32_t>(rng() % 8)));
  const std::uint64_t cap = 1200;
  KvStore store(dir_, cap);
  for (DocId i = 0; i < 24; ++i) store.put(key_for({i}), blobs[i]);
  store.set_memory_capacity(0);
  store.set_memory_capacity(cap);
  oracle::RefLru ref(cap);
  for (int step = 0; step < 500; ++step) {
    const auto i = static_cast<DocId>(rng() % 24);
    const bool ref_hit = ref.access(static_cast<int>(i), blobs[i].encoded_size());
    const auto r = store.get(key_for({i}));
    ASSERT_EQ(r.outcome == LookupOutcome::kMemoryHit, ref_hit) << step;
    std::vector<int> got;
    for (const auto& k : store.memory_keys()) got.push_back(static_cast<int>(k.doc_ids[0]));
    ASSERT_EQ(got, ref.keys()) << step;
  }
}

TEST_F(KvStoreTest, ConcurrentReadersAndWriters) {
  KvStore store(dir_, 4096);
  std::vector<std::thread> threads;
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&store, t] {
      for (DocId i = 0; i < 40; ++i) {
        const DocId id = (i * 7 + static_cast<DocId>(t)) % 40;
        store.put(key_for({id}), blob_for({id}));
        const auto r = store.get(key_for({id}));
        ASSERT_NE(r.outcome, LookupOutcome::kMiss);
        ASSERT_EQ(r.blob->header.doc_ids, DocIds{id});
      }
    });
  }
  for (auto& th : threads) th.join();
  EXPECT_EQ(store.disk_keys().size(), 40u);
}

TEST(KvKey, OrderMattersAndPathsDiffer) {
  const KvKey a = key_for({1, 2});
  const KvKey b = key_for({2, 1});
  EXPECT_NE(a, b);
  EXPECT_NE(a.doc_hash(), b.doc_hash());
}

}  // namespace
