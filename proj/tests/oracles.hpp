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

// Independent reference implementations and random generators shared by the
// unit and acceptance tests. Nothing here calls into the code under test
// except for plain data types.

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ragdcache/kv_codec.hpp"
#include "ragdcache/vector_index.hpp"

namespace oracle {

using ragdcache::Bytes;
using ragdcache::DocId;

/// Byte-by-byte FNV-1a 64 from the published constants.
inline std::uint64_t fnv1a(const std::uint8_t* p, std::size_t n) {
  std::uint64_t h = 14695981039346656037ULL;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

/// Blob layout written out field by field.
inline Bytes encode_blob(const ragdcache::KvBlob& b) {
  Bytes out;
  auto le = [&](std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
  };
  out.insert(out.end(), {'R', 'D', 'K', 'V'});
  le(b.header.version, 2);
  le(b.header.model_hash, 8);
  le(b.header.doc_ids.size(), 2);
  for (auto id : b.header.doc_ids) le(id, 8);
  le(b.header.token_count, 4);
  le(b.header.layers, 2);
  le(b.header.kv_heads, 2);
  le(b.header.head_dim, 2);
  le(b.header.elem_width, 1);
  le(0, 3);
  le(b.payload.size(), 8);
  le(fnv1a(b.payload.data(), b.payload.size()), 8);
  out.insert(out.end(), b.payload.begin(), b.payload.end());
  return out;
}

/// 2 * L * H * d_h * N * elem_width, in 128-bit arithmetic.
inline unsigned __int128 payload_bytes(std::uint64_t L, std::uint64_t H, std::uint64_t dh,
                                       std::uint64_t N, std::uint64_t ew) {
  return static_cast<unsigned __int128>(2) * L * H * dh * N * ew;
}

/// Reference LRU over a plain vector: front is most recent. Items bigger
/// than the capacity are skipped.
class RefLru {
 public:
  explicit RefLru(std::uint64_t capacity) : capacity_(capacity) {}

  /// Returns true on a hit. A miss inserts the key.
  bool access(int key, std::uint64_t bytes) {
    for (std::size_t i = 0; i < items_.size(); ++i) {
      if (items_[i].first == key) {
        auto item = items_[i];
        items_.erase(items_.begin() + static_cast<std::ptrdiff_t>(i));
        items_.insert(items_.begin(), item);
        return true;
      }
    }
    if (bytes > capacity_) return false;
    items_.insert(items_.begin(), {key, bytes});
    while (used() > capacity_) {
      items_.pop_back();
      ++evictions_;
    }
    return false;
  }

  std::vector<int> keys() const {
    std::vector<int> k;
    for (const auto& [key, bytes] : items_) k.push_back(key);
    return k;
  }
  std::uint64_t used() const {
    std::uint64_t u = 0;
    for (const auto& [key, bytes] : items_) u += bytes;
    return u;
  }
  std::uint64_t evictions() const { return evictions_; }

 private:
  std::uint64_t capacity_;
  std::vector<std::pair<int, std::uint64_t>> items_;
  std::uint64_t evictions_ = 0;
};

struct ScanHit {
  DocId id;
  float score;
};

/// Scores every row (float, index order), sorts all of them by score
/// descending then id ascending, keeps k.
inline std::vector<ScanHit> exhaustive_top_k(const std::vector<std::vector<float>>& rows,
                                             const std::vector<DocId>& ids,
                                             const std::vector<float>& query, std::size_t k) {
  std::vector<ScanHit> all;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    float s = 0.0f;
    for (std::size_t j = 0; j < query.size(); ++j) s += rows[r][j] * query[j];
    all.push_back({ids[r], s});
  }
  std::sort(all.begin(), all.end(), [](const ScanHit& a, const ScanHit& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
  });
  if (all.size() > k) all.resize(k);
  return all;
}

/// Fraction of the corpus, taking documents most-frequent first (ties by
/// id), needed before at least half of the queries are covered. Integer
/// arithmetic only.
inline double coverage_half(const std::vector<DocId>& top1, std::uint64_t corpus) {
  std::map<DocId, std::uint64_t> counts;
  for (auto d : top1) ++counts[d];
  std::vector<std::pair<std::uint64_t, DocId>> order;
  for (const auto& [d, c] : counts) order.push_back({c, d});
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  std::uint64_t cum = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    cum += order[i].first;
    if (2 * cum >= top1.size()) return static_cast<double>(i + 1) / static_cast<double>(corpus);
  }
  return static_cast<double>(order.size()) / static_cast<double>(corpus);
}

/// Small random model profile (elem width 2 or 4).
inline ragdcache::ModelProfile random_profile(std::mt19937_64& rng) {
  ragdcache::ModelProfile m;
  m.model_id = "m" + std::to_string(rng() % 1000);
  m.layers = 1 + static_cast<std::uint32_t>(rng() % 4);
  m.kv_heads = 1 + static_cast<std::uint32_t>(rng() % 4);
  m.head_dim = 1 + static_cast<std::uint32_t>(rng() % 8);
  m.hidden_dim = m.kv_heads * m.head_dim;
  m.elem_width = (rng() % 2) ? 2 : 4;
  return m;
}

inline ragdcache::DocIds random_doc_ids(std::mt19937_64& rng, std::size_t max_n = 4) {
  ragdcache::DocIds ids(1 + rng() % max_n);
  for (auto& id : ids) id = rng() % 100000;
  return ids;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& tag) {
  static std::uint64_t counter = 0;
  std::random_device rd;
  auto p = std::filesystem::temp_directory_path() /
           ("ragdcache-" + tag + "-" + std::to_string(rd()) + "-" + std::to_string(counter++));
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace oracle
