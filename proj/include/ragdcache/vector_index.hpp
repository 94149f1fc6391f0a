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

#include <cstdint>
#include <filesystem>
#include <shared_mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "ragdcache/kv_codec.hpp"

namespace ragdcache {

/// One entry of the KV-augmented vector store. The KV cache member of the
/// tuple is not held inline; it is resolved through KvStore by doc_id.
struct DocChunk {
  DocId doc_id = 0;
  std::string text;
  std::uint32_t token_count = 1;
  std::vector<float> embedding;
};

struct SearchHit {
  DocId doc_id = 0;
  float score = 0.0f;

  bool operator==(const SearchHit&) const = default;
};

class IndexError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exact inner-product index over a flat float matrix. Hits are ordered by
/// score descending, ties by ascending doc_id. Embeddings are used as given;
/// callers that want cosine similarity normalize first.
///
/// Thread-safety: any number of concurrent searches; add() takes the
/// exclusive side of the lock.
class FlatIndex {
 public:
  explicit FlatIndex(std::size_t dim);

  FlatIndex(FlatIndex&& other) noexcept;
  FlatIndex& operator=(FlatIndex&&) = delete;

  void add(DocChunk chunk);

  std::vector<SearchHit> search(std::span<const float> query, std::size_t k) const;
  /// Single-threaded scoring path, kept as the reference for search().
  std::vector<SearchHit> search_serial(std::span<const float> query, std::size_t k) const;

  std::size_t dim() const { return dim_; }
  std::size_t size() const;
  bool contains(DocId id) const;
  /// Copy of the chunk with this id; throws IndexError if absent.
  DocChunk chunk(DocId id) const;
  std::uint32_t token_count(DocId id) const;

  /// Single-file layout: a JSON manifest line, then count*dim little-endian
  /// float32 values, then count (u64 doc_id, u32 token_count) records, then
  /// count (u32 length, bytes) texts.
  void save(const std::filesystem::path& path) const;
  static FlatIndex load(const std::filesystem::path& path);

 private:
  std::vector<SearchHit> select_top_k(std::span<const float> scores, std::size_t k) const;
  void check_query(std::span<const float> query, std::size_t k) const;

  std::size_t dim_;
  mutable std::shared_mutex mu_;
  std::vector<float> rows_;
  std::vector<DocId> ids_;
  std::vector<std::uint32_t> tokens_;
  std::vector<std::string> texts_;
  std::unordered_map<DocId, std::size_t> slot_;
};

/// Reads a JSONL chunk file: one object per line with doc_id, token_count,
/// embedding (array of numbers) and optional text. Errors name the line.
std::vector<DocChunk> load_chunks_jsonl(const std::filesystem::path& path);

}  // namespace ragdcache
