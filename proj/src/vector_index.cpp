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

#include "ragdcache/vector_index.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>
#include <numeric>

#include <nlohmann/json.hpp>

#include "ragdcache/bytes.hpp"
#include "ragdcache/kernels.hpp"

namespace ragdcache {

using json = nlohmann::json;

FlatIndex::FlatIndex(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw IndexError("index dimension must be positive");
}

FlatIndex::FlatIndex(FlatIndex&& other) noexcept
    : dim_(other.dim_),
      rows_(std::move(other.rows_)),
      ids_(std::move(other.ids_)),
      tokens_(std::move(other.tokens_)),
      texts_(std::move(other.texts_)),
      slot_(std::move(other.slot_)) {}

void FlatIndex::add(DocChunk chunk) {
  if (chunk.embedding.size() != dim_) {
    throw IndexError("embedding dimension " + std::to_string(chunk.embedding.size()) +
                     " does not match index dimension " + std::to_string(dim_));
  }
  if (chunk.token_count == 0) throw IndexError("chunk token_count must be positive");
  std::unique_lock lock(mu_);
  if (slot_.contains(chunk.doc_id)) {
    throw IndexError("duplicate doc_id " + std::to_string(chunk.doc_id));
  }
  slot_.emplace(chunk.doc_id, ids_.size());
  rows_.insert(rows_.end(), chunk.embedding.begin(), chunk.embedding.end());
  ids_.push_back(chunk.doc_id);
  tokens_.push_back(chunk.token_count);
  texts_.push_back(std::move(chunk.text));
}

std::size_t FlatIndex::size() const {
  std::shared_lock lock(mu_);
  return ids_.size();
}

bool FlatIndex::contains(DocId id) const {
  std::shared_lock lock(mu_);
  return slot_.contains(id);
}

DocChunk FlatIndex::chunk(DocId id) const {
  std::shared_lock lock(mu_);
  auto it = slot_.find(id);
  if (it == slot_.end()) throw IndexError("unknown doc_id " + std::to_string(id));
  const std::size_t i = it->second;
  DocChunk c;
  c.doc_id = id;
  c.text = texts_[i];
  c.token_count = tokens_[i];
  c.embedding.assign(rows_.begin() + static_cast<std::ptrdiff_t>(i * dim_),
                     rows_.begin() + static_cast<std::ptrdiff_t>((i + 1) * dim_));
  return c;
}

std::uint32_t FlatIndex::token_count(DocId id) const {
  std::shared_lock lock(mu_);
  auto it = slot_.find(id);
  if (it == slot_.end()) throw IndexError("unknown doc_id " + std::to_string(id));
  return tokens_[it->second];
}

void FlatIndex::check_query(std::span<const float> query, std::size_t k) const {
  if (query.size() != dim_) {
    throw IndexError("query dimension " + std::to_string(query.size()) +
                     " does not match index dimension " + std::to_string(dim_));
  }
  if (k == 0) throw IndexError("k must be at least 1");
}

std::vector<SearchHit> FlatIndex::select_top_k(std::span<const float> scores,
                                               std::size_t k) const {
  std::vector<std::size_t> order(ids_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  k = std::min(k, order.size());
  auto better = [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return ids_[a] < ids_[b];
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    better);
  std::vector<SearchHit> hits;
  hits.reserve(k);
  for (std::size_t i = 0; i < k; ++i) hits.push_back({ids_[order[i]], scores[order[i]]});
  return hits;
}

std::vector<SearchHit> FlatIndex::search(std::span<const float> query, std::size_t k) const {
  check_query(query, k);
  std::shared_lock lock(mu_);
  std::vector<float> scores(ids_.size());
  kernels::inner_products_omp(rows_, query, scores);
  return select_top_k(scores, k);
}

std::vector<SearchHit> FlatIndex::search_serial(std::span<const float> query,
                                                std::size_t k) const {
  check_query(query, k);
  std::shared_lock lock(mu_);
  std::vector<float> scores(ids_.size());
  kernels::inner_products_serial(rows_, query, scores);
  return select_top_k(scores, k);
}

void FlatIndex::save(const std::filesystem::path& path) const {
  std::shared_lock lock(mu_);
  Bytes body;
  ByteWriter w(body);
  for (float f : rows_) w.f32(f);
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    w.u64(ids_[i]);
    w.u32(tokens_[i]);
  }
  for (const auto& t : texts_) {
    w.u32(static_cast<std::uint32_t>(t.size()));
    w.raw(ByteSpan(reinterpret_cast<const std::uint8_t*>(t.data()), t.size()));
  }
  json manifest = {{"format", "rdvx"}, {"version", 1}, {"dim", dim_}, {"count", ids_.size()},
                   {"body_bytes", body.size()}};
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IndexError("cannot write index file " + tmp);
    out << manifest.dump() << '\n';
    out.write(reinterpret_cast<const char*>(body.data()), static_cast<std::streamsize>(body.size()));
    if (!out) throw IndexError("short write to index file " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

FlatIndex FlatIndex::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IndexError("cannot open index file " + path.string());
  std::string line;
  std::getline(in, line);
  json manifest;
  try {
    manifest = json::parse(line);
  } catch (const json::exception& e) {
    throw IndexError("index manifest is not JSON: " + std::string(e.what()));
  }
  if (manifest.value("format", "") != "rdvx" || manifest.value("version", 0) != 1) {
    throw IndexError("unrecognised index file format");
  }
  const auto dim = manifest.at("dim").get<std::size_t>();
  const auto count = manifest.at("count").get<std::size_t>();
  const auto body_bytes = manifest.at("body_bytes").get<std::size_t>();
  Bytes body(body_bytes);
  in.read(reinterpret_cast<char*>(body.data()), static_cast<std::streamsize>(body_bytes));
  if (static_cast<std::size_t>(in.gcount()) != body_bytes) {
    throw IndexError("index file truncated");
  }
  ByteReader r(body);
  FlatIndex index(dim);
  std::vector<DocChunk> chunks(count);
  for (auto& c : chunks) {
    c.embedding.resize(dim);
    for (auto& f : c.embedding) f = r.f32();
  }
  for (auto& c : chunks) {
    c.doc_id = r.u64();
    c.token_count = r.u32();
  }
  for (auto& c : chunks) {
    const std::uint32_t len = r.u32();
    ByteSpan t = r.raw(len);
    c.text.assign(t.begin(), t.end());
  }
  if (!r.ok() || r.remaining() != 0) throw IndexError("index body is malformed");
  for (auto& c : chunks) index.add(std::move(c));
  return index;
}

std::vector<DocChunk> load_chunks_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IndexError("cannot open chunk file " + path.string());
  std::vector<DocChunk> chunks;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto fail = [&](const std::string& what) {
      return IndexError(path.string() + ":" + std::to_string(line_no) + ": " + what);
    };
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::exception&) {
      throw fail("not valid JSON");
    }
    if (!obj.is_object()) throw fail("expected an object");
    DocChunk c;
    try {
      if (!obj.contains("doc_id")) throw fail("missing field doc_id");
      c.doc_id = obj.at("doc_id").get<DocId>();
      if (!obj.contains("token_count")) throw fail("missing field token_count");
      c.token_count = obj.at("token_count").get<std::uint32_t>();
      if (!obj.contains("embedding") || !obj.at("embedding").is_array()) {
        throw fail("missing or non-array field embedding");
      }
      c.embedding = obj.at("embedding").get<std::vector<float>>();
      if (obj.contains("text")) c.text = obj.at("text").get<std::string>();
    } catch (const json::exception& e) {
      throw fail(std::string("bad field type: ") + e.what());
    }
    if (c.token_count == 0) throw fail("field token_count must be positive");
    chunks.push_back(std::move(c));
  }
  return chunks;
}

}  // namespace ragdcache
