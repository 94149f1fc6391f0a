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

#include "ragdcache/kv_store.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace ragdcache {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::uint64_t KvKey::doc_hash() const {
  Bytes buf;
  ByteWriter w(buf);
  for (DocId id : doc_ids) w.u64(id);
  return fnv1a64(buf);
}

std::string KvKey::to_string() const {
  std::ostringstream os;
  os << to_hex16(model_hash) << ":[";
  for (std::size_t i = 0; i < doc_ids.size(); ++i) os << (i ? "," : "") << doc_ids[i];
  os << "]";
  return os.str();
}

std::size_t KvKeyHash::operator()(const KvKey& k) const noexcept {
  return static_cast<std::size_t>(splitmix64(k.model_hash ^ k.doc_hash()));
}

const char* to_string(LookupOutcome o) {
  switch (o) {
    case LookupOutcome::kMemoryHit: return "MemoryHit";
    case LookupOutcome::kDiskHit: return "DiskHit";
    case LookupOutcome::kMiss: return "Miss";
  }
  return "?";
}

const char* to_string(Residency r) {
  switch (r) {
    case Residency::kInMemory: return "InMemory";
    case Residency::kOnDisk: return "OnDisk";
    case Residency::kAbsent: return "Absent";
  }
  return "?";
}

void to_json(json& j, const StoreStats& s) {
  j = json{{"memory_hits", s.memory_hits},
           {"disk_hits", s.disk_hits},
           {"misses", s.misses},
           {"evictions", s.evictions},
           {"corrupt", s.corrupt},
           {"memory_bytes_used", s.memory_bytes_used},
           {"memory_capacity_bytes", s.memory_capacity_bytes},
           {"disk_bytes_used", s.disk_bytes_used},
           {"memory_entries", s.memory_entries},
           {"disk_entries", s.disk_entries}};
}

void from_json(const json& j, StoreStats& s) {
  j.at("memory_hits").get_to(s.memory_hits);
  j.at("disk_hits").get_to(s.disk_hits);
  j.at("misses").get_to(s.misses);
  j.at("evictions").get_to(s.evictions);
  j.at("corrupt").get_to(s.corrupt);
  j.at("memory_bytes_used").get_to(s.memory_bytes_used);
  j.at("memory_capacity_bytes").get_to(s.memory_capacity_bytes);
  j.at("disk_bytes_used").get_to(s.disk_bytes_used);
  j.at("memory_entries").get_to(s.memory_entries);
  j.at("disk_entries").get_to(s.disk_entries);
}

namespace {

Bytes read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StoreError(StoreErrorKind::kIo, "cannot open " + path.string());
  in.seekg(0, std::ios::end);
  const auto size = static_cast<std::size_t>(in.tellg());
  in.seekg(0);
  Bytes data(size);
  in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(size));
  if (static_cast<std::size_t>(in.gcount()) != size) {
    throw StoreError(StoreErrorKind::kIo, "short read from " + path.string());
  }
  return data;
}

void write_atomically(const fs::path& path, const Bytes& data) {
  static std::atomic<std::uint64_t> counter{0};
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  if (ec) {
    throw StoreError(StoreErrorKind::kIo,
                     "cannot create " + path.parent_path().string() + ": " + ec.message());
  }
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(counter.fetch_add(1));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    out.flush();
    if (!out) {
      fs::remove(tmp, ec);
      throw StoreError(StoreErrorKind::kIo, "write failed for " + tmp.string());
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw StoreError(StoreErrorKind::kIo, "rename failed for " + path.string() + ": " + ec.message());
  }
}

void check_blob_matches(const KvKey& key, const KvBlob& blob) {
  if (blob.header.model_hash != key.model_hash || blob.header.doc_ids != key.doc_ids) {
    throw StoreError(StoreErrorKind::kKeyMismatch,
                     "blob header does not match key " + key.to_string());
  }
  if (key.doc_ids.empty()) throw StoreError(StoreErrorKind::kKeyMismatch, "key has no doc ids");
  if (blob.payload.size() != blob.header.payload_len ||
      payload_checksum(blob.payload) != blob.header.checksum) {
    throw StoreError(StoreErrorKind::kInvalidBlob,
                     "blob payload inconsistent with its header for " + key.to_string());
  }
}

}  // namespace

KvStore::KvStore(fs::path root, std::uint64_t memory_capacity_bytes)
    : root_(std::move(root)), memory_(memory_capacity_bytes) {
  std::error_code ec;
  fs::create_directories(root_, ec);
  if (ec) throw StoreError(StoreErrorKind::kIo, "cannot create store root " + root_.string());
  stats_.memory_capacity_bytes = memory_capacity_bytes;
  load_manifest();
}

fs::path KvStore::path_for(const KvKey& key) const {
  return root_ / to_hex16(key.model_hash) / (to_hex16(key.doc_hash()) + ".rdkv");
}

void KvStore::load_manifest() {
  std::ifstream in(root_ / "manifest.jsonl");
  if (!in) return;
  std::string line;
  while (std::getline(in, line)) {
    json rec = json::parse(line, nullptr, /*allow_exceptions=*/false);
    // A torn final line from a crash is skipped.
    if (rec.is_discarded() || !rec.is_object()) continue;
    KvKey key;
    key.model_hash = std::stoull(rec.value("model_hash", "0"), nullptr, 16);
    key.doc_ids = rec.value("doc_ids", DocIds{});
    const fs::path path = root_ / rec.value("file", "");
    std::error_code ec;
    if (key.doc_ids.empty() || !fs::is_regular_file(path, ec)) continue;
    if (disk_.contains(key)) continue;
    DiskEntry e{path, fs::file_size(path, ec), rec.value("checksum", std::uint64_t{0})};
    stats_.disk_bytes_used += e.bytes;
    path_owner_.emplace(path, key);
    disk_.emplace(std::move(key), std::move(e));
  }
  stats_.disk_entries = disk_.size();
}

void KvStore::admit_locked(const KvKey& key, BlobPtr blob) {
  const std::uint64_t bytes = blob->encoded_size();
  auto evicted = memory_.insert(key, std::move(blob), bytes);
  stats_.evictions += evicted.size();
  stats_.memory_bytes_used = memory_.used_bytes();
  stats_.memory_entries = memory_.size();
}

PutOutcome KvStore::put(const KvKey& key, const KvBlob& blob) {
  return put(key, std::make_shared<const KvBlob>(blob));
}

PutOutcome KvStore::put(const KvKey& key, BlobPtr blob) {
  check_blob_matches(key, *blob);
  std::lock_guard write_lock(write_mu_);
  const fs::path path = path_for(key);
  {
    std::lock_guard lock(mu_);
    if (auto it = disk_.find(key); it != disk_.end()) {
      if (it->second.checksum != blob->header.checksum ||
          it->second.bytes != blob->encoded_size()) {
        throw StoreError(StoreErrorKind::kImmutable,
                         "entry " + key.to_string() + " already stored with different content");
      }
      admit_locked(key, std::move(blob));
      return PutOutcome::kAlreadyPresent;
    }
    if (auto it = path_owner_.find(path); it != path_owner_.end() && it->second != key) {
      throw StoreError(StoreErrorKind::kCollision,
                       "file name collision between " + key.to_string() + " and " +
                           it->second.to_string());
    }
  }

  const Bytes encoded = encode(*blob);
  try {
    write_atomically(path, encoded);
  } catch (const StoreError& e) {
    throw StoreError(StoreErrorKind::kIo, std::string("put ") + key.to_string() + ": " + e.what());
  }

  json rec = {{"model_hash", to_hex16(key.model_hash)},
              {"doc_ids", key.doc_ids},
              {"file", fs::relative(path, root_).generic_string()},
              {"bytes", encoded.size()},
              {"checksum", blob->header.checksum}};
  {
    std::ofstream manifest(root_ / "manifest.jsonl", std::ios::app);
    manifest << rec.dump() << '\n';
    if (!manifest) {
      throw StoreError(StoreErrorKind::kIo, "cannot append to " + (root_ / "manifest.jsonl").string());
    }
  }

  std::lock_guard lock(mu_);
  disk_.emplace(key, DiskEntry{path, encoded.size(), blob->header.checksum});
  path_owner_.emplace(path, key);
  stats_.disk_bytes_used += encoded.size();
  stats_.disk_entries = disk_.size();
  admit_locked(key, std::move(blob));
  return PutOutcome::kWritten;
}

void KvStore::quarantine_locked(const KvKey& key) {
  auto it = disk_.find(key);
  if (it == disk_.end()) return;
  std::error_code ec;
  fs::path quarantined = it->second.path;
  quarantined += ".corrupt";
  fs::rename(it->second.path, quarantined, ec);
  stats_.disk_bytes_used -= it->second.bytes;
  path_owner_.erase(it->second.path);
  disk_.erase(it);
  stats_.disk_entries = disk_.size();
}

LookupResult KvStore::get(const KvKey& key) {
  fs::path path;
  {
    std::lock_guard lock(mu_);
    if (BlobPtr* hit = memory_.touch(key)) {
      ++stats_.memory_hits;
      return LookupResult{LookupOutcome::kMemoryHit, *hit, 0};
    }
    auto it = disk_.find(key);
    if (it == disk_.end()) {
      ++stats_.misses;
      return LookupResult{};
    }
    path = it->second.path;
  }

  BlobPtr blob;
  std::uint64_t file_bytes = 0;
  std::string failure;
  try {
    Bytes data = read_file(path);
    file_bytes = data.size();
    auto decoded = std::make_shared<KvBlob>(decode(data));
    if (key_of(decoded->header) != key) {
      throw CodecError(CodecErrorKind::kMalformed, "file header names a different key");
    }
    blob = std::move(decoded);
  } catch (const CodecError& e) {
    failure = std::string(to_string(e.kind())) + ": " + e.what();
  } catch (const StoreError& e) {
    failure = e.what();
  }

  std::lock_guard lock(mu_);
  if (!blob) {
    ++stats_.corrupt;
    ++stats_.misses;
    quarantine_locked(key);
    throw StoreError(StoreErrorKind::kCorrupt,
                     "corrupt entry " + key.to_string() + " at " + path.string() + " (" + failure + ")");
  }
  ++stats_.disk_hits;
  admit_locked(key, blob);
  return LookupResult{LookupOutcome::kDiskHit, std::move(blob), file_bytes};
}

Residency KvStore::contains(const KvKey& key) const {
  std::lock_guard lock(mu_);
  if (memory_.contains(key)) return Residency::kInMemory;
  if (disk_.contains(key)) return Residency::kOnDisk;
  return Residency::kAbsent;
}

StoreStats KvStore::stats() const {
  std::lock_guard lock(mu_);
  return stats_;
}

void KvStore::set_memory_capacity(std::uint64_t bytes) {
  std::lock_guard lock(mu_);
  auto evicted = memory_.set_capacity(bytes);
  stats_.evictions += evicted.size();
  stats_.memory_capacity_bytes = bytes;
  stats_.memory_bytes_used = memory_.used_bytes();
  stats_.memory_entries = memory_.size();
}

std::vector<KvKey> KvStore::memory_keys() const {
  std::lock_guard lock(mu_);
  return memory_.keys_mru_first();
}

std::vector<KvKey> KvStore::disk_keys() const {
  std::lock_guard lock(mu_);
  std::vector<KvKey> keys;
  keys.reserve(disk_.size());
  for (const auto& [k, e] : disk_) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  return keys;
}

}  // namespace ragdcache
