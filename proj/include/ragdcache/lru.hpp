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
#include <list>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ragdcache {

/// Byte-budgeted LRU bookkeeping. Capacity is counted in bytes, never in
/// entries. An item larger than the whole capacity is not admitted and
/// evicts nothing.
template <typename Key, typename Value, typename Hash = std::hash<Key>>
class ByteLru {
 public:
  explicit ByteLru(std::uint64_t capacity_bytes = 0) : capacity_(capacity_bytes) {}

  /// Inserts or refreshes `key` as most recently used. Returns the keys
  /// evicted to make room, least recently used first.
  std::vector<Key> insert(const Key& key, Value value, std::uint64_t bytes) {
    std::vector<Key> evicted;
    if (auto it = map_.find(key); it != map_.end()) {
      used_ -= it->second->bytes;
      order_.erase(it->second);
      map_.erase(it);
    }
    if (bytes > capacity_) return evicted;
    while (used_ + bytes > capacity_) evicted.push_back(evict_one());
    order_.push_front(Node{key, std::move(value), bytes});
    map_.emplace(key, order_.begin());
    used_ += bytes;
    return evicted;
  }

  /// Returns the value and marks it most recently used, or nullptr.
  Value* touch(const Key& key) {
    auto it = map_.find(key);
    if (it == map_.end()) return nullptr;
    order_.splice(order_.begin(), order_, it->second);
    return &it->second->value;
  }

  bool contains(const Key& key) const { return map_.contains(key); }

  bool erase(const Key& key) {
    auto it = map_.find(key);
    if (it == map_.end()) return false;
    used_ -= it->second->bytes;
    order_.erase(it->second);
    map_.erase(it);
    return true;
  }

  std::vector<Key> set_capacity(std::uint64_t capacity_bytes) {
    capacity_ = capacity_bytes;
    std::vector<Key> evicted;
    while (used_ > capacity_) evicted.push_back(evict_one());
    return evicted;
  }

  /// Resident keys, most recently used first.
  std::vector<Key> keys_mru_first() const {
    std::vector<Key> keys;
    keys.reserve(order_.size());
    for (const auto& n : order_) keys.push_back(n.key);
    return keys;
  }

  std::uint64_t used_bytes() const { return used_; }
  std::uint64_t capacity_bytes() const { return capacity_; }
  std::size_t size() const { return map_.size(); }

 private:
  struct Node {
    Key key;
    Value value;
    std::uint64_t bytes;
  };

  Key evict_one() {
    Node& victim = order_.back();
    Key key = victim.key;
    used_ -= victim.bytes;
    map_.erase(key);
    order_.pop_back();
    return key;
  }

  std::uint64_t capacity_;
  std::uint64_t used_ = 0;
  std::list<Node> order_;
  std::unordered_map<Key, typename std::list<Node>::iterator, Hash> map_;
};

}  // namespace ragdcache
