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

#include <atomic>
#include <cstdint>
#include <list>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "ragdcache/kv_store.hpp"
#include "ragdcache/wire.hpp"

namespace ragdcache {

/// "host:port" split; throws std::invalid_argument on bad input.
std::pair<std::string, std::uint16_t> parse_host_port(const std::string& address);

/// Serves a KvStore over TCP with the framed protocol in wire.hpp. One
/// listener thread, one thread per connection, one request in flight per
/// connection. Malformed frames get an Error reply and the connection stays
/// open; oversize frames get an Error reply and the connection is closed.
class CacheServer {
 public:
  explicit CacheServer(KvStore& store) : store_(store) {}
  ~CacheServer();

  CacheServer(const CacheServer&) = delete;
  CacheServer& operator=(const CacheServer&) = delete;

  /// Binds and starts accepting. Port 0 picks an ephemeral port.
  void start(const std::string& host, std::uint16_t port);
  void stop();

  std::uint16_t port() const { return port_; }
  std::uint64_t requests_served() const { return requests_.load(); }

  /// Executes one decoded request against the store. Exposed for tests.
  wire::Response handle(const wire::Request& req);

 private:
  void accept_loop();
  void serve_connection(int fd);

  KvStore& store_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  std::atomic<std::uint64_t> requests_{0};
  std::thread acceptor_;
  std::mutex conn_mu_;
  std::list<int> conn_fds_;
  std::list<std::thread> conn_threads_;
};

/// Socket failures: connect, short read/write, peer closing mid-response.
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The server answered with an Error frame.
class RemoteError : public std::runtime_error {
 public:
  RemoteError(wire::ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  wire::ErrorCode code() const { return code_; }

 private:
  wire::ErrorCode code_;
};

/// Blocking client for CacheServer. Not thread-safe; use one per thread.
class CacheClient {
 public:
  CacheClient(const std::string& host, std::uint16_t port);
  ~CacheClient();

  CacheClient(const CacheClient&) = delete;
  CacheClient& operator=(const CacheClient&) = delete;

  /// Mirrors KvStore::get. A miss comes back with outcome kMiss.
  LookupResult get(const KvKey& key);
  Residency put(const KvKey& key, const KvBlob& blob);
  Residency contains(const KvKey& key);
  StoreStats stats();

  /// Sends one request and returns the decoded reply, Error frames included.
  wire::Response call(const wire::Request& req);
  /// Sends raw bytes and reads one reply frame. Used for fuzzing.
  wire::Response send_raw(ByteSpan bytes);

 private:
  wire::Response read_response();
  int fd_ = -1;
};

}  // namespace ragdcache
