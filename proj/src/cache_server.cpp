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

#include "ragdcache/cache_server.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

namespace ragdcache {
namespace {

bool send_all(int fd, const std::uint8_t* data, std::size_t n) {
  while (n > 0) {
    const ssize_t w = ::send(fd, data, n, MSG_NOSIGNAL);
    if (w < 0 && errno == EINTR) continue;
    if (w <= 0) return false;
    data += w;
    n -= static_cast<std::size_t>(w);
  }
  return true;
}

bool recv_all(int fd, std::uint8_t* data, std::size_t n) {
  while (n > 0) {
    const ssize_t r = ::recv(fd, data, n, 0);
    if (r < 0 && errno == EINTR) continue;
    if (r <= 0) return false;
    data += r;
    n -= static_cast<std::size_t>(r);
  }
  return true;
}

bool send_response(int fd, const wire::Response& resp) {
  const Bytes frame = wire::encode_response(resp);
  return send_all(fd, frame.data(), frame.size());
}

wire::ErrorResponse error(wire::ErrorCode code, std::string msg) {
  return wire::ErrorResponse{code, std::move(msg)};
}

}  // namespace

std::pair<std::string, std::uint16_t> parse_host_port(const std::string& address) {
  const auto colon = address.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == address.size()) {
    throw std::invalid_argument("expected host:port, got '" + address + "'");
  }
  const std::string port_str = address.substr(colon + 1);
  std::size_t used = 0;
  unsigned long port = 0;
  try {
    port = std::stoul(port_str, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != port_str.size() || port > 65535) {
    throw std::invalid_argument("bad port in '" + address + "'");
  }
  return {address.substr(0, colon), static_cast<std::uint16_t>(port)};
}

CacheServer::~CacheServer() { stop(); }

void CacheServer::start(const std::string& host, std::uint16_t port) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  const std::string port_str = std::to_string(port);
  if (int rc = ::getaddrinfo(host.c_str(), port_str.c_str(), &hints, &res); rc != 0) {
    throw std::runtime_error("cannot resolve " + host + ": " + ::gai_strerror(rc));
  }
  listen_fd_ = ::socket(res->ai_family, res->ai_socktype, res->ai_protocol);
  int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  if (listen_fd_ < 0 || ::bind(listen_fd_, res->ai_addr, res->ai_addrlen) != 0 ||
      ::listen(listen_fd_, 64) != 0) {
    const std::string why = std::strerror(errno);
    ::freeaddrinfo(res);
    if (listen_fd_ >= 0) ::close(listen_fd_);
    listen_fd_ = -1;
    throw std::runtime_error("cannot listen on " + host + ":" + port_str + ": " + why);
  }
  ::freeaddrinfo(res);
  sockaddr_in bound{};
  socklen_t len = sizeof(bound);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &len);
  port_ = ntohs(bound.sin_port);
  stopping_ = false;
  acceptor_ = std::thread([this] { accept_loop(); });
}

void CacheServer::stop() {
  if (listen_fd_ < 0) return;
  stopping_ = true;
  ::shutdown(listen_fd_, SHUT_RDWR);
  ::close(listen_fd_);
  listen_fd_ = -1;
  if (acceptor_.joinable()) acceptor_.join();
  std::list<std::thread> threads;
  {
    std::lock_guard lock(conn_mu_);
    for (int fd : conn_fds_) ::shutdown(fd, SHUT_RDWR);
    threads.swap(conn_threads_);
  }
  for (auto& t : threads) t.join();
}

void CacheServer::accept_loop() {
  while (!stopping_) {
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (errno == EINTR) continue;
      break;
    }
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    std::lock_guard lock(conn_mu_);
    if (stopping_) {
      ::close(fd);
      break;
    }
    conn_fds_.push_back(fd);
    conn_threads_.emplace_back([this, fd] { serve_connection(fd); });
  }
}

void CacheServer::serve_connection(int fd) {
  Bytes payload;
  for (;;) {
    std::uint8_t prefix[4];
    if (!recv_all(fd, prefix, 4)) break;
    const std::uint32_t len = wire::read_be32(prefix);
    if (len > wire::kMaxFrameBytes) {
      send_response(fd, error(wire::ErrorCode::kOversize,
                              "frame of " + std::to_string(len) + " bytes exceeds limit"));
      break;
    }
    if (len == 0) {
      if (!send_response(fd, error(wire::ErrorCode::kMalformed, "empty frame"))) break;
      continue;
    }
    payload.resize(len);
    if (!recv_all(fd, payload.data(), len)) break;
    wire::Response resp;
    try {
      resp = handle(wire::decode_request(payload));
    } catch (const wire::MalformedFrame& e) {
      resp = error(wire::ErrorCode::kMalformed, e.what());
    }
    ++requests_;
    if (!send_response(fd, resp)) break;
  }
  std::lock_guard lock(conn_mu_);
  conn_fds_.remove(fd);
  ::close(fd);
}

wire::Response CacheServer::handle(const wire::Request& req) {
  try {
    if (const auto* g = std::get_if<wire::GetRequest>(&req)) {
      LookupResult r = store_.get(g->key);
      if (r.outcome == LookupOutcome::kMiss) return wire::StateResponse{Residency::kAbsent};
      return wire::BlobResponse{r.outcome, r.load_cost_bytes, *r.blob};
    }
    if (const auto* p = std::get_if<wire::PutRequest>(&req)) {
      store_.put(p->key, p->blob);
      return wire::StateResponse{store_.contains(p->key)};
    }
    if (const auto* c = std::get_if<wire::ContainsRequest>(&req)) {
      return wire::StateResponse{store_.contains(c->key)};
    }
    return wire::StatsResponse{store_.stats()};
  } catch (const StoreError& e) {
    switch (e.kind()) {
      case StoreErrorKind::kCorrupt: return error(wire::ErrorCode::kCorrupt, e.what());
      case StoreErrorKind::kKeyMismatch:
      case StoreErrorKind::kInvalidBlob: return error(wire::ErrorCode::kMalformed, e.what());
      default: return error(wire::ErrorCode::kInternal, e.what());
    }
  } catch (const std::exception& e) {
    return error(wire::ErrorCode::kInternal, e.what());
  }
}

CacheClient::CacheClient(const std::string& host, std::uint16_t port) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const std::string port_str = std::to_string(port);
  if (int rc = ::getaddrinfo(host.c_str(), port_str.c_str(), &hints, &res); rc != 0) {
    throw TransportError("cannot resolve " + host + ": " + ::gai_strerror(rc));
  }
  fd_ = ::socket(res->ai_family, res->ai_socktype, res->ai_protocol);
  if (fd_ < 0 || ::connect(fd_, res->ai_addr, res->ai_addrlen) != 0) {
    const std::string why = std::strerror(errno);
    ::freeaddrinfo(res);
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
    throw TransportError("cannot connect to " + host + ":" + port_str + ": " + why);
  }
  ::freeaddrinfo(res);
  int one = 1;
  ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

CacheClient::~CacheClient() {
  if (fd_ >= 0) ::close(fd_);
}

wire::Response CacheClient::read_response() {
  std::uint8_t prefix[4];
  if (!recv_all(fd_, prefix, 4)) throw TransportError("connection closed before response");
  const std::uint32_t len = wire::read_be32(prefix);
  if (len == 0 || len > wire::kMaxFrameBytes) throw TransportError("bad response frame length");
  Bytes payload(len);
  if (!recv_all(fd_, payload.data(), len)) throw TransportError("connection lost mid-response");
  try {
    return wire::decode_response(payload);
  } catch (const wire::MalformedFrame& e) {
    throw TransportError(std::string("malformed response: ") + e.what());
  }
}

wire::Response CacheClient::send_raw(ByteSpan bytes) {
  if (!send_all(fd_, bytes.data(), bytes.size())) throw TransportError("send failed");
  return read_response();
}

wire::Response CacheClient::call(const wire::Request& req) {
  const Bytes frame = wire::encode_request(req);
  return send_raw(frame);
}

namespace {

[[noreturn]] void raise(const wire::ErrorResponse& e) { throw RemoteError(e.code, e.message); }

Residency expect_state(const wire::Response& resp) {
  if (const auto* s = std::get_if<wire::StateResponse>(&resp)) return s->state;
  if (const auto* e = std::get_if<wire::ErrorResponse>(&resp)) raise(*e);
  throw TransportError("unexpected response type");
}

}  // namespace

LookupResult CacheClient::get(const KvKey& key) {
  wire::Response resp = call(wire::GetRequest{key});
  if (auto* b = std::get_if<wire::BlobResponse>(&resp)) {
    return LookupResult{b->outcome, std::make_shared<const KvBlob>(std::move(b->blob)),
                        b->load_cost_bytes};
  }
  if (expect_state(resp) != Residency::kAbsent) throw TransportError("unexpected state reply to get");
  return LookupResult{};
}

Residency CacheClient::put(const KvKey& key, const KvBlob& blob) {
  return expect_state(call(wire::PutRequest{key, blob}));
}

Residency CacheClient::contains(const KvKey& key) {
  return expect_state(call(wire::ContainsRequest{key}));
}

StoreStats CacheClient::stats() {
  wire::Response resp = call(wire::StatsRequest{});
  if (const auto* s = std::get_if<wire::StatsResponse>(&resp)) return s->stats;
  if (const auto* e = std::get_if<wire::ErrorResponse>(&resp)) raise(*e);
  throw TransportError("unexpected response type");
}

}  // namespace ragdcache
