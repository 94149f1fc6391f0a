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

// Frame: u32 big-endian length | u8 opcode | body. The length counts the
// opcode byte plus the body. Body integers are little-endian.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

#include "ragdcache/kv_store.hpp"

namespace ragdcache::wire {

inline constexpr std::uint32_t kMaxFrameBytes = 256u << 20;

enum class Opcode : std::uint8_t {
  kGet = 0x01,
  kPut = 0x02,
  kContains = 0x03,
  kStats = 0x04,
  kBlob = 0x81,
  kState = 0x82,
  kStatsBody = 0x83,
  kError = 0xEE,
};

enum class ErrorCode : std::uint8_t {
  kAbsent = 1,
  kCorrupt = 2,
  kMalformed = 3,
  kOversize = 4,
  kInternal = 5,
};

struct GetRequest {
  KvKey key;
  bool operator==(const GetRequest&) const = default;
};
struct PutRequest {
  KvKey key;
  KvBlob blob;
  bool operator==(const PutRequest&) const = default;
};
struct ContainsRequest {
  KvKey key;
  bool operator==(const ContainsRequest&) const = default;
};
struct StatsRequest {
  bool operator==(const StatsRequest&) const = default;
};
using Request = std::variant<GetRequest, PutRequest, ContainsRequest, StatsRequest>;

struct BlobResponse {
  LookupOutcome outcome = LookupOutcome::kDiskHit;
  std::uint64_t load_cost_bytes = 0;
  KvBlob blob;
  bool operator==(const BlobResponse&) const = default;
};
struct StateResponse {
  Residency state = Residency::kAbsent;
  bool operator==(const StateResponse&) const = default;
};
struct StatsResponse {
  StoreStats stats;
  bool operator==(const StatsResponse&) const = default;
};
struct ErrorResponse {
  ErrorCode code = ErrorCode::kInternal;
  std::string message;
  bool operator==(const ErrorResponse&) const = default;
};
using Response = std::variant<BlobResponse, StateResponse, StatsResponse, ErrorResponse>;

/// Raised when a frame payload cannot be parsed.
class MalformedFrame : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Full frames, including the length prefix.
Bytes encode_request(const Request& req);
Bytes encode_response(const Response& resp);

/// `payload` is the frame without its length prefix (opcode + body).
Request decode_request(ByteSpan payload);
Response decode_response(ByteSpan payload);

std::uint32_t read_be32(const std::uint8_t* p);
void write_be32(std::uint8_t* p, std::uint32_t v);

}  // namespace ragdcache::wire
