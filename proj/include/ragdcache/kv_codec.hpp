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
#include <stdexcept>
#include <string>
#include <vector>

#include "ragdcache/bytes.hpp"

namespace ragdcache {

using DocId = std::uint64_t;
using DocIds = std::vector<DocId>;

/// Transformer shape used to size and label KV blobs.
struct ModelProfile {
  std::string model_id;
  std::uint32_t layers = 1;
  std::uint32_t hidden_dim = 1;
  std::uint32_t kv_heads = 1;
  std::uint32_t head_dim = 1;
  std::uint8_t elem_width = 2;

  /// Throws std::invalid_argument unless every dimension is positive,
  /// kv_heads * head_dim == hidden_dim and elem_width is 2 or 4.
  void validate() const;

  /// Stable identity of the profile; part of every cache key.
  std::uint64_t hash() const;

  bool operator==(const ModelProfile&) const = default;
};

/// Payload bytes for `token_count` tokens: 2 * L * H * d_h * N * elem_width.
/// The factor 2 covers keys and values. Header bytes are not included.
std::uint64_t blob_size(const ModelProfile& profile, std::uint64_t token_count);

inline constexpr char kBlobMagic[4] = {'R', 'D', 'K', 'V'};
inline constexpr std::uint16_t kBlobVersion = 1;

struct KvBlobHeader {
  std::uint16_t version = kBlobVersion;
  std::uint64_t model_hash = 0;
  DocIds doc_ids;
  std::uint32_t token_count = 0;
  std::uint16_t layers = 0;
  std::uint16_t kv_heads = 0;
  std::uint16_t head_dim = 0;
  std::uint8_t elem_width = 0;
  std::uint64_t payload_len = 0;
  std::uint64_t checksum = 0;

  /// Serialized header length for this doc_id count.
  std::size_t encoded_size() const { return 46 + 8 * doc_ids.size(); }

  bool operator==(const KvBlobHeader&) const = default;
};

struct KvBlob {
  KvBlobHeader header;
  Bytes payload;

  std::size_t encoded_size() const { return header.encoded_size() + payload.size(); }

  bool operator==(const KvBlob&) const = default;
};

enum class CodecErrorKind {
  kBadMagic,
  kUnsupportedVersion,
  kChecksumMismatch,
  kTruncated,
  kMalformed,
};

const char* to_string(CodecErrorKind kind);

class CodecError : public std::runtime_error {
 public:
  CodecError(CodecErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  CodecErrorKind kind() const { return kind_; }

 private:
  CodecErrorKind kind_;
};

/// FNV-1a over the payload.
std::uint64_t payload_checksum(ByteSpan payload);

/// Builds a blob whose payload is a deterministic pseudorandom byte stream
/// keyed by (seed, model hash, doc_ids, token_count). Order of doc_ids
/// matters. Throws std::invalid_argument on empty doc_ids or zero tokens.
KvBlob synth_blob(const ModelProfile& profile, const DocIds& doc_ids,
                  std::uint32_t token_count, std::uint64_t seed);

/// Canonical little-endian encoding:
///   magic(4) version(2) model_hash(8) doc_count(2) doc_ids(8*n)
///   token_count(4) layers(2) kv_heads(2) head_dim(2) elem_width(1)
///   reserved(3) payload_len(8) checksum(8) payload
Bytes encode(const KvBlob& blob);
void encode_to(const KvBlob& blob, Bytes& out);

/// Inverse of encode. Throws CodecError with a distinct kind for bad magic,
/// unsupported version, truncation, checksum mismatch and malformed headers.
KvBlob decode(ByteSpan bytes);

/// Header-only decode; the payload is not read or verified.
KvBlobHeader decode_header(ByteSpan bytes);

}  // namespace ragdcache
