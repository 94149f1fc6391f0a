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

#include "ragdcache/kv_codec.hpp"

#include <cstring>
#include <limits>

#include "ragdcache/kernels.hpp"

namespace ragdcache {
namespace {

constexpr std::size_t kFixedHeaderBytes = 46;

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

void ModelProfile::validate() const {
  require(layers >= 1 && hidden_dim >= 1 && kv_heads >= 1 && head_dim >= 1,
          "model profile dimensions must be positive");
  require(static_cast<std::uint64_t>(kv_heads) * head_dim == hidden_dim,
          "model profile requires kv_heads * head_dim == hidden_dim");
  require(elem_width == 2 || elem_width == 4, "elem_width must be 2 or 4");
  constexpr std::uint32_t kMax16 = std::numeric_limits<std::uint16_t>::max();
  require(layers <= kMax16 && kv_heads <= kMax16 && head_dim <= kMax16,
          "model profile dimension exceeds the 16-bit blob header field");
}

std::uint64_t ModelProfile::hash() const {
  Bytes buf(model_id.begin(), model_id.end());
  buf.push_back(0);
  ByteWriter w(buf);
  w.u32(layers);
  w.u32(hidden_dim);
  w.u32(kv_heads);
  w.u32(head_dim);
  w.u8(elem_width);
  return fnv1a64(buf);
}

std::uint64_t blob_size(const ModelProfile& p, std::uint64_t token_count) {
  return 2ULL * p.layers * p.kv_heads * p.head_dim * token_count * p.elem_width;
}

const char* to_string(CodecErrorKind kind) {
  switch (kind) {
    case CodecErrorKind::kBadMagic: return "bad_magic";
    case CodecErrorKind::kUnsupportedVersion: return "unsupported_version";
    case CodecErrorKind::kChecksumMismatch: return "checksum_mismatch";
    case CodecErrorKind::kTruncated: return "truncated";
    case CodecErrorKind::kMalformed: return "malformed";
  }
  return "unknown";
}

std::uint64_t payload_checksum(ByteSpan payload) { return fnv1a64(payload); }

KvBlob synth_blob(const ModelProfile& profile, const DocIds& doc_ids,
                  std::uint32_t token_count, std::uint64_t seed) {
  profile.validate();
  require(!doc_ids.empty(), "synth_blob requires at least one doc id");
  require(token_count >= 1, "synth_blob requires token_count >= 1");
  require(doc_ids.size() <= std::numeric_limits<std::uint16_t>::max(), "too many doc ids");

  KvBlob blob;
  KvBlobHeader& h = blob.header;
  h.model_hash = profile.hash();
  h.doc_ids = doc_ids;
  h.token_count = token_count;
  h.layers = static_cast<std::uint16_t>(profile.layers);
  h.kv_heads = static_cast<std::uint16_t>(profile.kv_heads);
  h.head_dim = static_cast<std::uint16_t>(profile.head_dim);
  h.elem_width = profile.elem_width;
  h.payload_len = blob_size(profile, token_count);

  Bytes key;
  ByteWriter w(key);
  w.u64(seed);
  w.u64(h.model_hash);
  w.u16(static_cast<std::uint16_t>(doc_ids.size()));
  for (DocId id : doc_ids) w.u64(id);
  w.u32(token_count);
  const std::uint64_t stream_seed = splitmix64(fnv1a64(key));

  blob.payload.resize(h.payload_len);
  kernels::fill_payload_omp(blob.payload, stream_seed);
  h.checksum = payload_checksum(blob.payload);
  return blob;
}

void encode_to(const KvBlob& blob, Bytes& out) {
  const KvBlobHeader& h = blob.header;
  out.reserve(out.size() + blob.encoded_size());
  ByteWriter w(out);
  w.raw(ByteSpan(reinterpret_cast<const std::uint8_t*>(kBlobMagic), 4));
  w.u16(h.version);
  w.u64(h.model_hash);
  w.u16(static_cast<std::uint16_t>(h.doc_ids.size()));
  for (DocId id : h.doc_ids) w.u64(id);
  w.u32(h.token_count);
  w.u16(h.layers);
  w.u16(h.kv_heads);
  w.u16(h.head_dim);
  w.u8(h.elem_width);
  w.zeros(3);
  w.u64(h.payload_len);
  w.u64(h.checksum);
  w.raw(blob.payload);
}

Bytes encode(const KvBlob& blob) {
  Bytes out;
  encode_to(blob, out);
  return out;
}

KvBlobHeader decode_header(ByteSpan bytes) {
  if (bytes.size() < 4) throw CodecError(CodecErrorKind::kTruncated, "blob shorter than magic");
  if (std::memcmp(bytes.data(), kBlobMagic, 4) != 0) {
    throw CodecError(CodecErrorKind::kBadMagic, "blob magic is not RDKV");
  }
  ByteReader r(bytes.subspan(4));
  KvBlobHeader h;
  h.version = r.u16();
  if (r.ok() && h.version != kBlobVersion) {
    throw CodecError(CodecErrorKind::kUnsupportedVersion,
                     "unsupported blob version " + std::to_string(h.version));
  }
  h.model_hash = r.u64();
  const std::uint16_t doc_count = r.u16();
  if (r.ok() && r.remaining() < 8ULL * doc_count + (kFixedHeaderBytes - 16)) {
    throw CodecError(CodecErrorKind::kTruncated, "blob header truncated");
  }
  h.doc_ids.resize(doc_count);
  for (auto& id : h.doc_ids) id = r.u64();
  h.token_count = r.u32();
  h.layers = r.u16();
  h.kv_heads = r.u16();
  h.head_dim = r.u16();
  h.elem_width = r.u8();
  ByteSpan reserved = r.raw(3);
  h.payload_len = r.u64();
  h.checksum = r.u64();
  if (!r.ok()) throw CodecError(CodecErrorKind::kTruncated, "blob header truncated");

  if (doc_count == 0) throw CodecError(CodecErrorKind::kMalformed, "blob has no doc ids");
  if (h.token_count == 0) throw CodecError(CodecErrorKind::kMalformed, "blob has zero tokens");
  if (reserved[0] != 0 || reserved[1] != 0 || reserved[2] != 0) {
    throw CodecError(CodecErrorKind::kMalformed, "reserved header bytes are not zero");
  }
  if (h.elem_width != 2 && h.elem_width != 4) {
    throw CodecError(CodecErrorKind::kMalformed, "elem_width must be 2 or 4");
  }
  const std::uint64_t expected =
      2ULL * h.layers * h.kv_heads * h.head_dim * h.token_count * h.elem_width;
  if (h.payload_len != expected) {
    throw CodecError(CodecErrorKind::kMalformed, "payload_len disagrees with header dimensions");
  }
  return h;
}

KvBlob decode(ByteSpan bytes) {
  KvBlob blob;
  blob.header = decode_header(bytes);
  const std::size_t header_len = blob.header.encoded_size();
  const std::size_t available = bytes.size() - header_len;
  if (available < blob.header.payload_len) {
    throw CodecError(CodecErrorKind::kTruncated,
                     "payload truncated: have " + std::to_string(available) + " of " +
                         std::to_string(blob.header.payload_len) + " bytes");
  }
  if (available > blob.header.payload_len) {
    throw CodecError(CodecErrorKind::kMalformed, "trailing bytes after payload");
  }
  ByteSpan payload = bytes.subspan(header_len);
  if (payload_checksum(payload) != blob.header.checksum) {
    throw CodecError(CodecErrorKind::kChecksumMismatch, "payload checksum mismatch");
  }
  blob.payload.assign(payload.begin(), payload.end());
  return blob;
}

}  // namespace ragdcache
