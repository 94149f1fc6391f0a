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

#include "ragdcache/wire.hpp"

#include <algorithm>
#include <limits>

namespace ragdcache::wire {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

void put_key(ByteWriter& w, const KvKey& key) {
  if (key.doc_ids.size() > std::numeric_limits<std::uint16_t>::max()) {
    throw std::invalid_argument("key has too many doc ids for the wire format");
  }
  w.u64(key.model_hash);
  w.u16(static_cast<std::uint16_t>(key.doc_ids.size()));
  for (DocId id : key.doc_ids) w.u64(id);
}

KvKey take_key(ByteReader& r) {
  KvKey key;
  key.model_hash = r.u64();
  const std::uint16_t n = r.u16();
  if (!r.ok() || n == 0 || r.remaining() < 8ULL * n) throw MalformedFrame("bad key encoding");
  key.doc_ids.resize(n);
  for (auto& id : key.doc_ids) id = r.u64();
  return key;
}

void expect_end(const ByteReader& r) {
  if (!r.ok()) throw MalformedFrame("frame body truncated");
  if (r.remaining() != 0) throw MalformedFrame("trailing bytes in frame body");
}

Bytes frame(Opcode op, const Bytes& body) {
  if (body.size() + 1 > kMaxFrameBytes) throw std::length_error("frame exceeds maximum size");
  Bytes out(5 + body.size());
  write_be32(out.data(), static_cast<std::uint32_t>(body.size() + 1));
  out[4] = static_cast<std::uint8_t>(op);
  std::copy(body.begin(), body.end(), out.begin() + 5);
  return out;
}

KvBlob take_blob(ByteReader& r) {
  ByteSpan rest = r.raw(r.remaining());
  try {
    return decode(rest);
  } catch (const CodecError& e) {
    throw MalformedFrame(std::string("embedded blob: ") + e.what());
  }
}

}  // namespace

std::uint32_t read_be32(const std::uint8_t* p) {
  return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) | (std::uint32_t{p[2]} << 8) |
         std::uint32_t{p[3]};
}

void write_be32(std::uint8_t* p, std::uint32_t v) {
  p[0] = static_cast<std::uint8_t>(v >> 24);
  p[1] = static_cast<std::uint8_t>(v >> 16);
  p[2] = static_cast<std::uint8_t>(v >> 8);
  p[3] = static_cast<std::uint8_t>(v);
}

Bytes encode_request(const Request& req) {
  Bytes body;
  ByteWriter w(body);
  const Opcode op = std::visit(
      Overloaded{
          [&](const GetRequest& g) { put_key(w, g.key); return Opcode::kGet; },
          [&](const PutRequest& p) {
            put_key(w, p.key);
            encode_to(p.blob, body);
            return Opcode::kPut;
          },
          [&](const ContainsRequest& c) { put_key(w, c.key); return Opcode::kContains; },
          [&](const StatsRequest&) { return Opcode::kStats; },
      },
      req);
  return frame(op, body);
}

Bytes encode_response(const Response& resp) {
  Bytes body;
  ByteWriter w(body);
  const Opcode op = std::visit(
      Overloaded{
          [&](const BlobResponse& b) {
            w.u8(static_cast<std::uint8_t>(b.outcome));
            w.u64(b.load_cost_bytes);
            encode_to(b.blob, body);
            return Opcode::kBlob;
          },
          [&](const StateResponse& s) {
            w.u8(static_cast<std::uint8_t>(s.state));
            return Opcode::kState;
          },
          [&](const StatsResponse& s) {
            const StoreStats& st = s.stats;
            for (std::uint64_t v : {st.memory_hits, st.disk_hits, st.misses, st.evictions,
                                    st.corrupt, st.memory_bytes_used, st.memory_capacity_bytes,
                                    st.disk_bytes_used, st.memory_entries, st.disk_entries}) {
              w.u64(v);
            }
            return Opcode::kStatsBody;
          },
          [&](const ErrorResponse& e) {
            w.u8(static_cast<std::uint8_t>(e.code));
            w.raw(ByteSpan(reinterpret_cast<const std::uint8_t*>(e.message.data()),
                           e.message.size()));
            return Opcode::kError;
          },
      },
      resp);
  return frame(op, body);
}

Request decode_request(ByteSpan payload) {
  if (payload.empty()) throw MalformedFrame("empty frame");
  ByteReader r(payload.subspan(1));
  switch (static_cast<Opcode>(payload[0])) {
    case Opcode::kGet: {
      GetRequest g{take_key(r)};
      expect_end(r);
      return g;
    }
    case Opcode::kPut: {
      PutRequest p;
      p.key = take_key(r);
      p.blob = take_blob(r);
      return p;
    }
    case Opcode::kContains: {
      ContainsRequest c{take_key(r)};
      expect_end(r);
      return c;
    }
    case Opcode::kStats:
      expect_end(r);
      return StatsRequest{};
    default:
      throw MalformedFrame("unknown request opcode " + std::to_string(payload[0]));
  }
}

Response decode_response(ByteSpan payload) {
  if (payload.empty()) throw MalformedFrame("empty frame");
  ByteReader r(payload.subspan(1));
  switch (static_cast<Opcode>(payload[0])) {
    case Opcode::kBlob: {
      BlobResponse b;
      const std::uint8_t outcome = r.u8();
      if (outcome > static_cast<std::uint8_t>(LookupOutcome::kMiss)) {
        throw MalformedFrame("bad lookup outcome");
      }
      b.outcome = static_cast<LookupOutcome>(outcome);
      b.load_cost_bytes = r.u64();
      if (!r.ok()) throw MalformedFrame("frame body truncated");
      b.blob = take_blob(r);
      return b;
    }
    case Opcode::kState: {
      const std::uint8_t s = r.u8();
      expect_end(r);
      if (s > static_cast<std::uint8_t>(Residency::kAbsent)) throw MalformedFrame("bad residency");
      return StateResponse{static_cast<Residency>(s)};
    }
    case Opcode::kStatsBody: {
      StatsResponse s;
      StoreStats& st = s.stats;
      for (std::uint64_t* v : {&st.memory_hits, &st.disk_hits, &st.misses, &st.evictions,
                               &st.corrupt, &st.memory_bytes_used, &st.memory_capacity_bytes,
                               &st.disk_bytes_used, &st.memory_entries, &st.disk_entries}) {
        *v = r.u64();
      }
      expect_end(r);
      return s;
    }
    case Opcode::kError: {
      ErrorResponse e;
      const std::uint8_t code = r.u8();
      if (!r.ok() || code < 1 || code > 5) throw MalformedFrame("bad error code");
      e.code = static_cast<ErrorCode>(code);
      ByteSpan msg = r.raw(r.remaining());
      e.message.assign(msg.begin(), msg.end());
      return e;
    }
    default:
      throw MalformedFrame("unknown response opcode " + std::to_string(payload[0]));
  }
}

}  // namespace ragdcache::wire
