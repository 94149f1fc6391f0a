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

#include "ragdcache/bytes.hpp"

#include <bit>
#include <cstring>

namespace ragdcache {

std::string to_hex16(std::uint64_t v) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = kDigits[v & 0xf];
    v >>= 4;
  }
  return s;
}

void ByteWriter::f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }

float ByteReader::f32() { return std::bit_cast<float>(u32()); }

ByteSpan ByteReader::raw(std::size_t n) {
  if (!ok_ || remaining() < n) {
    ok_ = false;
    pos_ = in_.size();
    return {};
  }
  ByteSpan s = in_.subspan(pos_, n);
  pos_ += n;
  return s;
}

std::uint64_t ByteReader::get(int n) {
  if (!ok_ || remaining() < static_cast<std::size_t>(n)) {
    ok_ = false;
    pos_ = in_.size();
    return 0;
  }
  std::uint64_t v = 0;
  for (int i = 0; i < n; ++i) {
    v |= static_cast<std::uint64_t>(in_[pos_ + static_cast<std::size_t>(i)]) << (8 * i);
  }
  pos_ += static_cast<std::size_t>(n);
  return v;
}

}  // namespace ragdcache
