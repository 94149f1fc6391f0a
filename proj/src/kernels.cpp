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

#include "ragdcache/kernels.hpp"

#include <cstddef>
#include <vector>

#include <omp.h>

#include "ragdcache/bytes.hpp"

namespace ragdcache::kernels {
namespace {

inline void store_word(std::uint8_t* dst, std::uint64_t w, std::size_t n) {
  for (std::size_t b = 0; b < n; ++b) dst[b] = static_cast<std::uint8_t>(w >> (8 * b));
}

inline float dot(const float* row, const float* q, std::size_t dim) {
  float acc = 0.0f;
  for (std::size_t j = 0; j < dim; ++j) acc += row[j] * q[j];
  return acc;
}

}  // namespace

void fill_payload_serial(std::span<std::uint8_t> out, std::uint64_t stream_seed) {
  const std::size_t words = out.size() / 8;
  for (std::size_t i = 0; i < words; ++i) {
    store_word(out.data() + 8 * i, splitmix64(stream_seed + i), 8);
  }
  if (const std::size_t tail = out.size() % 8; tail != 0) {
    store_word(out.data() + 8 * words, splitmix64(stream_seed + words), tail);
  }
}

void fill_payload_omp(std::span<std::uint8_t> out, std::uint64_t stream_seed) {
  const auto words = static_cast<std::int64_t>(out.size() / 8);
  std::uint8_t* base = out.data();
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < words; ++i) {
    store_word(base + 8 * i, splitmix64(stream_seed + static_cast<std::uint64_t>(i)), 8);
  }
  if (const std::size_t tail = out.size() % 8; tail != 0) {
    const auto w = static_cast<std::size_t>(words);
    store_word(base + 8 * w, splitmix64(stream_seed + w), tail);
  }
}

void inner_products_serial(std::span<const float> rows, std::span<const float> query,
                           std::span<float> scores) {
  const std::size_t dim = query.size();
  for (std::size_t i = 0; i < scores.size(); ++i) {
    scores[i] = dot(rows.data() + i * dim, query.data(), dim);
  }
}

void inner_products_omp(std::span<const float> rows, std::span<const float> query,
                        std::span<float> scores) {
  const std::size_t dim = query.size();
  const auto n = static_cast<std::int64_t>(scores.size());
  const float* r = rows.data();
  const float* q = query.data();
  float* s = scores.data();
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    s[i] = dot(r + static_cast<std::size_t>(i) * dim, q, dim);
  }
}

void histogram_serial(std::span<const std::uint32_t> values, std::span<std::uint64_t> counts) {
  for (std::uint32_t v : values) ++counts[v];
}

void histogram_omp(std::span<const std::uint32_t> values, std::span<std::uint64_t> counts) {
  const auto n = static_cast<std::int64_t>(values.size());
  const std::size_t bins = counts.size();
#pragma omp parallel
  {
    std::vector<std::uint64_t> local(bins, 0);
#pragma omp for schedule(static) nowait
    for (std::int64_t i = 0; i < n; ++i) ++local[values[static_cast<std::size_t>(i)]];
#pragma omp critical
    for (std::size_t b = 0; b < bins; ++b) counts[b] += local[b];
  }
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace ragdcache::kernels
