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

#include <cstring>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "ragdcache/bytes.hpp"
#include "ragdcache/kernels.hpp"

namespace {

using namespace ragdcache;

TEST(Kernels, FillPayloadMatchesSplitmixWords) {
  std::vector<std::uint8_t> buf(8 * 5 + 3);
  kernels::fill_payload_serial(buf, 100);
  for (std::size_t w = 0; w < 6; ++w) {
    const std::uint64_t word = splitmix64(100 + w);
    for (std::size_t b = 0; b < 8 && w * 8 + b < buf.size(); ++b) {
      ASSERT_EQ(buf[w * 8 + b], static_cast<std::uint8_t>(word >> (8 * b))) << w << ":" << b;
    }
  }
}

TEST(Kernels, FillPayloadOmpIsBitIdentical) {
  for (std::size_t n : {0u, 1u, 7u, 8u, 9u, 4096u, 100003u}) {
    std::vector<std::uint8_t> a(n), b(n);
    kernels::fill_payload_serial(a, 0xabcdef);
    kernels::fill_payload_omp(b, 0xabcdef);
    EXPECT_EQ(a, b) << n;
  }
}

TEST(Kernels, InnerProductsOmpIsBitIdentical) {
  std::mt19937_64 rng(3);
  std::normal_distribution<float> g;
  for (std::size_t dim : {1u, 3u, 64u}) {
    const std::size_t n = 1000;
    std::vector<float> rows(n * dim), q(dim), a(n), b(n);
    for (auto& x : rows) x = g(rng);
    for (auto& x : q) x = g(rng);
    kernels::inner_products_serial(rows, q, a);
    kernels::inner_products_omp(rows, q, b);
    ASSERT_EQ(0, std::memcmp(a.data(), b.data(), n * sizeof(float))) << dim;
    // Hand-computed row 0.
    float s = 0.0f;
    for (std::size_t j = 0; j < dim; ++j) s += rows[j] * q[j];
    EXPECT_EQ(a[0], s);
  }
}

TEST(Kernels, HistogramOmpMatchesSerialAndTotal) {
  std::mt19937_64 rng(5);
  std::vector<std::uint32_t> v(200000);
  for (auto& x : v) x = static_cast<std::uint32_t>(rng() % 97);
  std::vector<std::uint64_t> a(97), b(97);
  kernels::histogram_serial(v, a);
  kernels::histogram_omp(v, b);
  EXPECT_EQ(a, b);
  std::uint64_t total = 0;
  for (auto c : a) total += c;
  EXPECT_EQ(total, v.size());
}

TEST(Kernels, ThreadsPositive) { EXPECT_GE(kernels::max_threads(), 1); }

}  // namespace
