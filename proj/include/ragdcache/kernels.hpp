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

// Data-parallel inner loops. Each kernel has a serial reference and an
// OpenMP version that must produce bit-identical output; tests compare them
// and bench/ times them against each other.

#include <cstdint>
#include <span>

namespace ragdcache::kernels {

/// Fills `out` with splitmix64(stream_seed + i) for 8-byte word i, stored
/// little-endian. A short tail takes the low bytes of the next word.
void fill_payload_serial(std::span<std::uint8_t> out, std::uint64_t stream_seed);
void fill_payload_omp(std::span<std::uint8_t> out, std::uint64_t stream_seed);

/// scores[i] = <rows[i*dim .. i*dim+dim), query>, accumulated in float in
/// index order so both versions agree bitwise.
void inner_products_serial(std::span<const float> rows, std::span<const float> query,
                           std::span<float> scores);
void inner_products_omp(std::span<const float> rows, std::span<const float> query,
                        std::span<float> scores);

/// Per-bin counts of `values` (each < counts.size()).
void histogram_serial(std::span<const std::uint32_t> values, std::span<std::uint64_t> counts);
void histogram_omp(std::span<const std::uint32_t> values, std::span<std::uint64_t> counts);

/// Number of OpenMP threads the parallel kernels will use.
int max_threads();

}  // namespace ragdcache::kernels
