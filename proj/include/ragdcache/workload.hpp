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
#include <filesystem>
#include <iosfwd>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ragdcache/kv_codec.hpp"

namespace ragdcache {

struct TokenDefaults {
  std::uint32_t q_tokens = 16;
  std::uint32_t doc_tokens = 120;
};

/// One query. Exactly one of doc_ids / embedding is set.
struct WorkItem {
  std::uint64_t query_id = 0;
  DocIds doc_ids;
  std::vector<float> embedding;
  std::uint32_t q_tokens = 16;
  std::vector<std::uint32_t> doc_tokens;  // parallel to doc_ids
  double arrival = 0.0;

  bool resolved() const { return !doc_ids.empty(); }
  std::uint64_t doc_token_total() const;
  bool operator==(const WorkItem&) const = default;
};

class WorkloadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Uniform double in [0, 1) from the top 53 bits of one engine draw.
inline double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Inverse-CDF Zipf sampler over ranks 0..n-1 with p(r) proportional to
/// (r+1)^-s.
class ZipfSampler {
 public:
  ZipfSampler(std::uint64_t n, double s);

  std::uint64_t operator()(std::mt19937_64& rng) const;
  double probability(std::uint64_t rank) const;
  std::uint64_t size() const { return cdf_.size(); }

 private:
  std::vector<double> cdf_;
};

/// `n_queries` items whose doc ids are Zipf ranks over `n_docs`. With k > 1
/// each item holds k distinct docs in draw order. Deterministic per seed.
std::vector<WorkItem> zipf_stream(std::uint64_t n_docs, double s, std::uint64_t n_queries,
                                  std::uint64_t seed, std::uint32_t k = 1,
                                  TokenDefaults tokens = {});

struct LocalityPoint {
  double doc_fraction = 0.0;
  double query_fraction = 0.0;
};

/// Running coverage of queries by documents ranked by frequency (descending,
/// ties by id). Fractions of documents are over `corpus_size`.
struct LocalityCurve {
  std::vector<LocalityPoint> points;
  std::vector<std::pair<DocId, std::uint64_t>> ranked;  // (doc, count)
  std::uint64_t corpus_size = 0;
  std::uint64_t total_queries = 0;

  /// Smallest document fraction whose queries cover at least `q`.
  double coverage_at(double q) const;
};

/// `trace` holds (query_id, top-1 doc id). corpus_size 0 means the number of
/// distinct docs in the trace.
LocalityCurve locality_curve(const std::vector<std::pair<std::uint64_t, DocId>>& trace,
                             std::uint64_t corpus_size = 0);
LocalityCurve locality_curve(const std::vector<WorkItem>& items, std::uint64_t corpus_size = 0);

void write_curve_csv(std::ostream& os, const LocalityCurve& curve);

/// Bisection on s so that a zipf_stream(n_docs, s, n_queries, seed) has
/// coverage_at(0.5) within `tol` of `target`, or as close as the bracket
/// allows.
double fit_zipf_exponent(std::uint64_t n_docs, std::uint64_t n_queries, double target,
                         std::uint64_t seed, double tol = 1e-4);

/// JSONL, one {query_id, doc_ids, q_tokens, doc_tokens} object per line.
/// Missing token fields take the defaults.
std::vector<WorkItem> load_trace(const std::filesystem::path& path, TokenDefaults tokens = {});
std::vector<WorkItem> parse_trace(std::istream& in, TokenDefaults tokens = {});
void save_trace(const std::filesystem::path& path, const std::vector<WorkItem>& items);
void write_trace(std::ostream& os, const std::vector<WorkItem>& items);

/// Arrival times with exponential gaps of mean 1/rate; the first query
/// arrives after one gap.
std::vector<double> poisson_arrivals(std::size_t n, double rate, std::uint64_t seed);
/// Arrival i at (i + 1) / rate.
std::vector<double> uniform_arrivals(std::size_t n, double rate);

std::vector<WorkItem> poissonize(std::vector<WorkItem> items, double rate, std::uint64_t seed);

}  // namespace ragdcache
