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

#include "ragdcache/workload.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <unordered_map>

#include <nlohmann/json.hpp>

namespace ragdcache {

using nlohmann::json;

std::uint64_t WorkItem::doc_token_total() const {
  return std::accumulate(doc_tokens.begin(), doc_tokens.end(), std::uint64_t{0});
}

ZipfSampler::ZipfSampler(std::uint64_t n, double s) {
  if (n == 0) throw std::invalid_argument("zipf: n must be at least 1");
  if (!(s >= 0.0)) throw std::invalid_argument("zipf: exponent must be non-negative");
  cdf_.resize(n);
  double acc = 0.0;
  for (std::uint64_t r = 0; r < n; ++r) {
    acc += std::pow(static_cast<double>(r + 1), -s);
    cdf_[r] = acc;
  }
  for (double& c : cdf_) c /= acc;
  cdf_.back() = 1.0;
}

std::uint64_t ZipfSampler::operator()(std::mt19937_64& rng) const {
  const double u = unit_draw(rng);
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return static_cast<std::uint64_t>(std::min<std::ptrdiff_t>(
      it - cdf_.begin(), static_cast<std::ptrdiff_t>(cdf_.size()) - 1));
}

double ZipfSampler::probability(std::uint64_t rank) const {
  if (rank >= cdf_.size()) return 0.0;
  return rank == 0 ? cdf_[0] : cdf_[rank] - cdf_[rank - 1];
}

std::vector<WorkItem> zipf_stream(std::uint64_t n_docs, double s, std::uint64_t n_queries,
                                  std::uint64_t seed, std::uint32_t k, TokenDefaults tokens) {
  if (k == 0 || k > n_docs) throw std::invalid_argument("zipf_stream: k must be in [1, n_docs]");
  ZipfSampler zipf(n_docs, s);
  std::mt19937_64 rng(seed);
  std::vector<WorkItem> out(n_queries);
  for (std::uint64_t q = 0; q < n_queries; ++q) {
    WorkItem& item = out[q];
    item.query_id = q;
    item.q_tokens = tokens.q_tokens;
    while (item.doc_ids.size() < k) {
      const DocId d = zipf(rng);
      if (std::find(item.doc_ids.begin(), item.doc_ids.end(), d) == item.doc_ids.end()) {
        item.doc_ids.push_back(d);
      }
    }
    item.doc_tokens.assign(k, tokens.doc_tokens);
  }
  return out;
}

double LocalityCurve::coverage_at(double q) const {
  if (total_queries == 0 || corpus_size == 0) return 0.0;
  const double need = q * static_cast<double>(total_queries);
  std::uint64_t cum = 0;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    cum += ranked[i].second;
    if (static_cast<double>(cum) >= need) {
      return static_cast<double>(i + 1) / static_cast<double>(corpus_size);
    }
  }
  return static_cast<double>(ranked.size()) / static_cast<double>(corpus_size);
}

LocalityCurve locality_curve(const std::vector<std::pair<std::uint64_t, DocId>>& trace,
                             std::uint64_t corpus_size) {
  if (trace.empty()) throw WorkloadError("locality: empty trace");
  std::unordered_map<DocId, std::uint64_t> counts;
  for (const auto& [qid, doc] : trace) ++counts[doc];

  LocalityCurve curve;
  curve.ranked.assign(counts.begin(), counts.end());
  std::sort(curve.ranked.begin(), curve.ranked.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  curve.total_queries = trace.size();
  curve.corpus_size = corpus_size == 0 ? curve.ranked.size() : corpus_size;
  if (curve.corpus_size < curve.ranked.size()) {
    throw WorkloadError("locality: corpus size " + std::to_string(corpus_size) +
                        " is smaller than the " + std::to_string(curve.ranked.size()) +
                        " distinct documents in the trace");
  }
  std::uint64_t cum = 0;
  curve.points.reserve(curve.ranked.size());
  for (std::size_t i = 0; i < curve.ranked.size(); ++i) {
    cum += curve.ranked[i].second;
    curve.points.push_back({static_cast<double>(i + 1) / static_cast<double>(curve.corpus_size),
                            static_cast<double>(cum) / static_cast<double>(curve.total_queries)});
  }
  return curve;
}

LocalityCurve locality_curve(const std::vector<WorkItem>& items, std::uint64_t corpus_size) {
  std::vector<std::pair<std::uint64_t, DocId>> trace;
  trace.reserve(items.size());
  for (const auto& it : items) {
    if (!it.resolved()) throw WorkloadError("locality: item " + std::to_string(it.query_id) +
                                            " has no doc ids");
    trace.emplace_back(it.query_id, it.doc_ids.front());
  }
  return locality_curve(trace, corpus_size);
}

void write_curve_csv(std::ostream& os, const LocalityCurve& curve) {
  os << "rank_fraction,coverage\n";
  os.precision(17);
  for (const auto& p : curve.points) os << p.doc_fraction << ',' << p.query_fraction << '\n';
}

double fit_zipf_exponent(std::uint64_t n_docs, std::uint64_t n_queries, double target,
                         std::uint64_t seed, double tol) {
  auto coverage = [&](double s) {
    return locality_curve(zipf_stream(n_docs, s, n_queries, seed), n_docs).coverage_at(0.5);
  };
  // Coverage shrinks as s grows.
  double lo = 0.0;
  double hi = 4.0;
  double mid = 0.5 * (lo + hi);
  for (int iter = 0; iter < 60; ++iter) {
    mid = 0.5 * (lo + hi);
    const double c = coverage(mid);
    if (std::abs(c - target) <= tol) break;
    if (c > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return mid;
}

namespace {

std::string where(std::size_t line, const char* field) {
  return "line " + std::to_string(line) + ": field '" + field + "'";
}

std::uint64_t take_uint(const json& obj, const char* field, std::size_t line) {
  if (!obj.contains(field)) throw WorkloadError(where(line, field) + " is missing");
  const json& v = obj.at(field);
  if (!v.is_number_unsigned()) {
    throw WorkloadError(where(line, field) + " must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

}  // namespace

std::vector<WorkItem> parse_trace(std::istream& in, TokenDefaults tokens) {
  std::vector<WorkItem> items;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(text);
    } catch (const json::parse_error& e) {
      throw WorkloadError("line " + std::to_string(line) + ": invalid JSON: " + e.what());
    }
    if (!obj.is_object()) throw WorkloadError("line " + std::to_string(line) + ": not an object");

    WorkItem item;
    item.query_id = take_uint(obj, "query_id", line);
    const bool has_docs = obj.contains("doc_ids");
    const bool has_emb = obj.contains("embedding");
    if (has_docs == has_emb) {
      throw WorkloadError(where(line, "doc_ids") + ": exactly one of doc_ids / embedding required");
    }
    if (has_docs) {
      const json& ids = obj.at("doc_ids");
      if (!ids.is_array() || ids.empty()) {
        throw WorkloadError(where(line, "doc_ids") + " must be a non-empty array");
      }
      for (const json& v : ids) {
        if (!v.is_number_unsigned()) {
          throw WorkloadError(where(line, "doc_ids") + " must hold non-negative integers");
        }
        item.doc_ids.push_back(v.get<DocId>());
      }
    } else {
      const json& emb = obj.at("embedding");
      if (!emb.is_array() || emb.empty()) {
        throw WorkloadError(where(line, "embedding") + " must be a non-empty array");
      }
      for (const json& v : emb) {
        if (!v.is_number()) throw WorkloadError(where(line, "embedding") + " must hold numbers");
        item.embedding.push_back(v.get<float>());
      }
    }
    item.q_tokens = obj.contains("q_tokens")
                        ? static_cast<std::uint32_t>(take_uint(obj, "q_tokens", line))
                        : tokens.q_tokens;
    if (item.q_tokens == 0) throw WorkloadError(where(line, "q_tokens") + " must be positive");
    if (obj.contains("doc_tokens")) {
      const json& dt = obj.at("doc_tokens");
      if (!dt.is_array()) throw WorkloadError(where(line, "doc_tokens") + " must be an array");
      for (const json& v : dt) {
        if (!v.is_number_unsigned() || v.get<std::uint64_t>() == 0) {
          throw WorkloadError(where(line, "doc_tokens") + " must hold positive integers");
        }
        item.doc_tokens.push_back(v.get<std::uint32_t>());
      }
      if (has_docs && item.doc_tokens.size() != item.doc_ids.size()) {
        throw WorkloadError(where(line, "doc_tokens") + " length " +
                            std::to_string(item.doc_tokens.size()) + " != doc_ids length " +
                            std::to_string(item.doc_ids.size()));
      }
    } else if (has_docs) {
      item.doc_tokens.assign(item.doc_ids.size(), tokens.doc_tokens);
    }
    items.push_back(std::move(item));
  }
  if (items.empty()) throw WorkloadError("no work items");
  return items;
}

std::vector<WorkItem> load_trace(const std::filesystem::path& path, TokenDefaults tokens) {
  std::ifstream in(path);
  if (!in) throw WorkloadError("cannot open trace " + path.string());
  try {
    return parse_trace(in, tokens);
  } catch (const WorkloadError& e) {
    throw WorkloadError(path.string() + ": " + e.what());
  }
}

void write_trace(std::ostream& os, const std::vector<WorkItem>& items) {
  for (const auto& it : items) {
    json obj;
    obj["query_id"] = it.query_id;
    if (it.resolved()) {
      obj["doc_ids"] = it.doc_ids;
    } else {
      obj["embedding"] = it.embedding;
    }
    obj["q_tokens"] = it.q_tokens;
    if (!it.doc_tokens.empty()) obj["doc_tokens"] = it.doc_tokens;
    os << obj.dump() << '\n';
  }
}

void save_trace(const std::filesystem::path& path, const std::vector<WorkItem>& items) {
  std::ofstream out(path);
  if (!out) throw WorkloadError("cannot write trace " + path.string());
  write_trace(out, items);
}

std::vector<double> poisson_arrivals(std::size_t n, double rate, std::uint64_t seed) {
  if (!(rate > 0.0)) throw std::invalid_argument("arrival rate must be positive");
  std::mt19937_64 rng(seed);
  std::vector<double> out(n);
  double t = 0.0;
  for (auto& a : out) {
    t += -std::log1p(-unit_draw(rng)) / rate;
    a = t;
  }
  return out;
}

std::vector<double> uniform_arrivals(std::size_t n, double rate) {
  if (!(rate > 0.0)) throw std::invalid_argument("arrival rate must be positive");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<double>(i + 1) / rate;
  return out;
}

std::vector<WorkItem> poissonize(std::vector<WorkItem> items, double rate, std::uint64_t seed) {
  const auto times = poisson_arrivals(items.size(), rate, seed);
  for (std::size_t i = 0; i < items.size(); ++i) items[i].arrival = times[i];
  return items;
}

}  // namespace ragdcache
