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

#include "ragdcache/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <queue>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "ragdcache/kv_store.hpp"
#include "ragdcache/lru.hpp"

namespace ragdcache {

const char* to_string(ArrivalProcess p) {
  return p == ArrivalProcess::kPoisson ? "poisson" : "uniform";
}

ArrivalProcess arrival_process_from_string(const std::string& s) {
  if (s == "poisson") return ArrivalProcess::kPoisson;
  if (s == "uniform") return ArrivalProcess::kUniform;
  throw std::invalid_argument("unknown arrival process '" + s + "'");
}

const char* to_string(CacheOrigin o) {
  switch (o) {
    case CacheOrigin::kMemoryHit: return "MemoryHit";
    case CacheOrigin::kDiskHit: return "DiskHit";
    case CacheOrigin::kGenerated: return "Generated";
    case CacheOrigin::kMissRaw: return "MissRaw";
  }
  return "?";
}

std::vector<DeviceProfile> SimConfig::inference_devices() const {
  std::vector<DeviceProfile> out;
  for (const auto& d : devices) {
    if (d.kind == DeviceKind::kInferenceGpu) out.push_back(d);
  }
  return out;
}

std::optional<DeviceProfile> SimConfig::generator() const {
  return assign_device(configuration, devices);
}

void SimConfig::validate() const {
  cost.validate();
  std::size_t gpus = 0, gens = 0, cpus = 0;
  for (const auto& d : devices) {
    d.validate();
    switch (d.kind) {
      case DeviceKind::kInferenceGpu: ++gpus; break;
      case DeviceKind::kGeneratorGpu: ++gens; break;
      case DeviceKind::kCpu: ++cpus; break;
    }
  }
  auto need = [&](bool ok, const char* what) {
    if (!ok) {
      throw std::invalid_argument(std::string("configuration ") + to_string(configuration) +
                                  " requires " + what);
    }
  };
  switch (configuration) {
    case Configuration::kBaseline:
      need(gpus == 2 && gens == 0 && cpus == 0, "exactly 2 inference GPUs and no generator");
      break;
    case Configuration::kA:
      need(gpus == 1 && gens == 1 && cpus == 0, "1 inference GPU and 1 generator GPU");
      break;
    case Configuration::kB:
      need(gpus == 2 && gens == 0 && cpus >= 1, "2 inference GPUs and a CPU generator");
      break;
    case Configuration::kSingleInstance:
      need(gpus == 1 && gens == 0 && cpus == 0, "exactly 1 inference GPU");
      break;
  }
  if (k == 0) throw std::invalid_argument("k must be at least 1");
  if (tries == 0) throw std::invalid_argument("tries must be at least 1");
  if (!(arrival.rate > 0.0)) throw std::invalid_argument("arrival rate must be positive");
  if (!(threshold >= 0.0)) throw std::invalid_argument("threshold must be non-negative");
  if (batch_size < 1 || batch_size > 32) throw std::invalid_argument("batch_size must be in 1..32");
}

std::vector<DeviceProfile> make_devices(Configuration config, const TopologyRates& rates) {
  const DeviceProfile gpu0{"gpu0", DeviceKind::kInferenceGpu, rates.gpu_rate, 1};
  const DeviceProfile gpu1{"gpu1", DeviceKind::kInferenceGpu, rates.gpu_rate, 1};
  switch (config) {
    case Configuration::kBaseline: return {gpu0, gpu1};
    case Configuration::kA:
      return {gpu0, DeviceProfile{"gpu1", DeviceKind::kGeneratorGpu, rates.generator_gpu_rate, 1}};
    case Configuration::kB:
      return {gpu0, gpu1, DeviceProfile{"cpu", DeviceKind::kCpu, rates.cpu_rate, 1}};
    case Configuration::kSingleInstance: return {gpu0};
  }
  return {};
}

namespace {

enum class EventKind { kArrival, kServiceDone, kFlagCheck, kGenDone };

struct Event {
  double time;
  std::uint64_t seq;
  EventKind kind;
  std::size_t a;  // query slot, instance or generator slot
  std::size_t b;  // task index for kGenDone

  bool operator>(const Event& o) const {
    return time != o.time ? time > o.time : seq > o.seq;
  }
};

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Nearest-rank percentile.
double percentile_of(std::vector<double> v, double p) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(v.size())));
  return v[std::clamp<std::size_t>(rank, 1, v.size()) - 1];
}

void fill_stats(TryMetrics& m, const std::vector<const QueryRecord*>& recs) {
  std::vector<double> lat, ttft, wait, load, pre;
  for (const auto* r : recs) {
    lat.push_back(r->latency());
    ttft.push_back(r->ttft());
    wait.push_back(r->queue_wait);
    load.push_back(r->kv_load);
    pre.push_back(r->prefill);
    for (auto o : r->origins) {
      if (o == CacheOrigin::kMemoryHit) ++m.memory_hits;
      if (o == CacheOrigin::kDiskHit || o == CacheOrigin::kGenerated) ++m.disk_hits;
    }
  }
  m.completed = recs.size();
  m.mean_latency = mean_of(lat);
  m.median_latency = median_of(lat);
  m.p95_latency = percentile_of(lat, 0.95);
  m.ttft_mean = mean_of(ttft);
  m.mean_queue_wait = mean_of(wait);
  m.mean_kv_load = mean_of(load);
  m.mean_prefill = mean_of(pre);
  if (m.lookups > 0) {
    m.memory_hit_ratio = static_cast<double>(m.memory_hits) / static_cast<double>(m.lookups);
    m.disk_hit_ratio = static_cast<double>(m.disk_hits) / static_cast<double>(m.lookups);
  }
  m.throughput = m.makespan > 0.0 ? static_cast<double>(m.completed) / m.makespan : 0.0;
}

// Fisher-Yates with our own draw so the order does not depend on the
// standard library's shuffle.
std::vector<std::size_t> try_order(std::size_t n, std::uint64_t seed, std::uint32_t try_index) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::mt19937_64 rng(splitmix64(seed ^ (0x7472790000000000ULL + try_index)));
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(unit_draw(rng) * static_cast<double>(i));
    std::swap(order[i - 1], order[std::min(j, i - 1)]);
  }
  return order;
}

struct Unit {};

// Cache state shared by all instances, carried across tries.
struct SimCache {
  std::unordered_set<KvKey, KvKeyHash> on_disk;
  ByteLru<KvKey, Unit, KvKeyHash> memory;
  // Key -> (try, query) whose prefetch produced it.
  std::unordered_map<KvKey, std::pair<std::uint32_t, std::uint64_t>, KvKeyHash> produced_for;
};

class MultiInstanceSim {
 public:
  MultiInstanceSim(const SimConfig& cfg, const std::vector<WorkItem>& items)
      : cfg_(cfg), items_(items), model_hash_(cfg.cost.model.hash()) {
    for (const auto& d : cfg.inference_devices()) {
      for (std::uint32_t c = 0; c < d.concurrency; ++c) instances_.push_back(d);
    }
    if (auto g = cfg.generator()) {
      for (std::uint32_t c = 0; c < g->concurrency; ++c) gen_slots_.push_back(*g);
    }
    cache_.memory.set_capacity(cfg.memory_capacity_bytes);
    lookups_enabled_ = cfg.configuration != Configuration::kBaseline;
    arrivals_ = cfg.arrival.process == ArrivalProcess::kPoisson
                    ? poisson_arrivals(items.size(), cfg.arrival.rate, cfg.seed)
                    : uniform_arrivals(items.size(), cfg.arrival.rate);
  }

  SimResult run() {
    SimResult result;
    std::vector<double> makespans;
    for (std::uint32_t t = 0; t < cfg_.tries; ++t) {
      TryMetrics m = run_try(t, result.records);
      makespans.push_back(m.makespan);
      result.metrics.tries.push_back(m);
    }
    TryMetrics& all = result.metrics.overall;
    for (const auto& m : result.metrics.tries) {
      all.makespan += m.makespan;
      all.lookups += m.lookups;
      all.generation_tasks += m.generation_tasks;
    }
    std::vector<const QueryRecord*> recs;
    for (const auto& r : result.records) recs.push_back(&r);
    fill_stats(all, recs);
    return result;
  }

 private:
  struct Slot {
    const WorkItem* item = nullptr;
    double arrival = 0.0;
    bool dispatched = false;
    bool flagged = false;
    std::vector<KvKey> waiting_on;  // keys queued for this query
  };

  struct Task {
    KvKey key;
    std::uint32_t tokens = 0;
    std::uint64_t query_id = 0;
  };

  void push(double time, EventKind kind, std::size_t a, std::size_t b = 0) {
    events_.push(Event{time, seq_++, kind, a, b});
  }

  bool cache_has(const KvKey& k) const { return cache_.on_disk.contains(k); }

  TryMetrics run_try(std::uint32_t t, std::vector<QueryRecord>& out) {
    try_index_ = t;
    const auto order = try_order(items_.size(), cfg_.seed, t);
    slots_.assign(items_.size(), Slot{});
    for (std::size_t j = 0; j < items_.size(); ++j) {
      slots_[j].item = &items_[order[j]];
      slots_[j].arrival = arrivals_[j];
      push(arrivals_[j], EventKind::kArrival, j);
    }
    busy_.assign(instances_.size(), false);
    gen_busy_.assign(gen_slots_.size(), false);
    queue_.clear();
    gen_fifo_.clear();
    tasks_.clear();
    lookups_ = 0;
    gen_tasks_ = 0;
    const std::size_t first_record = out.size();
    records_ = &out;

    while (!events_.empty()) {
      const Event ev = events_.top();
      events_.pop();
      now_ = ev.time;
      switch (ev.kind) {
        case EventKind::kArrival:
          queue_.push_back(ev.a);
          if (!gen_slots_.empty()) push(slots_[ev.a].arrival + cfg_.threshold, EventKind::kFlagCheck, ev.a);
          break;
        case EventKind::kServiceDone: busy_[ev.a] = false; break;
        case EventKind::kFlagCheck: on_flag(ev.a); break;
        case EventKind::kGenDone: on_gen_done(ev.a, ev.b); break;
      }
      dispatch_ready();
      start_generation();
    }

    TryMetrics m;
    m.try_index = t;
    std::vector<const QueryRecord*> recs;
    for (std::size_t i = first_record; i < out.size(); ++i) {
      recs.push_back(&out[i]);
      m.makespan = std::max(m.makespan, out[i].first_token);
    }
    m.lookups = lookups_;
    m.generation_tasks = gen_tasks_;
    fill_stats(m, recs);
    return m;
  }

  void on_flag(std::size_t j) {
    Slot& s = slots_[j];
    if (s.dispatched || s.flagged) return;
    s.flagged = true;
    const WorkItem& it = *s.item;
    for (auto& rk : required_keys(model_hash_, it.doc_ids, it.doc_tokens, cfg_.granularity)) {
      s.waiting_on.push_back(rk.key);
      if (++waiting_count_[rk.key] > 1 || cache_has(rk.key) || claimed_.contains(rk.key)) continue;
      claimed_.insert(rk.key);
      tasks_.push_back(Task{rk.key, rk.tokens, it.query_id});
      gen_fifo_.push_back(tasks_.size() - 1);
    }
  }

  void start_generation() {
    for (std::size_t g = 0; g < gen_slots_.size(); ++g) {
      if (gen_busy_[g]) continue;
      while (!gen_fifo_.empty()) {
        const std::size_t ti = gen_fifo_.front();
        gen_fifo_.pop_front();
        const Task& task = tasks_[ti];
        // Nobody queued still needs it.
        if (waiting_count_[task.key] == 0) {
          claimed_.erase(task.key);
          continue;
        }
        gen_busy_[g] = true;
        ++gen_tasks_;
        push(now_ + generation_time(cfg_.cost, gen_slots_[g], task.tokens), EventKind::kGenDone, g,
             ti);
        break;
      }
    }
  }

  void on_gen_done(std::size_t g, std::size_t ti) {
    gen_busy_[g] = false;
    const Task& task = tasks_[ti];
    cache_.on_disk.insert(task.key);
    cache_.memory.insert(task.key, Unit{},
                         cache_file_bytes(cfg_.cost.model, task.tokens, task.key.doc_ids.size()));
    cache_.produced_for[task.key] = {try_index_, task.query_id};
    claimed_.erase(task.key);
  }

  void dispatch_ready() {
    for (std::size_t i = 0; i < instances_.size() && !queue_.empty(); ++i) {
      if (busy_[i]) continue;
      const std::size_t j = queue_.front();
      queue_.pop_front();
      dispatch(j, i);
    }
  }

  void dispatch(std::size_t j, std::size_t inst) {
    Slot& s = slots_[j];
    s.dispatched = true;
    for (const auto& k : s.waiting_on) --waiting_count_[k];

    const WorkItem& it = *s.item;
    const ModelProfile& model = cfg_.cost.model;
    QueryRecord rec;
    rec.query_id = it.query_id;
    rec.try_index = try_index_;
    rec.instance = static_cast<std::uint32_t>(inst);
    rec.arrival = s.arrival;
    rec.dispatch = now_;
    rec.queue_wait = now_ - s.arrival;

    std::uint64_t n_new = it.q_tokens;
    std::uint64_t n_cached = 0;
    for (const auto& rk : required_keys(model_hash_, it.doc_ids, it.doc_tokens, cfg_.granularity)) {
      if (!lookups_enabled_) {
        rec.origins.push_back(CacheOrigin::kMissRaw);
        n_new += rk.tokens;
        continue;
      }
      ++lookups_;
      const std::uint64_t bytes = cache_file_bytes(model, rk.tokens, rk.key.doc_ids.size());
      if (cache_.memory.touch(rk.key) != nullptr) {
        rec.origins.push_back(CacheOrigin::kMemoryHit);
        rec.kv_load += load_time(bytes, Tier::kMemory, cfg_.cost);
        n_cached += rk.tokens;
      } else if (cache_has(rk.key)) {
        auto pf = cache_.produced_for.find(rk.key);
        const bool mine = pf != cache_.produced_for.end() && pf->second.first == try_index_ &&
                          pf->second.second == it.query_id;
        rec.origins.push_back(mine ? CacheOrigin::kGenerated : CacheOrigin::kDiskHit);
        rec.kv_load += load_time(bytes, Tier::kDisk, cfg_.cost);
        cache_.memory.insert(rk.key, Unit{}, bytes);
        n_cached += rk.tokens;
      } else {
        rec.origins.push_back(CacheOrigin::kMissRaw);
        n_new += rk.tokens;
      }
    }
    rec.prefill = cached_prefill_work(model, n_new, n_cached) / instances_[inst].compute_rate;
    rec.network = cfg_.cost.network_delay;
    const double done = now_ + rec.kv_load + rec.prefill;
    rec.first_token = done + rec.network;
    busy_[inst] = true;
    push(done, EventKind::kServiceDone, inst);
    records_->push_back(std::move(rec));
  }

  const SimConfig& cfg_;
  const std::vector<WorkItem>& items_;
  const std::uint64_t model_hash_;
  std::vector<DeviceProfile> instances_;
  std::vector<DeviceProfile> gen_slots_;
  std::vector<double> arrivals_;
  bool lookups_enabled_ = false;
  SimCache cache_;

  std::priority_queue<Event, std::vector<Event>, std::greater<>> events_;
  std::uint64_t seq_ = 0;
  double now_ = 0.0;
  std::uint32_t try_index_ = 0;
  std::vector<Slot> slots_;
  std::deque<std::size_t> queue_;
  std::vector<bool> busy_;
  std::vector<bool> gen_busy_;
  std::vector<Task> tasks_;
  std::deque<std::size_t> gen_fifo_;
  std::unordered_set<KvKey, KvKeyHash> claimed_;
  std::unordered_map<KvKey, std::uint32_t, KvKeyHash> waiting_count_;
  std::uint64_t lookups_ = 0;
  std::uint64_t gen_tasks_ = 0;
  std::vector<QueryRecord>* records_ = nullptr;
};

void check_items(const std::vector<WorkItem>& items) {
  if (items.empty()) throw std::invalid_argument("workload is empty");
  for (const auto& it : items) {
    if (!it.resolved()) {
      throw std::invalid_argument("work item " + std::to_string(it.query_id) +
                                  " has no resolved doc ids");
    }
    if (it.doc_tokens.size() != it.doc_ids.size()) {
      throw std::invalid_argument("work item " + std::to_string(it.query_id) +
                                  " has mismatched doc_tokens");
    }
  }
}

}  // namespace

SimResult run(const SimConfig& config, const std::vector<WorkItem>& items) {
  config.validate();
  check_items(items);
  return MultiInstanceSim(config, items).run();
}

std::vector<WorkItem> resolve_items(const FlatIndex& index, std::vector<WorkItem> items,
                                    std::uint32_t k) {
  for (auto& it : items) {
    if (it.resolved()) continue;
    for (const auto& hit : index.search(it.embedding, k)) {
      it.doc_ids.push_back(hit.doc_id);
      it.doc_tokens.push_back(index.token_count(hit.doc_id));
    }
    it.embedding.clear();
  }
  return items;
}

SingleInstanceResult run_single_instance(const SimConfig& config,
                                         const std::vector<WorkItem>& items,
                                         KvStore* real_store) {
  config.validate();
  if (config.configuration != Configuration::kSingleInstance) {
    throw std::invalid_argument("run_single_instance needs the SingleInstance configuration");
  }
  check_items(items);

  const ModelProfile& model = config.cost.model;
  const std::uint64_t model_hash = model.hash();
  const DeviceProfile gpu = config.inference_devices().front();
  ByteLru<KvKey, Unit, KvKeyHash> memory(config.memory_capacity_bytes);

  SingleInstanceResult out;
  SingleInstanceCell& cell = out.cell;
  cell.model_id = model.model_id;
  cell.batch_size = config.batch_size;
  cell.cache_enabled = config.cache_enabled;
  cell.decode_per_batch = config.cost.decode_enabled
                              ? config.cost.decode_seconds_per_token * config.cost.answer_tokens
                              : 0.0;

  if (real_store != nullptr && config.cache_enabled) {
    for (const auto& it : items) {
      for (const auto& rk : required_keys(model_hash, it.doc_ids, it.doc_tokens,
                                          config.granularity)) {
        if (real_store->contains(rk.key) == Residency::kAbsent) {
          real_store->put(rk.key, synth_blob(model, rk.key.doc_ids, rk.tokens, config.seed));
        }
      }
    }
  }

  double clock = 0.0;
  for (std::size_t start = 0; start < items.size(); start += config.batch_size) {
    const std::size_t end = std::min(items.size(), start + config.batch_size);
    double batch_load = 0.0;
    double batch_work = 0.0;
    const std::size_t first = out.records.size();
    for (std::size_t i = start; i < end; ++i) {
      const WorkItem& it = items[i];
      QueryRecord rec;
      rec.query_id = it.query_id;
      rec.dispatch = clock;
      std::uint64_t n_new = it.q_tokens;
      std::uint64_t n_cached = 0;
      double load = 0.0;
      for (const auto& rk : required_keys(model_hash, it.doc_ids, it.doc_tokens,
                                          config.granularity)) {
        if (!config.cache_enabled) {
          rec.origins.push_back(CacheOrigin::kMissRaw);
          n_new += rk.tokens;
          continue;
        }
        const std::uint64_t bytes = cache_file_bytes(model, rk.tokens, rk.key.doc_ids.size());
        if (real_store != nullptr) {
          const auto t0 = std::chrono::steady_clock::now();
          const LookupResult r = real_store->get(rk.key);
          load += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
          if (r.outcome == LookupOutcome::kMiss) {
            rec.origins.push_back(CacheOrigin::kMissRaw);
            n_new += rk.tokens;
            ++cell.misses;
            continue;
          }
          const bool mem = r.outcome == LookupOutcome::kMemoryHit;
          rec.origins.push_back(mem ? CacheOrigin::kMemoryHit : CacheOrigin::kDiskHit);
          ++(mem ? cell.memory_hits : cell.disk_hits);
        } else if (memory.touch(rk.key) != nullptr) {
          rec.origins.push_back(CacheOrigin::kMemoryHit);
          load += load_time(bytes, Tier::kMemory, config.cost);
          ++cell.memory_hits;
        } else {
          rec.origins.push_back(CacheOrigin::kDiskHit);
          load += load_time(bytes, Tier::kDisk, config.cost);
          memory.insert(rk.key, Unit{}, bytes);
          ++cell.disk_hits;
        }
        n_cached += rk.tokens;
      }
      const double work = cached_prefill_work(model, n_new, n_cached);
      if (n_cached > 0) {
        ++cell.hit_path_queries;
        const double full = prefill_work(model, n_new + n_cached) / gpu.compute_rate;
        if (load + work / gpu.compute_rate < full) ++cell.hit_path_faster;
      }
      rec.kv_load = load;
      rec.prefill = work / gpu.compute_rate;
      batch_load += load;
      batch_work += work;
      out.records.push_back(std::move(rec));
    }
    const double batch_prefill = batch_work / gpu.compute_rate;
    const double first_token = clock + batch_load + batch_prefill;
    for (std::size_t r = first; r < out.records.size(); ++r) {
      QueryRecord& rec = out.records[r];
      // Every member sees the whole batch's load and prefill before its
      // first token.
      rec.kv_load = batch_load;
      rec.prefill = batch_prefill;
      rec.first_token = first_token;
    }
    clock = first_token + cell.decode_per_batch;
  }

  cell.queries = items.size();
  cell.total_time = clock;
  cell.throughput = static_cast<double>(cell.queries) / clock;
  std::vector<double> ttft, load, pre;
  for (const auto& r : out.records) {
    ttft.push_back(r.ttft());
    load.push_back(r.kv_load);
    pre.push_back(r.prefill);
  }
  cell.ttft_mean = mean_of(ttft);
  cell.kv_load_mean = mean_of(load);
  cell.prefill_mean = mean_of(pre);
  return out;
}

std::vector<SweepRow> sweep_rate(const SimConfig& config, const std::vector<WorkItem>& items,
                                 const std::vector<double>& rates) {
  if (rates.empty()) throw std::invalid_argument("sweep_rate: no rates");
  if (!std::is_sorted(rates.begin(), rates.end())) {
    throw std::invalid_argument("sweep_rate: rates must be ascending");
  }
  std::vector<SweepRow> rows;
  for (double rate : rates) {
    SimConfig c = config;
    c.arrival.rate = rate;
    const SimResult r = run(c, items);
    SweepRow row;
    row.rate = rate;
    row.throughput = r.metrics.overall.throughput;
    row.mean_latency = r.metrics.overall.mean_latency;
    row.mean_queue_wait = r.metrics.overall.mean_queue_wait;
    row.mean_processing = r.metrics.overall.ttft_mean;
    row.mean_network = c.cost.network_delay;
    const double total = row.mean_queue_wait + row.mean_processing + row.mean_network;
    if (total > 0.0) {
      row.queue_share = row.mean_queue_wait / total;
      row.processing_share = row.mean_processing / total;
      row.network_share = row.mean_network / total;
    }
    rows.push_back(row);
  }
  return rows;
}

double service_capacity(const SimResult& result, std::size_t instances) {
  double busy = 0.0;
  for (const auto& r : result.records) busy += r.kv_load + r.prefill;
  if (busy <= 0.0) return 0.0;
  return static_cast<double>(result.records.size()) * static_cast<double>(instances) / busy;
}

}  // namespace ragdcache
