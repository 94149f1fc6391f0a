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

// Acceptance runner: one PASS/FAIL line per criterion. `--only N` runs a
// single criterion; the exit status is nonzero if any selected one fails.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "../tools/commands.hpp"
#include "oracles.hpp"
#include "ragdcache/config.hpp"
#include "ragdcache/lru.hpp"
#include "ragdcache/report.hpp"
#include "ragdcache/scenarios.hpp"
#include "wire_harness.hpp"

namespace {

using namespace ragdcache;
namespace fs = std::filesystem;

// Tolerances and sizes.
constexpr int kCodecBlobs = 1000;
constexpr int kCodecStoreFlips = 200;
constexpr int kLruSteps = 10000;
constexpr int kLruSequences = 5;
constexpr int kDedupThreads = 64;
constexpr int kDedupKeys = 8;
constexpr int kDedupReps = 100;
constexpr int kIndexCases = 200;
constexpr int kWireOps = 600;
constexpr int kFuzzRounds = 400;
constexpr double kUpliftLow = 0.08;
constexpr double kUpliftHigh = 0.25;
constexpr double kHitPathFasterShare = 0.95;
constexpr double kSharedRate = 40.0;
constexpr std::uint64_t kSharedQueries = 1000;
constexpr std::uint32_t kSharedTries = 3;
const std::vector<std::uint64_t> kSharedSeeds = {1, 2, 3};
constexpr double kProcessingShareAtLowRate = 0.70;
const std::vector<double> kSweepRates = {2, 5, 10, 15, 20, 25, 30, 35, 40, 50, 60, 80};
constexpr double kCoverageTarget = 0.031;
constexpr double kCoverageTol = 0.01;

// Runtime limits, seconds.
const std::map<int, double> kLimit = {{1, 10},  {2, 10},  {3, 30},  {4, 5},   {5, 60},  {6, 60},
                                      {7, 60},  {8, 300}, {9, 300}, {10, 60}, {11, 30}, {12, 300}};

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int prec = 4) {
  std::ostringstream os;
  os << std::setprecision(prec) << v;
  return os.str();
}

std::string pct(double v) { return fmt(v * 100.0, 4) + "%"; }

PaperConfig paper() { return load_config(RAGDCACHE_PAPER_CONFIG); }

// ------------------------------------------------------------------ 1 codec

Verdict codec() {
  std::mt19937_64 rng(1001);
  int roundtrip_ok = 0, flips = 0, flips_caught = 0, cuts = 0, cuts_caught = 0;
  for (int i = 0; i < kCodecBlobs; ++i) {
    const ModelProfile m = oracle::random_profile(rng);
    const DocIds ids = oracle::random_doc_ids(rng);
    const auto tokens = static_cast<std::uint32_t>(1 + rng() % 6);
    const KvBlob blob = synth_blob(m, ids, tokens, rng());
    const Bytes enc = encode(blob);
    if (enc == oracle::encode_blob(blob) && decode(enc) == blob) ++roundtrip_ok;

    // One byte flip outside the identity fields (model hash, doc ids),
    // which the format cannot self-check; those are covered through the
    // store below.
    const std::size_t ids_end = 16 + 8 * ids.size();
    std::size_t pos;
    do {
      pos = rng() % enc.size();
    } while ((pos >= 6 && pos < 14) || (pos >= 16 && pos < ids_end));
    Bytes bad = enc;
    bad[pos] ^= static_cast<std::uint8_t>(1 + rng() % 255);
    ++flips;
    try {
      decode(bad);
    } catch (const CodecError&) {
      ++flips_caught;
    }

    Bytes cut(enc.begin(), enc.begin() + static_cast<std::ptrdiff_t>(rng() % enc.size()));
    ++cuts;
    try {
      decode(cut);
    } catch (const CodecError&) {
      ++cuts_caught;
    }
  }

  // Identity-field flips: a store read must refuse a file whose header
  // names a different key.
  const fs::path dir = oracle::temp_dir("accept-codec");
  int id_flips = 0, id_caught = 0;
  {
    KvStore store(dir);
    for (int i = 0; i < kCodecStoreFlips; ++i) {
      const ModelProfile m = oracle::random_profile(rng);
      const DocIds ids{static_cast<DocId>(i)};
      const KvKey key{m.hash(), ids};
      store.put(key, synth_blob(m, ids, 1, rng()));
      const fs::path p = store.path_for(key);
      std::ifstream in(p, std::ios::binary);
      Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      in.close();
      const std::size_t pos = rng() % 2 == 0 ? 6 + rng() % 8 : 16 + rng() % 8;
      data[pos] ^= static_cast<std::uint8_t>(1 + rng() % 255);
      std::ofstream(p, std::ios::binary | std::ios::trunc)
          .write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
      ++id_flips;
      try {
        store.get(key);
      } catch (const StoreError& e) {
        if (e.kind() == StoreErrorKind::kCorrupt) ++id_caught;
      }
    }
  }
  fs::remove_all(dir);

  Verdict v;
  v.pass = roundtrip_ok == kCodecBlobs && flips_caught == flips && cuts_caught == cuts &&
           id_caught == id_flips;
  v.detail = "roundtrip " + std::to_string(roundtrip_ok) + "/" + std::to_string(kCodecBlobs) +
             ", flips " + std::to_string(flips_caught) + "/" + std::to_string(flips) +
             ", truncations " + std::to_string(cuts_caught) + "/" + std::to_string(cuts) +
             ", identity flips via store " + std::to_string(id_caught) + "/" + std::to_string(id_flips);
  return v;
}

// -------------------------------------------------------------------- 2 lru

Verdict lru() {
  std::mt19937_64 rng(2002);
  int matched = 0;
  std::string first_diff;
  for (int seq = 0; seq < kLruSequences; ++seq) {
    const std::uint64_t cap = 100 + rng() % 2000;
    const int universe = 20 + static_cast<int>(rng() % 200);
    std::vector<std::uint64_t> size_of(static_cast<std::size_t>(universe));
    for (auto& s : size_of) s = 1 + rng() % (cap / 4 + 10);
    ByteLru<int, int> lru(cap);
    oracle::RefLru ref(cap);
    std::uint64_t evictions = 0;
    bool ok = true;
    for (int step = 0; step < kLruSteps && ok; ++step) {
      const int key = static_cast<int>(rng() % static_cast<std::uint64_t>(universe));
      const bool ref_hit = ref.access(key, size_of[key]);
      const bool hit = lru.touch(key) != nullptr;
      if (!hit) evictions += lru.insert(key, key, size_of[key]).size();
      if (hit != ref_hit || lru.keys_mru_first() != ref.keys()) {
        ok = false;
        first_diff = "sequence " + std::to_string(seq) + " step " + std::to_string(step);
      }
    }
    if (ok && (evictions != ref.evictions() || lru.used_bytes() != ref.used())) {
      ok = false;
      first_diff = "sequence " + std::to_string(seq) + " eviction count";
    }
    if (ok) ++matched;
  }
  Verdict v;
  v.pass = matched == kLruSequences;
  v.detail = std::to_string(matched) + "/" + std::to_string(kLruSequences) + " sequences of " +
             std::to_string(kLruSteps) + " steps match resident set and evictions";
  if (!first_diff.empty()) v.detail += "; first divergence at " + first_diff;
  return v;
}

// ------------------------------------------------------------------ 3 dedup

Verdict dedup() {
  ModelProfile m = harness::small_profile();
  int good_reps = 0;
  std::string failure;
  for (int rep = 0; rep < kDedupReps; ++rep) {
    const fs::path dir = oracle::temp_dir("accept-dedup");
    {
      KvStore store(dir, 1 << 20);
      SharedCacheService svc(store);
      std::vector<std::atomic<int>> calls(kDedupKeys);
      std::vector<Bytes> got(kDedupThreads);
      std::atomic<int> errors{0};
      std::atomic<bool> go{false};
      std::vector<std::thread> threads;
      for (int t = 0; t < kDedupThreads; ++t) {
        threads.emplace_back([&, t] {
          const int k = t % kDedupKeys;
          const DocIds ids{static_cast<DocId>(rep * 100 + k)};
          while (!go.load()) std::this_thread::yield();
          try {
            const auto r = svc.get_or_generate(KvKey{m.hash(), ids}, [&] {
              ++calls[k];
              std::this_thread::sleep_for(std::chrono::microseconds(500));
              return synth_blob(m, ids, 2, static_cast<std::uint64_t>(rep));
            });
            got[t] = encode(*r.blob);
          } catch (const std::exception&) {
            ++errors;
          }
        });
      }
      go = true;
      for (auto& th : threads) th.join();
      bool ok = errors == 0;
      for (int k = 0; k < kDedupKeys; ++k) ok = ok && calls[k] == 1;
      for (int t = kDedupKeys; t < kDedupThreads; ++t) ok = ok && got[t] == got[t % kDedupKeys];
      if (ok) {
        ++good_reps;
      } else if (failure.empty()) {
        int total = 0;
        for (auto& c : calls) total += c;
        failure = "rep " + std::to_string(rep) + ": " + std::to_string(total) + " generator calls";
      }
    }
    fs::remove_all(dir);
  }
  Verdict v;
  v.pass = good_reps == kDedupReps;
  v.detail = std::to_string(good_reps) + "/" + std::to_string(kDedupReps) + " repetitions with exactly " +
             std::to_string(kDedupKeys) + " generations and identical blobs";
  if (!failure.empty()) v.detail += "; " + failure;
  return v;
}

// ------------------------------------------------------------------ 4 index

Verdict index_oracle() {
  std::mt19937_64 rng(4004);
  std::normal_distribution<float> g;
  int matched = 0;
  for (int c = 0; c < kIndexCases; ++c) {
    const std::size_t dim = 1 + rng() % 48;
    const std::size_t n = 1 + rng() % 400;
    const std::size_t k = 1 + rng() % (n + 5);
    FlatIndex idx(dim);
    std::vector<std::vector<float>> rows;
    std::vector<DocId> ids;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<float> row(dim);
      // Some exact duplicates to exercise the id tie-break.
      if (!rows.empty() && rng() % 5 == 0) {
        row = rows[rng() % rows.size()];
      } else {
        for (auto& x : row) x = g(rng);
      }
      const DocId id = i * 7 + rng() % 7;
      rows.push_back(row);
      ids.push_back(id);
      idx.add(DocChunk{id, "", 1, row});
    }
    std::vector<float> q(dim);
    for (auto& x : q) x = g(rng);
    const auto want = oracle::exhaustive_top_k(rows, ids, q, k);
    const auto got = idx.search(q, k);
    const auto got_serial = idx.search_serial(q, k);
    bool ok = got.size() == want.size() && got_serial.size() == want.size();
    for (std::size_t i = 0; ok && i < want.size(); ++i) {
      ok = got[i].doc_id == want[i].id && got[i].score == want[i].score &&
           got_serial[i].doc_id == want[i].id && got_serial[i].score == want[i].score;
    }
    if (ok) ++matched;
  }
  return {matched == kIndexCases,
          std::to_string(matched) + "/" + std::to_string(kIndexCases) + " cases match exhaustive scan"};
}

// ------------------------------------------------------------------- 5 wire

Verdict wire_equivalence() {
  const fs::path dir = oracle::temp_dir("accept-wire");
  int steps = 0;
  std::string why;
  harness::FuzzOutcome fuzz;
  {
    KvStore local(dir / "local", 600);
    KvStore remote(dir / "remote", 600);
    CacheServer server(remote);
    server.start("127.0.0.1", 0);
    {
      CacheClient client("127.0.0.1", server.port());
      harness::EquivalenceRun run(local, client, 5005);
      while (steps < kWireOps && run.step(why)) ++steps;
    }
    fuzz = harness::fuzz_server(server.port(), 5006, kFuzzRounds);
    server.stop();
  }
  fs::remove_all(dir);
  Verdict v;
  v.pass = steps == kWireOps && fuzz.alive_after;
  v.detail = std::to_string(steps) + "/" + std::to_string(kWireOps) + " ops equivalent; fuzz " +
             std::to_string(fuzz.frames) + " frames, " + std::to_string(fuzz.error_replies) +
             " error replies, server " + (fuzz.alive_after ? "alive" : "DEAD");
  if (steps < kWireOps) v.detail += "; divergence: " + why;
  return v;
}

// ------------------------------------------------------- 6, 7 single-instance

struct SingleData {
  std::vector<SingleInstanceCell> cells;
  std::vector<ModelUplift> rows;
};

const SingleData& single_data() {
  static std::optional<SingleData> data;
  if (!data) {
    const PaperConfig cfg = paper();
    SingleData d;
    d.cells = run_single_matrix(cfg, make_workload(cfg, 1, cfg.workload.seed));
    d.rows = summarize_uplift(d.cells);
    data = std::move(d);
  }
  return *data;
}

Verdict single_uplift() {
  const auto& rows = single_data().rows;
  bool in_band = rows.size() == 3;
  bool monotone = true;
  std::string detail;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    in_band = in_band && rows[i].uplift >= kUpliftLow && rows[i].uplift <= kUpliftHigh;
    if (i > 0) monotone = monotone && rows[i].uplift >= rows[i - 1].uplift;
    detail += (i ? ", " : "") + rows[i].model_id + " " + pct(rows[i].uplift);
  }
  detail += "; band [" + pct(kUpliftLow) + ", " + pct(kUpliftHigh) + "]" +
            (monotone ? ", nondecreasing" : ", NOT nondecreasing") +
            "; mean " + pct(mean_uplift(rows));
  return {in_band && monotone, detail};
}

Verdict ttft_decomposition() {
  bool ok = true;
  double worst = 1.0;
  std::size_t runs = 0;
  for (const auto& c : single_data().cells) {
    if (!c.cache_enabled) continue;
    ++runs;
    const double share =
        c.hit_path_queries == 0 ? 1.0 : double(c.hit_path_faster) / double(c.hit_path_queries);
    worst = std::min(worst, share);
    ok = ok && c.hit_path_queries > 0 && share >= kHitPathFasterShare;
  }
  return {ok && runs > 0, std::to_string(runs) + " cache-enabled runs; lowest share of hit-path queries "
                              "with load + cached prefill < full prefill " + pct(worst) +
                              " (need >= " + pct(kHitPathFasterShare) + ")"};
}

// ----------------------------------------------------- 8, 9, 12 shared runs

struct SharedKey {
  Configuration conf;
  std::uint32_t k;
  std::uint64_t seed;
  bool operator<(const SharedKey& o) const {
    return std::tie(conf, k, seed) < std::tie(o.conf, o.k, o.seed);
  }
};

SimConfig shared_config(const PaperConfig& cfg, Configuration conf, std::uint32_t k, std::uint64_t seed) {
  SimConfig sc = make_shared_config(cfg, conf, k, seed);
  sc.arrival.rate = kSharedRate;
  sc.tries = kSharedTries;
  return sc;
}

PaperConfig shared_paper() {
  PaperConfig cfg = paper();
  cfg.workload.n_queries = kSharedQueries;
  return cfg;
}

const std::map<SharedKey, MetricsReport>& shared_runs() {
  static std::optional<std::map<SharedKey, MetricsReport>> runs;
  if (!runs) {
    const PaperConfig cfg = shared_paper();
    runs.emplace();
    for (auto seed : kSharedSeeds) {
      for (std::uint32_t k : {1u, 2u}) {
        const auto items = make_workload(cfg, k, seed);
        for (auto conf : {Configuration::kBaseline, Configuration::kA, Configuration::kB}) {
          (*runs)[{conf, k, seed}] = run(shared_config(cfg, conf, k, seed), items).metrics;
        }
      }
    }
  }
  return *runs;
}

Verdict configuration_ordering() {
  const auto& runs = shared_runs();
  bool ok = true;
  std::string detail;
  for (auto seed : kSharedSeeds) {
    for (std::uint32_t k : {1u, 2u}) {
      const auto& base = runs.at({Configuration::kBaseline, k, seed}).overall;
      const auto& a = runs.at({Configuration::kA, k, seed}).overall;
      const auto& b = runs.at({Configuration::kB, k, seed}).overall;
      bool thr, lat;
      if (k == 1) {
        thr = b.throughput > a.throughput && a.throughput > base.throughput;
        lat = b.mean_latency < a.mean_latency && a.mean_latency < base.mean_latency;
      } else {
        thr = b.throughput > base.throughput && base.throughput > a.throughput;
        lat = b.mean_latency < base.mean_latency && base.mean_latency < a.mean_latency;
      }
      ok = ok && thr && lat;
      detail += "\n    seed " + std::to_string(seed) + " k=" + std::to_string(k) +
                ": throughput base " + fmt(base.throughput) + " A " + fmt(a.throughput) + " B " +
                fmt(b.throughput) + (thr ? " ok" : " WRONG ORDER") + "; latency base " +
                fmt(base.mean_latency) + " A " + fmt(a.mean_latency) + " B " +
                fmt(b.mean_latency) + (lat ? " ok" : " WRONG ORDER");
    }
  }
  return {ok, "k=1 needs B > A > Baseline, k=2 needs B > Baseline > A (latency mirrored)" + detail};
}

Verdict try_trend() {
  const auto& runs = shared_runs();
  bool ok = true;
  std::string detail;
  for (const auto& [key, m] : runs) {
    if (key.conf == Configuration::kBaseline) continue;
    bool run_ok = m.tries.size() == kSharedTries;
    for (std::size_t t = 1; run_ok && t < m.tries.size(); ++t) {
      run_ok = m.tries[t].disk_hit_ratio >= m.tries[t - 1].disk_hit_ratio &&
               m.tries[t].mean_latency <= m.tries[t - 1].mean_latency;
    }
    ok = ok && run_ok;
    detail += "\n    " + std::string(to_string(key.conf)) + " k=" + std::to_string(key.k) + " seed " +
              std::to_string(key.seed) + ": hit";
    for (const auto& t : m.tries) detail += " " + fmt(t.disk_hit_ratio, 3);
    detail += ", latency";
    for (const auto& t : m.tries) detail += " " + fmt(t.mean_latency, 4);
    detail += run_ok ? " ok" : " NOT MONOTONE";
  }
  return {ok, "per-try disk-hit ratio nondecreasing and mean latency nonincreasing" + detail};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict determinism() {
  const fs::path dir = oracle::temp_dir("accept-determinism");
  bool ok = true;
  int compared = 0;
  std::string detail;
  for (std::string scenario : {"baseline", "sharedA", "sharedB"}) {
    for (std::string k : {"1", "2"}) {
      std::string reports[2];
      for (int rep = 0; rep < 2; ++rep) {
        const fs::path out = dir / (scenario + "-" + k + "-" + std::to_string(rep));
        std::ostringstream so, se;
        const int code = cli::run({"bench", "--config", RAGDCACHE_PAPER_CONFIG, "--scenario", scenario,
                                   "--k", k, "--rate", "40", "--tries", "3", "--queries", "1000",
                                   "--seed", "1", "--out", out.string()},
                                  so, se);
        if (code != 0) {
          ok = false;
          detail += " " + scenario + " k=" + k + " exited " + std::to_string(code) + ": " + se.str();
        }
        reports[rep] = slurp(out / "report.json");
      }
      ++compared;
      if (reports[0].empty() || reports[0] != reports[1]) {
        ok = false;
        detail += " " + scenario + " k=" + k + " differs;";
      }
    }
  }
  fs::remove_all(dir);
  return {ok, std::to_string(compared) + " scenario pairs compared byte for byte" +
                  (detail.empty() ? "" : ":" + detail)};
}

// ------------------------------------------------------------------ 10 sweep

Verdict queue_sweep() {
  const PaperConfig cfg = paper();
  SimConfig sc = make_shared_config(cfg, Configuration::kBaseline, 1, 1);
  sc.tries = 1;
  const auto items = make_workload(cfg, 1, 1);
  const auto rows = sweep_rate(sc, items, kSweepRates);
  SimConfig low = sc;
  low.arrival.rate = kSweepRates.front();
  const double capacity = service_capacity(run(low, items), sc.inference_devices().size());

  bool ok = rows.front().processing_share > kProcessingShareAtLowRate;
  std::string detail = "processing share at " + fmt(rows.front().rate) + " q/s " +
                       pct(rows.front().processing_share) + " (need > " +
                       pct(kProcessingShareAtLowRate) + "); capacity " + fmt(capacity) +
                       " q/s; queue share above capacity:";
  double prev = -1.0;
  int above = 0;
  for (const auto& r : rows) {
    if (r.rate <= capacity) continue;
    ++above;
    detail += " " + fmt(r.rate) + "->" + pct(r.queue_share);
    if (!(r.queue_share > prev)) ok = false;
    prev = r.queue_share;
  }
  if (above < 2) {
    ok = false;
    detail += " (fewer than two rates above capacity)";
  }
  return {ok, detail};
}

// --------------------------------------------------------------- 11 locality

Verdict locality() {
  const auto items = zipf_stream(1000, 1.0, 100000, 7);
  std::vector<DocId> top1;
  for (const auto& it : items) top1.push_back(it.doc_ids.front());
  const double lib = locality_curve(items, 1000).coverage_at(0.5);
  const double ref = oracle::coverage_half(top1, 1000);

  const PaperConfig cfg = paper();
  const double fitted =
      locality_curve(make_workload(cfg, 1, cfg.workload.seed), cfg.workload.n_docs).coverage_at(0.5);
  const double refit_s = fit_zipf_exponent(cfg.workload.n_docs, cfg.workload.n_queries,
                                           kCoverageTarget, cfg.workload.seed);
  const double refit = locality_curve(zipf_stream(cfg.workload.n_docs, refit_s, cfg.workload.n_queries,
                                                  cfg.workload.seed),
                                      cfg.workload.n_docs)
                           .coverage_at(0.5);
  const bool ok = lib == ref && std::abs(fitted - kCoverageTarget) <= kCoverageTol &&
                  std::abs(refit - kCoverageTarget) <= kCoverageTol;
  return {ok, "Zipf(1.0) coverage " + fmt(lib, 6) + " vs oracle " + fmt(ref, 6) + "; configured s=" +
                  fmt(cfg.workload.zipf_s, 6) + " coverage " + fmt(fitted, 6) + "; refit s=" +
                  fmt(refit_s, 6) + " coverage " + fmt(refit, 6) + " (target " +
                  fmt(kCoverageTarget) + " +/- " + fmt(kCoverageTol) + ")"};
}

const std::map<int, std::pair<std::string, std::function<Verdict()>>> kCriteria = {
    {1, {"codec roundtrip and corruption", codec}},
    {2, {"LRU vs reference", lru}},
    {3, {"single-flight dedup", dedup}},
    {4, {"index vs exhaustive scan", index_oracle}},
    {5, {"wire equivalence and fuzz", wire_equivalence}},
    {6, {"single-instance uplift", single_uplift}},
    {7, {"TTFT decomposition", ttft_decomposition}},
    {8, {"configuration ordering", configuration_ordering}},
    {9, {"per-try trend", try_trend}},
    {10, {"queue sweep", queue_sweep}},
    {11, {"locality", locality}},
    {12, {"determinism", determinism}},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--only" && i + 1 < argc) {
      selected.push_back(std::atoi(argv[++i]));
    } else {
      std::cerr << "usage: acceptance [--only N]...\n";
      return 2;
    }
  }
  if (selected.empty()) {
    for (const auto& [n, c] : kCriteria) selected.push_back(n);
  }

  int failures = 0;
  for (int n : selected) {
    auto it = kCriteria.find(n);
    if (it == kCriteria.end()) {
      std::cerr << "no criterion " << n << '\n';
      return 2;
    }
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = it->second.second();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double limit = kLimit.at(n);
    if (secs > limit) {
      v.pass = false;
      v.detail += "; runtime over " + fmt(limit) + " s";
    }
    std::cout << "criterion " << std::setw(2) << n << " " << (v.pass ? "PASS" : "FAIL") << "  "
              << it->second.first << ": " << v.detail << " [" << std::fixed << std::setprecision(2)
              << secs << " s]" << std::defaultfloat << std::endl;
    if (!v.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
