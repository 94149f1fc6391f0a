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

#include "commands.hpp"

#include <csignal>
#include <pthread.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ragdcache/cache_server.hpp"
#include "ragdcache/config.hpp"
#include "ragdcache/kv_store.hpp"
#include "ragdcache/report.hpp"
#include "ragdcache/scenarios.hpp"
#include "ragdcache/vector_index.hpp"

namespace ragdcache::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

PaperConfig load_paper_config(const std::string& path) {
  fs::path p = path;
#ifdef RAGDCACHE_DEFAULT_CONFIG
  if (p.empty() && fs::exists(RAGDCACHE_DEFAULT_CONFIG)) p = RAGDCACHE_DEFAULT_CONFIG;
#endif
  if (p.empty()) return default_config();
  try {
    return load_config(p);
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
}

std::string store_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("RAGDCACHE_STORE"); env != nullptr && *env != '\0') return env;
  throw UsageError("no store directory: pass --store or set RAGDCACHE_STORE");
}

std::vector<DocChunk> read_chunks(const std::string& path) {
  std::vector<DocChunk> chunks;
  try {
    chunks = load_chunks_jsonl(path);
  } catch (const IndexError& e) {
    throw InputError(e.what());
  }
  if (chunks.empty()) throw InputError("chunk file " + path + " has no chunks");
  return chunks;
}

std::vector<WorkItem> read_trace(const std::string& path, const PaperConfig& cfg) {
  try {
    return load_trace(path, TokenDefaults{cfg.workload.q_tokens, cfg.workload.doc_tokens});
  } catch (const WorkloadError& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string file_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return to_hex16(fnv1a64(os.str()));
}

std::string items_hash(const std::vector<WorkItem>& items) {
  std::ostringstream os;
  write_trace(os, items);
  return to_hex16(fnv1a64(os.str()));
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

RunManifest manifest(const std::string& command, std::uint64_t seed, json config, json inputs,
                     std::vector<std::string> outputs) {
  RunManifest m;
  m.tool_version = RAGDCACHE_VERSION;
  m.command = command;
  m.seed = seed;
  m.input_hash = content_hash(json{{"config", config}, {"inputs", inputs}});
  m.config = std::move(config);
  m.outputs = std::move(outputs);
  return m;
}

json uplift_json(const ModelUplift& r) {
  return json{{"model_id", r.model_id},
              {"throughput_off", r.throughput_off},
              {"throughput_on", r.throughput_on},
              {"uplift", r.uplift},
              {"ttft_reduction", r.ttft_reduction},
              {"hit_path_queries", r.hit_path_queries},
              {"hit_path_faster", r.hit_path_faster}};
}

// ---------------------------------------------------------------- precompute

struct PrecomputeOpts {
  std::string config;
  std::string chunks;
  std::string model;
  std::string store;
  std::string out;
  std::uint64_t seed = 0;
};

int precompute(const PrecomputeOpts& o, std::ostream& out, std::ostream& err) {
  const PaperConfig cfg = load_paper_config(o.config);
  ModelProfile model;
  try {
    model = cfg.model(o.model);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  const auto chunks = read_chunks(o.chunks);
  KvStore store(store_dir(o.store));

  std::uint64_t payload = 0;
  std::uint64_t file_bytes = 0;
  std::uint64_t written = 0;
  std::uint64_t present = 0;
  std::vector<DocId> failed;
  for (const auto& c : chunks) {
    try {
      const KvBlob blob = synth_blob(model, {c.doc_id}, c.token_count, o.seed);
      const KvKey key{model.hash(), {c.doc_id}};
      if (store.put(key, blob) == PutOutcome::kWritten) {
        ++written;
      } else {
        ++present;
      }
      payload += blob_size(model, c.token_count);
      file_bytes += cache_file_bytes(model, c.token_count, 1);
    } catch (const std::exception& e) {
      err << "doc " << c.doc_id << ": " << e.what() << '\n';
      failed.push_back(c.doc_id);
    }
  }

  out << "model " << model.model_id << ": chunks=" << chunks.size() << " payload_bytes=" << payload
      << " file_bytes=" << file_bytes << " (" << std::fixed << std::setprecision(3)
      << static_cast<double>(file_bytes) / double(1ULL << 30) << " GiB) written=" << written
      << " already_present=" << present << " failed=" << failed.size() << '\n';

  if (!o.out.empty()) {
    json summary{{"model", model},        {"chunks", chunks.size()},  {"payload_bytes", payload},
                 {"file_bytes", file_bytes}, {"written", written},    {"already_present", present},
                 {"failed", failed},       {"store", store.root().string()}};
    const RunManifest m = manifest("precompute", o.seed, json{{"model", model}},
                                   json{{"chunks", file_hash(o.chunks)}},
                                   {"precompute.json"});
    write_file(fs::path(o.out) / "precompute.json",
               json{{"manifest", m}, {"summary", summary}}.dump(2) + "\n");
  }

  if (!failed.empty()) {
    err << "failed doc_ids:";
    for (auto id : failed) err << ' ' << id;
    err << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

// --------------------------------------------------------------------- bench

struct BenchOpts {
  std::string config;
  std::string scenario;
  std::optional<std::uint32_t> k;
  std::optional<double> rate;
  std::optional<std::uint32_t> tries;
  std::optional<double> threshold;
  std::optional<std::string> process;
  std::optional<std::uint64_t> queries;
  std::optional<std::string> model;
  std::vector<std::uint32_t> batches;
  std::uint64_t seed = 1;
  std::string trace;
  std::string index;
  std::string out;
};

std::vector<WorkItem> bench_items(const BenchOpts& o, const PaperConfig& cfg, std::uint32_t k) {
  std::vector<WorkItem> items =
      o.trace.empty() ? make_workload(cfg, k, o.seed) : read_trace(o.trace, cfg);
  const bool unresolved =
      std::any_of(items.begin(), items.end(), [](const WorkItem& w) { return !w.resolved(); });
  if (unresolved) {
    if (o.index.empty()) throw InputError("trace has embedding queries; pass --index");
    try {
      items = resolve_items(FlatIndex::load(o.index), std::move(items), k);
    } catch (const IndexError& e) {
      throw InputError(e.what());
    }
  }
  return items;
}

int bench_single(const BenchOpts& o, PaperConfig cfg, std::ostream& out) {
  if (o.model) cfg.single.models = {*o.model};
  if (!o.batches.empty()) cfg.single.batch_sizes = o.batches;
  for (const auto& id : cfg.single.models) {
    if (!cfg.models.contains(id)) throw InputError("unknown model profile '" + id + "'");
  }
  const auto items = bench_items(o, cfg, o.k.value_or(1));
  const auto cells = run_single_matrix(cfg, items);
  const auto rows = summarize_uplift(cells);

  const fs::path dir = o.out;
  const RunManifest m = manifest("bench --scenario single", o.seed, json(cfg),
                                 json{{"trace", items_hash(items)}},
                                 {"report.json", "aggregates.csv", "manifest.json"});
  json models = json::array();
  for (const auto& r : rows) models.push_back(uplift_json(r));
  write_file(dir / "report.json",
             json{{"manifest", m}, {"cells", cells}, {"models", models}}.dump(2) + "\n");
  std::ostringstream csv;
  write_single_csv(csv, cells);
  write_file(dir / "aggregates.csv", csv.str());
  write_file(dir / "manifest.json", json(m).dump(2) + "\n");

  for (const auto& r : rows) {
    out << r.model_id << ": throughput " << r.throughput_off << " -> " << r.throughput_on
        << " q/s, uplift " << r.uplift * 100.0 << "%, ttft reduction " << r.ttft_reduction * 100.0
        << "%\n";
  }
  out << "mean uplift " << mean_uplift(rows) * 100.0 << "%\n";
  return kExitOk;
}

int bench_shared(const BenchOpts& o, PaperConfig cfg, std::ostream& out) {
  const Configuration conf = configuration_from_string(o.scenario);
  if (o.model) {
    if (!cfg.models.contains(*o.model)) throw InputError("unknown model profile '" + *o.model + "'");
    cfg.shared.model = *o.model;
  }
  if (o.queries) cfg.workload.n_queries = *o.queries;
  const std::uint32_t k = o.k.value_or(cfg.shared.k);
  SimConfig sc = make_shared_config(cfg, conf, k, o.seed);
  if (o.rate) sc.arrival.rate = *o.rate;
  if (o.tries) sc.tries = *o.tries;
  if (o.threshold) sc.threshold = *o.threshold;
  if (o.process) sc.arrival.process = arrival_process_from_string(*o.process);
  sc.validate();
  const auto items = bench_items(o, cfg, k);
  const SimResult result = run(sc, items);

  const fs::path dir = o.out;
  const RunManifest m = manifest("bench --scenario " + o.scenario, o.seed, json(sc),
                                 json{{"trace", items_hash(items)}},
                                 {"report.json", "aggregates.csv", "manifest.json"});
  write_file(dir / "report.json", report_json(m, result).dump(2) + "\n");
  std::ostringstream csv;
  write_aggregates_csv(csv, result.metrics);
  write_file(dir / "aggregates.csv", csv.str());
  write_file(dir / "manifest.json", json(m).dump(2) + "\n");

  const TryMetrics& t = result.metrics.overall;
  out << o.scenario << " k=" << k << ": throughput " << t.throughput << " q/s, mean latency "
      << t.mean_latency << " s, p95 " << t.p95_latency << " s, disk hit ratio " << t.disk_hit_ratio
      << '\n';
  return kExitOk;
}

int bench(const BenchOpts& o, std::ostream& out) {
  PaperConfig cfg = load_paper_config(o.config);
  if (o.queries) cfg.workload.n_queries = *o.queries;
  if (o.scenario == "single") return bench_single(o, std::move(cfg), out);
  return bench_shared(o, std::move(cfg), out);
}

// ---------------------------------------------------------- analyze-locality

struct LocalityOpts {
  std::string config;
  std::string trace;
  std::uint64_t corpus = 0;
  std::uint64_t seed = 7;
  std::string out;
};

int analyze_locality(const LocalityOpts& o, std::ostream& out) {
  const PaperConfig cfg = load_paper_config(o.config);
  std::vector<WorkItem> items;
  std::uint64_t corpus = o.corpus;
  if (o.trace.empty()) {
    items = zipf_stream(cfg.workload.n_docs, cfg.workload.zipf_s, cfg.workload.n_queries, o.seed);
    if (corpus == 0) corpus = cfg.workload.n_docs;
  } else {
    items = read_trace(o.trace, cfg);
  }
  LocalityCurve curve;
  try {
    curve = locality_curve(items, corpus);
  } catch (const WorkloadError& e) {
    throw InputError(e.what());
  }

  std::ostringstream csv;
  csv.precision(10);
  write_curve_csv(csv, curve);
  if (o.out.empty()) {
    out << csv.str();
    return kExitOk;
  }
  const fs::path dir = o.out;
  const RunManifest m =
      manifest("analyze-locality", o.seed, json{{"corpus_size", curve.corpus_size}},
               json{{"trace", items_hash(items)}}, {"locality.csv", "manifest.json"});
  write_file(dir / "locality.csv", csv.str());
  json mj = m;
  mj["coverage_at_0.5"] = curve.coverage_at(0.5);
  write_file(dir / "manifest.json", mj.dump(2) + "\n");
  out << "queries=" << curve.total_queries << " documents=" << curve.corpus_size
      << " coverage_at(0.5)=" << curve.coverage_at(0.5) << '\n';
  return kExitOk;
}

// --------------------------------------------------------------- build-index

struct IndexOpts {
  std::string chunks;
  std::string out;
};

int build_index(const IndexOpts& o, std::ostream& out) {
  const auto chunks = read_chunks(o.chunks);
  const std::size_t dim = chunks.front().embedding.size();
  if (dim == 0) throw InputError("chunk " + std::to_string(chunks.front().doc_id) +
                                 " has an empty embedding");
  FlatIndex index(dim);
  try {
    for (const auto& c : chunks) index.add(c);
  } catch (const IndexError& e) {
    throw InputError(e.what());
  }
  index.save(o.out);
  const RunManifest m = manifest("build-index", 0, json{{"dim", dim}},
                                 json{{"chunks", file_hash(o.chunks)}},
                                 {fs::path(o.out).filename().string()});
  write_file(o.out + ".manifest.json", json(m).dump(2) + "\n");
  out << "indexed " << index.size() << " chunks of dim " << dim << " into " << o.out << '\n';
  return kExitOk;
}

// --------------------------------------------------------------------- serve

struct ServeOpts {
  std::string listen = "127.0.0.1:7401";
  std::string store;
  std::uint64_t memory = 1ULL << 30;
};

int serve(const ServeOpts& o, std::ostream& out) {
  std::pair<std::string, std::uint16_t> addr;
  try {
    addr = parse_host_port(o.listen);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  KvStore store(store_dir(o.store), o.memory);

  // Block the stop signals before any server thread exists so only sigwait
  // below sees them.
  sigset_t stop_signals;
  sigemptyset(&stop_signals);
  sigaddset(&stop_signals, SIGINT);
  sigaddset(&stop_signals, SIGTERM);
  sigset_t previous;
  pthread_sigmask(SIG_BLOCK, &stop_signals, &previous);

  CacheServer server(store);
  try {
    server.start(addr.first, addr.second);
  } catch (...) {
    pthread_sigmask(SIG_SETMASK, &previous, nullptr);
    throw;
  }
  out << "listening on " << addr.first << ':' << server.port() << std::endl;
  int sig = 0;
  sigwait(&stop_signals, &sig);
  server.stop();
  pthread_sigmask(SIG_SETMASK, &previous, nullptr);
  out << "stopped after " << server.requests_served() << " requests" << std::endl;
  return kExitOk;
}

// ---------------------------------------------------------------- sweep-rate

struct SweepOpts {
  std::string config;
  std::string scenario = "baseline";
  std::vector<double> rates;
  std::optional<std::uint32_t> k;
  std::optional<std::uint64_t> queries;
  std::uint64_t seed = 1;
  std::string out;
};

int sweep(const SweepOpts& o, std::ostream& out) {
  PaperConfig cfg = load_paper_config(o.config);
  if (o.queries) cfg.workload.n_queries = *o.queries;
  if (!std::is_sorted(o.rates.begin(), o.rates.end())) {
    throw InputError("--rates must be ascending");
  }
  const std::uint32_t k = o.k.value_or(cfg.shared.k);
  SimConfig sc = make_shared_config(cfg, configuration_from_string(o.scenario), k, o.seed);
  sc.tries = 1;
  const auto items = make_workload(cfg, k, o.seed);
  const auto rows = sweep_rate(sc, items, o.rates);
  SimConfig low = sc;
  low.arrival.rate = o.rates.front();
  const double capacity = service_capacity(run(low, items), sc.inference_devices().size());

  std::ostringstream csv;
  write_sweep_csv(csv, rows);
  if (o.out.empty()) {
    out << csv.str();
    return kExitOk;
  }
  const fs::path dir = o.out;
  const RunManifest m = manifest("sweep-rate", o.seed, json(sc),
                                 json{{"rates", o.rates}, {"trace", items_hash(items)}},
                                 {"sweep.csv", "manifest.json"});
  json mj = m;
  mj["service_capacity"] = capacity;
  write_file(dir / "sweep.csv", csv.str());
  write_file(dir / "manifest.json", mj.dump(2) + "\n");
  out << rows.size() << " rates, service capacity " << capacity << " q/s\n";
  return kExitOk;
}

// ----------------------------------------------------------------- calibrate

struct CalibrateOpts {
  std::string config;
  std::string out;
};

int calibrate_cmd(const CalibrateOpts& o, std::ostream& out) {
  PaperConfig cfg = load_paper_config(o.config);
  const auto steps = calibrate(cfg);
  std::ostringstream notes;
  notes << "fitted by `ragdcache calibrate`: zipf_s to the coverage target, gpu_rate to the "
           "baseline k=1 throughput target (generator GPU = gpu_rate, CPU = gpu_rate * "
           "cpu_to_gpu_ratio), decode_seconds_per_token to the mean single-instance uplift target";
  cfg.calibration.notes = notes.str();
  save_config(o.out, cfg);
  for (const auto& s : steps) {
    out << s.name << " = " << s.value << " (achieved " << s.achieved << ", target " << s.target
        << ")\n";
  }
  out << "wrote " << o.out << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"ragdcache: document KV cache store, server and serving simulator", "ragdcache"};
  app.set_version_flag("--version", RAGDCACHE_VERSION);
  app.require_subcommand(1);

  PrecomputeOpts pre;
  auto* pre_cmd = app.add_subcommand("precompute", "Write one KV blob per chunk into a store");
  pre_cmd->add_option("--config", pre.config, "Config JSON");
  pre_cmd->add_option("--chunks", pre.chunks, "Chunk JSONL file")->required();
  pre_cmd->add_option("--model", pre.model, "Model profile id")->required();
  pre_cmd->add_option("--store", pre.store, "Store directory (default $RAGDCACHE_STORE)");
  pre_cmd->add_option("--seed", pre.seed, "Payload seed");
  pre_cmd->add_option("--out", pre.out, "Directory for the summary manifest");

  BenchOpts b;
  auto* bench_cmd = app.add_subcommand("bench", "Run a serving scenario and write a report");
  bench_cmd->add_option("--config", b.config, "Config JSON");
  bench_cmd->add_option("--scenario", b.scenario, "Scenario")
      ->required()
      ->check(CLI::IsMember({"single", "sharedA", "sharedB", "baseline"}));
  bench_cmd->add_option("--k", b.k, "Documents per query")->check(CLI::Range(1u, 16u));
  bench_cmd->add_option("--rate", b.rate, "Arrival rate, queries/s")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--tries", b.tries, "Passes over the workload")->check(CLI::Range(1u, 100u));
  bench_cmd->add_option("--threshold", b.threshold, "Prefetch threshold, seconds");
  bench_cmd->add_option("--process", b.process, "Arrival process")
      ->check(CLI::IsMember({"poisson", "uniform"}));
  bench_cmd->add_option("--queries", b.queries, "Synthetic workload size");
  bench_cmd->add_option("--model", b.model, "Model profile id");
  bench_cmd->add_option("--batch", b.batches, "Batch sizes (single)")->delimiter(',');
  bench_cmd->add_option("--seed", b.seed, "Seed");
  bench_cmd->add_option("--trace", b.trace, "Trace JSONL instead of the synthetic workload");
  bench_cmd->add_option("--index", b.index, "Index for traces with embedding queries");
  bench_cmd->add_option("--out", b.out, "Output directory")->required();

  LocalityOpts loc;
  auto* loc_cmd = app.add_subcommand("analyze-locality", "Document coverage curve of a trace");
  loc_cmd->add_option("--config", loc.config, "Config JSON");
  loc_cmd->add_option("trace", loc.trace, "Trace JSONL (default: synthetic Zipf stream)");
  loc_cmd->add_option("--corpus", loc.corpus, "Corpus size (default: distinct docs in trace)");
  loc_cmd->add_option("--seed", loc.seed, "Seed for the synthetic stream");
  loc_cmd->add_option("--out", loc.out, "Output directory (default: CSV to stdout)");

  IndexOpts idx;
  auto* idx_cmd = app.add_subcommand("build-index", "Build a flat inner-product index");
  idx_cmd->add_option("--chunks", idx.chunks, "Chunk JSONL file")->required();
  idx_cmd->add_option("--out", idx.out, "Index file")->required();

  ServeOpts srv;
  auto* srv_cmd = app.add_subcommand("serve", "Serve a store over TCP until SIGINT/SIGTERM");
  srv_cmd->add_option("--listen", srv.listen, "host:port (port 0 picks one)");
  srv_cmd->add_option("--store", srv.store, "Store directory (default $RAGDCACHE_STORE)");
  srv_cmd->add_option("--memory", srv.memory, "Memory tier capacity, bytes");

  SweepOpts sw;
  auto* sweep_cmd = app.add_subcommand("sweep-rate", "Latency decomposition over arrival rates");
  sweep_cmd->add_option("--config", sw.config, "Config JSON");
  sweep_cmd->add_option("--scenario", sw.scenario, "Scenario")
      ->check(CLI::IsMember({"sharedA", "sharedB", "baseline"}));
  sweep_cmd->add_option("--rates", sw.rates, "Ascending rates")->required()->delimiter(',');
  sweep_cmd->add_option("--k", sw.k, "Documents per query")->check(CLI::Range(1u, 16u));
  sweep_cmd->add_option("--queries", sw.queries, "Synthetic workload size");
  sweep_cmd->add_option("--seed", sw.seed, "Seed");
  sweep_cmd->add_option("--out", sw.out, "Output directory (default: CSV to stdout)");

  CalibrateOpts cal;
  auto* cal_cmd = app.add_subcommand("calibrate", "Fit rates and write a calibrated config");
  cal_cmd->add_option("--config", cal.config, "Starting config JSON");
  cal_cmd->add_option("--out", cal.out, "Output config path")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (pre_cmd->parsed()) return precompute(pre, out, err);
    if (bench_cmd->parsed()) return bench(b, out);
    if (loc_cmd->parsed()) return analyze_locality(loc, out);
    if (idx_cmd->parsed()) return build_index(idx, out);
    if (srv_cmd->parsed()) return serve(srv, out);
    if (sweep_cmd->parsed()) return sweep(sw, out);
    if (cal_cmd->parsed()) return calibrate_cmd(cal, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace ragdcache::cli
