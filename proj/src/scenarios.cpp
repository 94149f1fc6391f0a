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

#include "ragdcache/scenarios.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace ragdcache {

std::vector<SingleInstanceCell> run_single_matrix(const PaperConfig& cfg,
                                                  const std::vector<WorkItem>& items) {
  std::vector<SingleInstanceCell> cells;
  for (const auto& model : cfg.single.models) {
    for (auto batch : cfg.single.batch_sizes) {
      for (bool cache : {false, true}) {
        cells.push_back(run_single_instance(make_single_config(cfg, model, batch, cache), items).cell);
      }
    }
  }
  return cells;
}

std::vector<ModelUplift> summarize_uplift(const std::vector<SingleInstanceCell>& cells) {
  struct Acc {
    double thr[2] = {0, 0};
    double ttft[2] = {0, 0};
    int n[2] = {0, 0};
    std::uint64_t hit_path = 0;
    std::uint64_t faster = 0;
  };
  std::vector<std::string> order;
  std::map<std::string, Acc> acc;
  for (const auto& c : cells) {
    if (!acc.contains(c.model_id)) order.push_back(c.model_id);
    Acc& a = acc[c.model_id];
    const int i = c.cache_enabled ? 1 : 0;
    a.thr[i] += c.throughput;
    a.ttft[i] += c.ttft_mean;
    a.n[i] += 1;
    a.hit_path += c.hit_path_queries;
    a.faster += c.hit_path_faster;
  }
  std::vector<ModelUplift> rows;
  for (const auto& id : order) {
    const Acc& a = acc.at(id);
    if (a.n[0] == 0 || a.n[1] == 0) {
      throw std::invalid_argument("summarize_uplift: model '" + id + "' lacks an on/off pair");
    }
    ModelUplift r;
    r.model_id = id;
    r.throughput_off = a.thr[0] / a.n[0];
    r.throughput_on = a.thr[1] / a.n[1];
    r.uplift = r.throughput_on / r.throughput_off - 1.0;
    r.ttft_reduction = 1.0 - (a.ttft[1] / a.n[1]) / (a.ttft[0] / a.n[0]);
    r.hit_path_queries = a.hit_path;
    r.hit_path_faster = a.faster;
    rows.push_back(r);
  }
  return rows;
}

double mean_uplift(const std::vector<ModelUplift>& rows) {
  if (rows.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& r : rows) sum += r.uplift;
  return sum / static_cast<double>(rows.size());
}

double baseline_throughput(const PaperConfig& cfg) {
  if (cfg.calibration.seeds.empty()) throw std::invalid_argument("calibration: no seeds");
  double sum = 0.0;
  for (auto seed : cfg.calibration.seeds) {
    const auto items = make_workload(cfg, 1, seed);
    sum += run(make_shared_config(cfg, Configuration::kBaseline, 1, seed), items)
               .metrics.overall.throughput;
  }
  return sum / static_cast<double>(cfg.calibration.seeds.size());
}

void set_gpu_rate(PaperConfig& cfg, double gpu_rate) {
  cfg.rates.gpu_rate = gpu_rate;
  cfg.rates.generator_gpu_rate = gpu_rate;
  cfg.rates.cpu_rate = gpu_rate * cfg.calibration.cpu_to_gpu_ratio;
}

std::vector<CalibrationStep> calibrate(PaperConfig& cfg) {
  std::vector<CalibrationStep> steps;

  cfg.workload.zipf_s = fit_zipf_exponent(cfg.workload.n_docs, cfg.workload.n_queries,
                                          cfg.workload.coverage_target, cfg.workload.seed);
  {
    const auto items = zipf_stream(cfg.workload.n_docs, cfg.workload.zipf_s,
                                   cfg.workload.n_queries, cfg.workload.seed);
    steps.push_back({"zipf_s", cfg.workload.zipf_s,
                     locality_curve(items, cfg.workload.n_docs).coverage_at(0.5),
                     cfg.workload.coverage_target});
  }

  // Throughput rises with the GPU rate; bisect in log space.
  const double target = cfg.calibration.target_baseline_throughput;
  double lo = 1e7;
  double hi = 1e13;
  for (int iter = 0; iter < 60; ++iter) {
    const double mid = std::sqrt(lo * hi);
    set_gpu_rate(cfg, mid);
    if (baseline_throughput(cfg) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi / lo < 1.0 + 1e-9) break;
  }
  set_gpu_rate(cfg, std::sqrt(lo * hi));
  cfg.calibration.achieved_baseline_throughput = baseline_throughput(cfg);
  steps.push_back({"gpu_rate", cfg.rates.gpu_rate, cfg.calibration.achieved_baseline_throughput,
                   target});

  // Uplift falls as decode time grows and dilutes the prefill savings.
  const auto items = make_workload(cfg, 1, cfg.workload.seed);
  auto uplift_at = [&](double t) {
    cfg.single.decode_seconds_per_token = t;
    return mean_uplift(summarize_uplift(run_single_matrix(cfg, items)));
  };
  const double target_uplift = cfg.calibration.target_single_uplift;
  double t_lo = 0.0;
  double t_hi = 1.0;
  while (uplift_at(t_hi) > target_uplift && t_hi < 1e4) t_hi *= 2.0;
  for (int iter = 0; iter < 50; ++iter) {
    const double mid = 0.5 * (t_lo + t_hi);
    if (uplift_at(mid) > target_uplift) {
      t_lo = mid;
    } else {
      t_hi = mid;
    }
  }
  cfg.calibration.achieved_single_uplift = uplift_at(0.5 * (t_lo + t_hi));
  steps.push_back({"decode_seconds_per_token", cfg.single.decode_seconds_per_token,
                   cfg.calibration.achieved_single_uplift, target_uplift});
  return steps;
}

}  // namespace ragdcache
