// Copyright 2026 The ccic Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ccic/bench/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <new>
#include <numeric>
#include <random>

#include "ccic/error.hpp"
#include "ccic/nn/parallel.hpp"

#ifndef CCIC_BUILD_FLAGS
#define CCIC_BUILD_FLAGS "unknown"
#endif

namespace ccic::bench {

void BenchConfig::validate() const {
  if (warmup_iters < 1) throw InvalidInput("bench: warmup_iters must be >= 1");
  if (measured_iters < 5) throw InvalidInput("bench: measured_iters must be >= 5");
  if (sps == 0) throw InvalidInput("bench: sps must be positive");
  if (batches.empty()) throw InvalidInput("bench: no batch sizes");
  for (std::size_t i = 0; i < batches.size(); ++i) {
    if (batches[i] == 0) throw InvalidInput("bench: batch sizes must be positive");
    if (i && batches[i] <= batches[i - 1]) throw InvalidInput("bench: batch sizes must be strictly ascending");
  }
}

double symbol_rate(std::size_t batch, std::size_t window_len, std::size_t sps, double mean_latency_s) {
  return static_cast<double>(batch) * (static_cast<double>(window_len) / static_cast<double>(sps)) / mean_latency_s;
}

std::uint64_t estimate_activation_bytes(const models::Model& model, std::size_t batch, std::size_t length) {
  // Every layer output is kept (skips, tape-free forward still holds the
  // current and previous tensors); summing them is a safe upper bound.
  std::uint64_t elems = static_cast<std::uint64_t>(model.config().in_channels) * length;
  for (const auto& g : model.trace(length)) elems += static_cast<std::uint64_t>(g.c_out) * g.l_out;
  return elems * batch * sizeof(float);
}

namespace {

std::string cpu_model() {
  std::ifstream in("/proc/cpuinfo");
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("model name", 0) == 0) {
      const auto pos = line.find(':');
      if (pos != std::string::npos) return line.substr(line.find_first_not_of(' ', pos + 1));
    }
  }
  return "unknown";
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double stddev(const std::vector<double>& v) {
  const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return v.size() > 1 ? std::sqrt(acc / static_cast<double>(v.size() - 1)) : 0.0;
}

}  // namespace

BenchEnvironment capture_environment(const BenchConfig& cfg) {
  BenchEnvironment e;
  e.cpu_model = cpu_model();
  e.threads = cfg.threads > 0 ? cfg.threads : nn::num_threads();
  e.build_flags = CCIC_BUILD_FLAGS;
  e.timestamp = utc_timestamp();
  e.warmup_iters = cfg.warmup_iters;
  e.measured_iters = cfg.measured_iters;
  return e;
}

BenchRow measure_symbol_rate(const models::Model& model, std::size_t batch, const BenchConfig& cfg,
                             const BenchHooks& hooks) {
  cfg.validate();
  if (batch == 0) throw InvalidInput("bench: batch must be >= 1");
  model.check_length(cfg.window_len);
  if (cfg.threads > 0) nn::set_num_threads(cfg.threads);

  BenchRow row;
  row.model = cfg.model_id.empty() ? model.config().name() : cfg.model_id;
  row.batch = batch;
  row.symbols_per_window = static_cast<double>(cfg.window_len) / static_cast<double>(cfg.sps);

  // Inputs and result storage are prepared before any timed call.
  nn::Tensor x({batch, static_cast<std::size_t>(model.config().in_channels), cfg.window_len});
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<float> nd(0.0f, 1.0f);
  for (auto& v : x.data()) v = nd(rng);
  row.latencies_s.reserve(static_cast<std::size_t>(cfg.measured_iters));

  for (int i = 0; i < cfg.warmup_iters; ++i) (void)model.forward(x, cfg.forward);
  using clock = std::chrono::steady_clock;
  for (int i = 0; i < cfg.measured_iters; ++i) {
    if (hooks.enter_timed) hooks.enter_timed();
    const auto t0 = clock::now();
    nn::Tensor y = model.forward(x, cfg.forward);
    const auto t1 = clock::now();
    if (hooks.leave_timed) hooks.leave_timed();
    row.latencies_s.push_back(std::chrono::duration<double>(t1 - t0).count());
  }
  row.runs = cfg.measured_iters;
  row.mean_latency_s = std::accumulate(row.latencies_s.begin(), row.latencies_s.end(), 0.0) / row.runs;
  row.std_latency_s = stddev(row.latencies_s);
  row.median_latency_s = median(row.latencies_s);
  row.mean_symbols_per_sec = symbol_rate(batch, cfg.window_len, cfg.sps, row.mean_latency_s);
  std::vector<double> rates;
  for (double t : row.latencies_s) rates.push_back(symbol_rate(batch, cfg.window_len, cfg.sps, t));
  row.std_symbols_per_sec = stddev(rates);
  return row;
}

BenchReport batch_sweep(const models::Model& model, const BenchConfig& cfg, const BenchHooks& hooks) {
  cfg.validate();
  model.check_length(cfg.window_len);
  BenchReport rep;
  rep.environment = capture_environment(cfg);
  for (std::size_t b : cfg.batches) {
    bool oom = cfg.memory_limit_bytes && estimate_activation_bytes(model, b, cfg.window_len) > *cfg.memory_limit_bytes;
    if (!oom) {
      try {
        rep.rows.push_back(measure_symbol_rate(model, b, cfg, hooks));
      } catch (const std::bad_alloc&) {
        oom = true;
      }
    }
    if (oom) {
      BenchRow row;
      row.model = cfg.model_id.empty() ? model.config().name() : cfg.model_id;
      row.batch = b;
      row.status = "oom";
      row.symbols_per_window = static_cast<double>(cfg.window_len) / static_cast<double>(cfg.sps);
      rep.rows.push_back(std::move(row));
      break;
    }
  }
  return rep;
}

}  // namespace ccic::bench
