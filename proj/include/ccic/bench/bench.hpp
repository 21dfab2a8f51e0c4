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

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ccic/models/model.hpp"

namespace ccic::bench {

inline constexpr int kReportSchemaVersion = 1;

struct BenchConfig {
  std::string model_id;
  std::vector<std::size_t> batches{1};
  std::size_t window_len = 512;
  std::size_t sps = 16;
  int warmup_iters = 3;
  int measured_iters = 20;
  int threads = 0;  // 0 keeps the current kernel thread count
  std::uint64_t seed = 0;
  /// Simulated device memory; a batch whose activation estimate exceeds it
  /// is recorded as out of memory instead of being run.
  std::optional<std::uint64_t> memory_limit_bytes;
  models::ForwardOptions forward;

  void validate() const;
};

/// Called immediately before and after every timed forward.
struct BenchHooks {
  std::function<void()> enter_timed;
  std::function<void()> leave_timed;
};

struct BenchRow {
  std::string model;
  std::size_t batch = 0;
  std::string status = "ok";  // "ok" or "oom" (terminal marker)
  int runs = 0;
  double symbols_per_window = 0;
  double mean_latency_s = 0;
  double std_latency_s = 0;
  double median_latency_s = 0;
  double mean_symbols_per_sec = 0;
  double std_symbols_per_sec = 0;
  std::vector<double> latencies_s;
};

struct BenchEnvironment {
  std::string cpu_model;
  int threads = 0;
  std::string build_flags;
  std::string timestamp;
  std::string clock = "steady_clock";
  int warmup_iters = 0;
  int measured_iters = 0;
};

struct BenchReport {
  int schema_version = kReportSchemaVersion;
  BenchEnvironment environment;
  std::vector<BenchRow> rows;
};

/// batch * (L / F) / mean latency.
double symbol_rate(std::size_t batch, std::size_t window_len, std::size_t sps, double mean_latency_s);

/// Rough peak activation footprint of one forward, in bytes.
std::uint64_t estimate_activation_bytes(const models::Model& model, std::size_t batch, std::size_t length);

BenchEnvironment capture_environment(const BenchConfig& cfg);

BenchRow measure_symbol_rate(const models::Model& model, std::size_t batch, const BenchConfig& cfg,
                             const BenchHooks& hooks = {});

/// Rows for each batch in ascending order until the first OOM, which ends the
/// sweep as a terminal row.
BenchReport batch_sweep(const models::Model& model, const BenchConfig& cfg, const BenchHooks& hooks = {});

}  // namespace ccic::bench
