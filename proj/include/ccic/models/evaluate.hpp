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
#include <vector>

#include "ccic/data/dataset.hpp"
#include "ccic/models/model.hpp"

namespace ccic::models {

struct EvalConfig {
  std::vector<double> sinr_grid{-30.0, -24.0, -18.0, -12.0, -6.0, 0.0};
  std::size_t windows = 1000;  // per grid point
  std::size_t batch = 16;
  std::size_t window_len = 512;
  std::uint64_t seed = 0;
  data::Split split = data::Split::val;
};

struct EvalRow {
  double sinr_db = 0.0;
  std::size_t windows = 0;
  double mean_mse = 0.0;
  double mean_score = 0.0;           // mean of per-window mse_score
  double baseline_mean_score = 0.0;  // passthrough estimate s_hat = y
};

/// Mean MSE and score per SINR point. Deterministic given cfg.seed.
std::vector<EvalRow> evaluate(const Model& model, const data::Dataset& ds, const EvalConfig& cfg,
                              const ForwardOptions& opts = {});

/// Per-window complex MSE between two [N, 2, L] tensors.
std::vector<double> window_mse(const nn::Tensor& pred, const nn::Tensor& target);

}  // namespace ccic::models
