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
#include <functional>
#include <optional>
#include <vector>

#include "ccic/data/dataset.hpp"
#include "ccic/models/model.hpp"

namespace ccic::models {

struct TrainConfig {
  std::size_t batch = 2;
  double lr0 = 0.002;
  double lr_min = 0.0;
  std::int64_t steps = 0;
  std::size_t window_len = 512;
  double tau = 1.0;  // smoothing width of the score cap, dB
  std::uint64_t seed = 0;
  data::Split split = data::Split::train;
  std::optional<double> fixed_sinr_db;  // overrides the U[-30, 0] dB augmentation
};

struct TrainHooks {
  /// Forwarded to ForwardOptions::weight_transform (QAT uses fake quantization).
  std::function<nn::Tensor(const ConvLayer&, nn::Tape*)> weight_transform;
  /// Runs after each optimizer step and mask re-application.
  std::function<void(Model&, std::int64_t step)> after_step;
  /// Called with (step, loss) after every step.
  std::function<void(std::int64_t, double)> on_step;
};

struct TrainResult {
  std::vector<double> loss_trace;
};

/// Batch loss: mean over elements of -smooth_score(per-sample complex MSE).
nn::Tensor batch_loss(const Model& model, const nn::Tensor& y, const nn::Tensor& s, double tau,
                      const ForwardOptions& opts);

/// Adam + cosine schedule on randomly drawn mixtures. Throws NumericError
/// naming the step if the loss or any activation becomes non-finite.
TrainResult train(Model& model, const data::Dataset& ds, const TrainConfig& cfg, const TrainHooks& hooks = {});

}  // namespace ccic::models
