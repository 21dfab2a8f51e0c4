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
#include <span>
#include <vector>

#include "ccic/nn/tensor.hpp"

namespace ccic::nn {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// First/second moment buffers, one pair per parameter tensor.
struct AdamState {
  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> v;
  std::int64_t step = 0;
};

/// One bias-corrected Adam update using each parameter's gradient buffer.
/// Parameters without a gradient are treated as having zero gradient.
/// Initializes `state` on first use; throws InvalidInput if it does not
/// match the parameter shapes.
void adam_step(std::span<Tensor> params, AdamState& state, double lr,
               const AdamConfig& cfg = {});

/// lr_min + (lr0 - lr_min)(1 + cos(pi * step / total_steps)) / 2.
double cosine_lr(std::int64_t step, std::int64_t total_steps, double lr0, double lr_min = 0.0);

}  // namespace ccic::nn
