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

#include "ccic/nn/optim.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ccic/error.hpp"

namespace ccic::nn {

void adam_step(std::span<Tensor> params, AdamState& state, double lr, const AdamConfig& cfg) {
  if (state.m.empty() && state.step == 0) {
    state.m.resize(params.size());
    state.v.resize(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
      state.m[i].assign(params[i].numel(), 0.0);
      state.v[i].assign(params[i].numel(), 0.0);
    }
  }
  if (state.m.size() != params.size() || state.v.size() != params.size()) {
    throw InvalidInput("adam_step: optimizer state holds " + std::to_string(state.m.size()) +
                       " tensors, got " + std::to_string(params.size()));
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (state.m[i].size() != params[i].numel() || state.v[i].size() != params[i].numel()) {
      throw InvalidInput("adam_step: state shape mismatch for parameter " + std::to_string(i));
    }
  }

  ++state.step;
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    Tensor& p = params[i];
    if (!p.has_grad()) continue;  // zero gradient: moments decay, update below is exactly zero anyway
    auto w = p.data();
    const auto g = p.grad();
    auto& m = state.m[i];
    auto& v = state.v[i];
    for (std::size_t j = 0; j < w.size(); ++j) {
      const double gj = g[j];
      m[j] = cfg.beta1 * m[j] + (1.0 - cfg.beta1) * gj;
      v[j] = cfg.beta2 * v[j] + (1.0 - cfg.beta2) * gj * gj;
      const double mhat = m[j] / bc1;
      const double vhat = v[j] / bc2;
      w[j] = static_cast<float>(w[j] - lr * mhat / (std::sqrt(vhat) + cfg.eps));
    }
  }
}

double cosine_lr(std::int64_t step, std::int64_t total_steps, double lr0, double lr_min) {
  if (total_steps <= 0 || step < 0 || step > total_steps) {
    throw InvalidInput("cosine_lr: step " + std::to_string(step) + " outside [0, " +
                       std::to_string(total_steps) + "]");
  }
  const double frac = static_cast<double>(step) / static_cast<double>(total_steps);
  return lr_min + 0.5 * (lr0 - lr_min) * (1.0 + std::cos(std::numbers::pi * frac));
}

}  // namespace ccic::nn
