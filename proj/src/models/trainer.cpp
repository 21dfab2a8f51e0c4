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

#include "ccic/models/trainer.hpp"

#include <cmath>
#include <random>

#include "ccic/data/batch.hpp"
#include "ccic/dsp/metrics.hpp"
#include "ccic/error.hpp"
#include "ccic/nn/optim.hpp"

namespace ccic::models {
namespace {

// Keeps the log finite when a window is reconstructed exactly.
constexpr double kMseFloor = 1e-30;

}  // namespace

nn::Tensor batch_loss(const Model& model, const nn::Tensor& y, const nn::Tensor& s, double tau,
                      const ForwardOptions& opts) {
  const nn::Tensor pred = model.forward(y, opts);
  const nn::Tensor mse = nn::per_sample_mse(pred, s, opts.tape);
  const nn::Tensor per = nn::map_elementwise(
      mse, [tau](double m) { return dsp::smooth_score_loss(std::max(m, kMseFloor), tau); },
      [tau](double m) { return dsp::smooth_score_loss_grad(std::max(m, kMseFloor), tau); }, opts.tape);
  return nn::mean(per, opts.tape);
}

TrainResult train(Model& model, const data::Dataset& ds, const TrainConfig& cfg, const TrainHooks& hooks) {
  TrainResult res;
  if (cfg.steps < 0) throw InvalidInput("train: steps must be >= 0");
  if (cfg.steps == 0) return res;
  if (ds.indices(cfg.split).empty()) {
    throw InvalidInput(std::string("train: split '") + data::split_name(cfg.split) + "' has no superframes");
  }
  model.check_length(cfg.window_len);

  auto named = model.parameters();
  std::vector<nn::Tensor> params;
  for (auto& p : named) {
    p.tensor.set_requires_grad(true);
    params.push_back(p.tensor);
  }
  std::mt19937_64 rng(cfg.seed);
  nn::AdamState opt;
  res.loss_trace.reserve(static_cast<std::size_t>(cfg.steps));
  const double* fixed = cfg.fixed_sinr_db ? &*cfg.fixed_sinr_db : nullptr;

  for (std::int64_t step = 0; step < cfg.steps; ++step) {
    const auto batch = data::make_batch(ds, cfg.split, cfg.batch, cfg.window_len, rng, {}, fixed);
    for (auto& p : params) p.zero_grad();
    nn::Tape tape;
    ForwardOptions opts;
    opts.tape = &tape;
    opts.weight_transform = hooks.weight_transform;
    double loss_value = 0.0;
    try {
      nn::Tensor loss = batch_loss(model, batch.y, batch.s, cfg.tau, opts);
      loss_value = loss.item();
      if (!std::isfinite(loss_value)) throw NumericError("loss is not finite");
      tape.backward(loss);
    } catch (const NumericError& e) {
      for (auto& p : params) p.set_requires_grad(false);
      throw NumericError("train: step " + std::to_string(step) + ": " + e.what());
    }
    nn::adam_step(params, opt, nn::cosine_lr(step, cfg.steps, cfg.lr0, cfg.lr_min));
    model.apply_masks();
    res.loss_trace.push_back(loss_value);
    if (hooks.after_step) hooks.after_step(model, step);
    if (hooks.on_step) hooks.on_step(step, loss_value);
  }
  for (auto& p : params) {
    p.zero_grad();
    p.set_requires_grad(false);
  }
  return res;
}

}  // namespace ccic::models
