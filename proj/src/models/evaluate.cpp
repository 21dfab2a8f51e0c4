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

#include "ccic/models/evaluate.hpp"

#include <random>

#include "ccic/data/batch.hpp"
#include "ccic/dsp/metrics.hpp"
#include "ccic/error.hpp"

namespace ccic::models {

std::vector<double> window_mse(const nn::Tensor& pred, const nn::Tensor& target) {
  if (pred.shape() != target.shape() || pred.rank() != 3 || pred.dim(1) != 2) {
    throw InvalidInput("window_mse: expected equal [N, 2, L] shapes, got " + nn::shape_string(pred.shape()) +
                       " and " + nn::shape_string(target.shape()));
  }
  const std::size_t n = pred.dim(0), len = pred.dim(2);
  std::vector<double> out(n, 0.0);
  const float* p = pred.ptr();
  const float* t = target.ptr();
  for (std::size_t b = 0; b < n; ++b) {
    double acc = 0.0;
    for (std::size_t k = 0; k < 2 * len; ++k) {
      const double d = static_cast<double>(p[b * 2 * len + k]) - t[b * 2 * len + k];
      acc += d * d;
    }
    out[b] = acc / static_cast<double>(len);
  }
  return out;
}

std::vector<EvalRow> evaluate(const Model& model, const data::Dataset& ds, const EvalConfig& cfg,
                              const ForwardOptions& opts) {
  if (cfg.windows == 0 || cfg.batch == 0) throw InvalidInput("evaluate: windows and batch must be positive");
  model.check_length(cfg.window_len);
  std::vector<EvalRow> rows;
  for (std::size_t gi = 0; gi < cfg.sinr_grid.size(); ++gi) {
    const double sinr = cfg.sinr_grid[gi];
    // Each grid point has its own stream so rows do not depend on grid order.
    std::mt19937_64 rng(cfg.seed * 1000003ULL + gi);
    EvalRow row;
    row.sinr_db = sinr;
    for (std::size_t done = 0; done < cfg.windows;) {
      const std::size_t b = std::min(cfg.batch, cfg.windows - done);
      const auto batch = data::make_batch(ds, cfg.split, b, cfg.window_len, rng, {}, &sinr);
      const auto pred = model.forward(batch.y, opts);
      const auto m = window_mse(pred, batch.s);
      const auto base = window_mse(batch.y, batch.s);
      for (std::size_t k = 0; k < b; ++k) {
        row.mean_mse += m[k];
        row.mean_score += dsp::mse_score(m[k]);
        row.baseline_mean_score += dsp::mse_score(base[k]);
      }
      done += b;
    }
    const double n = static_cast<double>(cfg.windows);
    row.windows = cfg.windows;
    row.mean_mse /= n;
    row.mean_score /= n;
    row.baseline_mean_score /= n;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace ccic::models
