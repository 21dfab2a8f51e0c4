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

#include "ccic/dsp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ccic/error.hpp"

namespace ccic::dsp {
namespace {

double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

double mse(const ComplexSignal& s, const ComplexSignal& s_hat) {
  detail::require(s.size() == s_hat.size(), "mse: length mismatch");
  detail::require(!s.empty(), "mse: empty signals");
  double acc = 0.0;
  for (std::size_t n = 0; n < s.size(); ++n) {
    const double di = s.i[n] - s_hat.i[n];
    const double dq = s.q[n] - s_hat.q[n];
    acc += di * di + dq * dq;
  }
  return acc / static_cast<double>(s.size());
}

double mse_score(double mse_value) {
  detail::require(mse_value >= 0.0, "mse_score: MSE must be non-negative");
  if (mse_value <= kScoreCapMse) return kScoreCapDb;
  return std::min(-10.0 * std::log10(mse_value), kScoreCapDb);
}

double smooth_score(double mse_value, double tau) {
  detail::require(mse_value > 0.0, "smooth_score: MSE must be positive");
  detail::require(tau > 0.0, "smooth_score: tau must be positive");
  const double x = -10.0 * std::log10(mse_value);
  return x - tau * softplus((x - kScoreCapDb) / tau);
}

double smooth_score_loss(double mse_value, double tau) { return -smooth_score(mse_value, tau); }

double smooth_score_loss_grad(double mse_value, double tau) {
  detail::require(mse_value > 0.0, "smooth_score_loss_grad: MSE must be positive");
  detail::require(tau > 0.0, "smooth_score_loss_grad: tau must be positive");
  const double x = -10.0 * std::log10(mse_value);
  const double dx_dmse = -10.0 / (mse_value * std::numbers::ln10);
  return -(1.0 - sigmoid((x - kScoreCapDb) / tau)) * dx_dmse;
}

}  // namespace ccic::dsp
