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

#include "ccic/dsp/signal.hpp"

namespace ccic::dsp {

/// Score ceiling in dB; MSE at or below kScoreCapMse scores exactly this.
inline constexpr double kScoreCapDb = 50.0;
inline constexpr double kScoreCapMse = 1e-5;
inline constexpr double kDefaultSmoothTau = 1.0;

/// (1/L) sum |s[n] - s_hat[n]|^2 over complex samples.
double mse(const ComplexSignal& s, const ComplexSignal& s_hat);

/// min(-10 log10(mse), 50).
double mse_score(double mse_value);

/// Softplus-capped score: x - tau * ln(1 + exp((x - 50) / tau)) with
/// x = -10 log10(mse).
double smooth_score(double mse_value, double tau = kDefaultSmoothTau);

/// Training loss, -smooth_score(mse, tau).
double smooth_score_loss(double mse_value, double tau = kDefaultSmoothTau);

/// d smooth_score_loss / d mse.
double smooth_score_loss_grad(double mse_value, double tau = kDefaultSmoothTau);

}  // namespace ccic::dsp
