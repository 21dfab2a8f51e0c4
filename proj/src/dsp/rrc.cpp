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

#include "ccic/dsp/rrc.hpp"

#include <cmath>
#include <numbers>

#include "ccic/error.hpp"

namespace ccic::dsp {

double rrc_impulse(double t, double beta) {
  constexpr double pi = std::numbers::pi;
  if (t == 0.0) return 1.0 - beta + 4.0 * beta / pi;
  const double quarter = 1.0 / (4.0 * beta);
  if (std::abs(std::abs(t) - quarter) < 1e-12) {
    return beta / std::numbers::sqrt2 *
           ((1.0 + 2.0 / pi) * std::sin(pi / (4.0 * beta)) +
            (1.0 - 2.0 / pi) * std::cos(pi / (4.0 * beta)));
  }
  const double num = std::sin(pi * t * (1.0 - beta)) + 4.0 * beta * t * std::cos(pi * t * (1.0 + beta));
  const double den = pi * t * (1.0 - (4.0 * beta * t) * (4.0 * beta * t));
  return num / den;
}

RrcFilter rrc_taps(double beta, int n_taps, int sps) {
  detail::require(n_taps > 0 && n_taps % 2 == 1, "rrc_taps: n_taps must be odd and positive");
  detail::require(beta > 0.0 && beta <= 1.0, "rrc_taps: beta must lie in (0, 1]");
  detail::require(sps >= 1, "rrc_taps: sps must be >= 1");

  RrcFilter f;
  f.beta = beta;
  f.sps = sps;
  f.n_taps = n_taps;
  f.taps.resize(static_cast<std::size_t>(n_taps));
  const int half = n_taps / 2;
  // Evaluate one side and mirror so the taps are exactly symmetric.
  for (int m = 0; m <= half; ++m) {
    const double v = rrc_impulse(static_cast<double>(m) / sps, beta);
    f.taps[static_cast<std::size_t>(half + m)] = v;
    f.taps[static_cast<std::size_t>(half - m)] = v;
  }
  double energy = 0.0;
  for (double v : f.taps) energy += v * v;
  const double norm = 1.0 / std::sqrt(energy);
  for (double& v : f.taps) v *= norm;
  return f;
}

}  // namespace ccic::dsp
