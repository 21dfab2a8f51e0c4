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

#include <vector>

namespace ccic::dsp {

/// Root-raised-cosine pulse sampled at integer offsets -n_taps/2 .. n_taps/2.
struct RrcFilter {
  std::vector<double> taps;
  double beta = 0.5;
  int sps = 16;
  int n_taps = 127;

  int half_span() const noexcept { return n_taps / 2; }
};

/// Closed-form RRC impulse response at `t` symbol periods (unnormalized),
/// with the removable singularities at t = 0 and |t| = 1/(4 beta) resolved by
/// their limits.
double rrc_impulse(double t, double beta);

/// Unit-energy RRC taps. n_taps must be odd, 0 < beta <= 1, sps >= 1.
RrcFilter rrc_taps(double beta = 0.5, int n_taps = 127, int sps = 16);

}  // namespace ccic::dsp
