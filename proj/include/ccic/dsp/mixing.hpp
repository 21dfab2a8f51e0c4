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

inline constexpr double kMinSinrDb = -30.0;
inline constexpr double kMaxSinrDb = 0.0;

/// One training/evaluation record. `b` holds the interference after gain and
/// phase rotation, so y == s + b.
struct MixtureExample {
  ComplexSignal y;
  ComplexSignal s;
  ComplexSignal b;
  double sinr_db = 0.0;
  double phase_rad = 0.0;
  int tau0 = 8;
  int sps = 16;
};

/// Amplitude gain g with p_s / (g^2 p_b) equal to 10^(sinr_db/10).
double interference_gain(double p_s, double p_b, double sinr_db);

/// y = s + g * e^{j phase} * b with g chosen for the requested SINR.
MixtureExample mix(const ComplexSignal& s, const ComplexSignal& b, double sinr_db,
                   double phase_rad);

/// 10 log10(P_s / P_b).
double measured_sinr_db(const ComplexSignal& s, const ComplexSignal& b);

}  // namespace ccic::dsp
