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

#include "ccic/dsp/mixing.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "ccic/error.hpp"

namespace ccic::dsp {

double interference_gain(double p_s, double p_b, double sinr_db) {
  detail::require(p_s > 0.0 && p_b > 0.0, "interference_gain: powers must be positive");
  detail::require(std::isfinite(sinr_db), "interference_gain: SINR must be finite");
  return std::sqrt(p_s / (p_b * std::pow(10.0, sinr_db / 10.0)));
}

MixtureExample mix(const ComplexSignal& s, const ComplexSignal& b, double sinr_db,
                   double phase_rad) {
  detail::require(s.size() == b.size(), "mix: signal lengths differ (" +
                                            std::to_string(s.size()) + " vs " +
                                            std::to_string(b.size()) + ")");
  detail::require(sinr_db >= kMinSinrDb && sinr_db <= kMaxSinrDb,
                  "mix: sinr_db must lie in [-30, 0]");
  detail::require(std::abs(phase_rad) <= std::numbers::pi, "mix: phase must lie in [-pi, pi]");

  const double g = interference_gain(s.power(), b.power(), sinr_db);
  const std::complex<double> rot = std::polar(g, phase_rad);

  MixtureExample ex;
  ex.s = s;
  ex.b = ComplexSignal(b.size());
  ex.y = ComplexSignal(b.size());
  for (std::size_t n = 0; n < b.size(); ++n) {
    const auto bn = rot * b.at(n);
    ex.b.set(n, bn);
    ex.y.set(n, s.at(n) + bn);
  }
  ex.sinr_db = sinr_db;
  ex.phase_rad = phase_rad;
  return ex;
}

double measured_sinr_db(const ComplexSignal& s, const ComplexSignal& b) {
  return 10.0 * std::log10(s.power() / b.power());
}

}  // namespace ccic::dsp
