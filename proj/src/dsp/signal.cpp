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

#include "ccic/dsp/signal.hpp"

#include <cmath>
#include <utility>

#include "ccic/error.hpp"

namespace ccic::dsp {

ComplexSignal::ComplexSignal(std::vector<double> in_phase, std::vector<double> quadrature)
    : i(std::move(in_phase)), q(std::move(quadrature)) {
  detail::require(i.size() == q.size(), "ComplexSignal: I and Q lengths differ");
}

double ComplexSignal::power() const {
  if (empty()) return 0.0;
  double acc = 0.0;
  for (std::size_t n = 0; n < size(); ++n) acc += i[n] * i[n] + q[n] * q[n];
  return acc / static_cast<double>(size());
}

void ComplexSignal::validate() const {
  detail::require(i.size() == q.size(), "ComplexSignal: I and Q lengths differ");
  for (std::size_t n = 0; n < size(); ++n) {
    if (!std::isfinite(i[n]) || !std::isfinite(q[n])) {
      throw InvalidInput("ComplexSignal: non-finite sample at index " + std::to_string(n));
    }
  }
}

}  // namespace ccic::dsp
