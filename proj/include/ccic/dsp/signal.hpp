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

#include <complex>
#include <cstdint>
#include <vector>

namespace ccic::dsp {

/// Bits, one per element, each 0 or 1. QPSK consumes them in pairs.
using BitStream = std::vector<std::uint8_t>;

/// Complex symbols a_k of the signal model.
using SymbolSeq = std::vector<std::complex<double>>;

/// Complex baseband signal stored as separate in-phase and quadrature rows.
struct ComplexSignal {
  std::vector<double> i;
  std::vector<double> q;

  ComplexSignal() = default;
  explicit ComplexSignal(std::size_t length) : i(length, 0.0), q(length, 0.0) {}
  ComplexSignal(std::vector<double> in_phase, std::vector<double> quadrature);

  std::size_t size() const noexcept { return i.size(); }
  bool empty() const noexcept { return i.empty(); }
  std::complex<double> at(std::size_t n) const { return {i[n], q[n]}; }
  void set(std::size_t n, std::complex<double> v) {
    i[n] = v.real();
    q[n] = v.imag();
  }

  /// Mean of |x[n]|^2.
  double power() const;

  /// Throws InvalidInput if I/Q lengths differ or any value is non-finite.
  void validate() const;
};

}  // namespace ccic::dsp
