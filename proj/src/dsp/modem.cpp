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

#include "ccic/dsp/modem.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ccic/error.hpp"

namespace ccic::dsp {
namespace {

constexpr double kAmp = std::numbers::sqrt2 / 2.0;

}  // namespace

SymbolSeq qpsk_map(const BitStream& bits) {
  detail::require(bits.size() % 2 == 0, "qpsk_map: bit count must be even, got " +
                                            std::to_string(bits.size()));
  SymbolSeq out;
  out.reserve(bits.size() / 2);
  for (std::size_t k = 0; k < bits.size(); k += 2) {
    detail::require(bits[k] <= 1 && bits[k + 1] <= 1, "qpsk_map: bits must be 0 or 1");
    // Gray labels: the second bit selects the in-phase sign, the first the quadrature sign.
    const double re = bits[k + 1] ? -kAmp : kAmp;
    const double im = bits[k] ? -kAmp : kAmp;
    out.emplace_back(re, im);
  }
  return out;
}

BitStream qpsk_demap(const SymbolSeq& symbols) {
  BitStream bits;
  bits.reserve(symbols.size() * 2);
  for (const auto& a : symbols) {
    bits.push_back(a.imag() < 0.0 ? 1 : 0);
    bits.push_back(a.real() < 0.0 ? 1 : 0);
  }
  return bits;
}

std::size_t symbols_needed(std::size_t length, int sps, int tau0, int n_taps) {
  detail::require(sps >= 1, "symbols_needed: sps must be >= 1");
  if (length == 0) return 0;
  // Last k with k*sps + tau0 - half <= length - 1.
  const long long half = n_taps / 2;
  const long long top = static_cast<long long>(length) - 1 + half - tau0;
  if (top < 0) return 0;
  return static_cast<std::size_t>(top / sps) + 1;
}

ComplexSignal shape_symbols(const SymbolSeq& symbols, const RrcFilter& filt, int sps, int tau0,
                            std::size_t length) {
  detail::require(sps >= 1, "shape_symbols: sps must be >= 1");
  const std::size_t needed = symbols_needed(length, sps, tau0, filt.n_taps);
  detail::require(symbols.size() >= needed,
                  "shape_symbols: need " + std::to_string(needed) + " symbols to cover " +
                      std::to_string(length) + " samples, got " + std::to_string(symbols.size()));

  ComplexSignal out(length);
  const long long half = filt.half_span();
  const long long len = static_cast<long long>(length);
  for (std::size_t k = 0; k < needed; ++k) {
    const auto a = symbols[k];
    if (a == std::complex<double>{}) continue;
    const long long center = static_cast<long long>(k) * sps + tau0;
    const long long lo = std::max(0LL, center - half);
    const long long hi = std::min(len - 1, center + half);
    for (long long n = lo; n <= hi; ++n) {
      const double g = filt.taps[static_cast<std::size_t>(n - center + half)];
      out.i[static_cast<std::size_t>(n)] += a.real() * g;
      out.q[static_cast<std::size_t>(n)] += a.imag() * g;
    }
  }
  return out;
}

BitStream matched_demod(const ComplexSignal& signal, const RrcFilter& filt, int sps, int tau0,
                        std::size_t n_sym) {
  detail::require(signal.i.size() == signal.q.size(), "matched_demod: I/Q length mismatch");
  if (n_sym == 0) return {};
  const long long last = static_cast<long long>(n_sym - 1) * sps + tau0;
  detail::require(last < static_cast<long long>(signal.size()),
                  "matched_demod: signal of length " + std::to_string(signal.size()) +
                      " too short for " + std::to_string(n_sym) + " symbols");

  SymbolSeq decisions;
  decisions.reserve(n_sym);
  const long long half = filt.half_span();
  const long long len = static_cast<long long>(signal.size());
  for (std::size_t k = 0; k < n_sym; ++k) {
    const long long center = static_cast<long long>(k) * sps + tau0;
    double re = 0.0;
    double im = 0.0;
    for (long long m = -half; m <= half; ++m) {
      const long long n = center + m;
      if (n < 0 || n >= len) continue;
      const double g = filt.taps[static_cast<std::size_t>(m + half)];
      re += signal.i[static_cast<std::size_t>(n)] * g;
      im += signal.q[static_cast<std::size_t>(n)] * g;
    }
    decisions.emplace_back(re, im);
  }
  return qpsk_demap(decisions);
}

}  // namespace ccic::dsp
