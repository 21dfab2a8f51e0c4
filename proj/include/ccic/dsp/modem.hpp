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

#include <cstddef>

#include "ccic/dsp/rrc.hpp"
#include "ccic/dsp/signal.hpp"

namespace ccic::dsp {

/// Gray-coded QPSK: 00 -> (+1+j)/sqrt2, 01 -> (-1+j)/sqrt2,
/// 11 -> (-1-j)/sqrt2, 10 -> (+1-j)/sqrt2.
SymbolSeq qpsk_map(const BitStream& bits);

/// Quadrant slicer, inverse of qpsk_map. A zero component decides positive.
BitStream qpsk_demap(const SymbolSeq& symbols);

/// Number of symbols k >= 0 whose pulse g[n - kF - tau0] overlaps [0, length).
std::size_t symbols_needed(std::size_t length, int sps, int tau0, int n_taps);

/// s[n] = sum_k a_k g[n - k*sps - tau0] for n in [0, length).
ComplexSignal shape_symbols(const SymbolSeq& symbols, const RrcFilter& filt, int sps, int tau0,
                            std::size_t length);

/// Matched filter, sample at k*sps + tau0 for k < n_sym, slice and demap.
BitStream matched_demod(const ComplexSignal& signal, const RrcFilter& filt, int sps, int tau0,
                        std::size_t n_sym);

}  // namespace ccic::dsp
