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
#include <random>
#include <string>

#include "ccic/data/dataset.hpp"

namespace ccic::data {

enum class InterferenceKind { emi_tone, ofdm_like, filtered_psk };

const char* kind_name(InterferenceKind k);
InterferenceKind parse_kind(const std::string& name);

struct SynthOptions {
  int n_tones = 0;             // emi_tone: 0 draws 1..3
  double burst_prob = 0.2;     // emi_tone: chance of an impulsive burst per 256-sample block
};

/// OFDM stand-in geometry: 128-point IDFT, 64 active subcarriers centred on
/// DC (bins -32..31), 16-sample cyclic prefix. The occupied band is
/// |f| <= 0.25 cycles/sample.
inline constexpr int kOfdmFft = 128;
inline constexpr int kOfdmActive = 64;
inline constexpr int kOfdmCp = 16;

/// Synthetic interference superframe with unit average power.
Superframe synth_interference(InterferenceKind kind, std::size_t length, std::mt19937_64& rng,
                              const SynthOptions& opts = {});

}  // namespace ccic::data
