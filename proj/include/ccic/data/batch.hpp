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
#include <vector>

#include "ccic/data/dataset.hpp"
#include "ccic/dsp/mixing.hpp"
#include "ccic/nn/tensor.hpp"

namespace ccic::data {

/// Signal-of-interest parameters (QPSK over RRC).
struct SoiConfig {
  double beta = 0.5;
  int n_taps = 127;
  int sps = 16;
  int tau0 = 8;
};

/// Fresh random QPSK/RRC signal of `length` samples.
dsp::ComplexSignal random_soi(std::size_t length, std::mt19937_64& rng, const SoiConfig& cfg = {});

struct Batch {
  nn::Tensor y;  // [N, 2, L] mixtures
  nn::Tensor s;  // [N, 2, L] ground-truth signals of interest
  std::vector<dsp::MixtureExample> examples;
  std::vector<std::size_t> frames;  // dataset index of each element's interference
};

/// Packs I/Q rows into [N, 2, L].
nn::Tensor to_tensor(const std::vector<const dsp::ComplexSignal*>& signals);

/// Draws `batch` mixtures from the frames of `split`: uniform frame choice,
/// uniform window, fresh SOI, SINR ~ U[-30, 0] dB, phase ~ U[-pi, pi].
/// With `fixed_sinr_db` set, every element uses that SINR instead.
Batch make_batch(const Dataset& ds, Split split, std::size_t batch, std::size_t length, std::mt19937_64& rng,
                 const SoiConfig& soi = {}, const double* fixed_sinr_db = nullptr);

}  // namespace ccic::data
