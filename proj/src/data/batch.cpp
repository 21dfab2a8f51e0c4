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

#include "ccic/data/batch.hpp"

#include <numbers>

#include "ccic/dsp/modem.hpp"
#include "ccic/dsp/rrc.hpp"
#include "ccic/error.hpp"

namespace ccic::data {

dsp::ComplexSignal random_soi(std::size_t length, std::mt19937_64& rng, const SoiConfig& cfg) {
  const auto filt = dsp::rrc_taps(cfg.beta, cfg.n_taps, cfg.sps);
  const std::size_t n_sym = dsp::symbols_needed(length, cfg.sps, cfg.tau0, cfg.n_taps);
  std::uniform_int_distribution<int> bit(0, 1);
  dsp::BitStream bits(2 * n_sym);
  for (auto& b : bits) b = static_cast<std::uint8_t>(bit(rng));
  return dsp::shape_symbols(dsp::qpsk_map(bits), filt, cfg.sps, cfg.tau0, length);
}

nn::Tensor to_tensor(const std::vector<const dsp::ComplexSignal*>& signals) {
  if (signals.empty()) throw InvalidInput("to_tensor: no signals");
  const std::size_t len = signals.front()->size();
  nn::Tensor t({signals.size(), 2, len});
  float* p = t.ptr();
  for (std::size_t n = 0; n < signals.size(); ++n) {
    const auto& s = *signals[n];
    if (s.size() != len) throw InvalidInput("to_tensor: signals differ in length");
    for (std::size_t k = 0; k < len; ++k) {
      p[(2 * n) * len + k] = static_cast<float>(s.i[k]);
      p[(2 * n + 1) * len + k] = static_cast<float>(s.q[k]);
    }
  }
  return t;
}

Batch make_batch(const Dataset& ds, Split split, std::size_t batch, std::size_t length, std::mt19937_64& rng,
                 const SoiConfig& soi, const double* fixed_sinr_db) {
  const auto pool = ds.indices(split);
  if (pool.empty()) throw InvalidInput(std::string("make_batch: split '") + split_name(split) + "' is empty");
  if (batch == 0) throw InvalidInput("make_batch: batch size must be positive");
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::uniform_real_distribution<double> sinr_dist(dsp::kMinSinrDb, dsp::kMaxSinrDb);
  std::uniform_real_distribution<double> phase_dist(-std::numbers::pi, std::numbers::pi);

  Batch out;
  out.examples.reserve(batch);
  for (std::size_t n = 0; n < batch; ++n) {
    const std::size_t frame = pool[pick(rng)];
    const auto b = sample_window(*ds.signal(frame), length, rng);
    auto s = random_soi(length, rng, soi);
    const double sinr = fixed_sinr_db ? *fixed_sinr_db : sinr_dist(rng);
    const double phase = phase_dist(rng);
    auto ex = dsp::mix(s, b, sinr, phase);
    ex.tau0 = soi.tau0;
    ex.sps = soi.sps;
    out.examples.push_back(std::move(ex));
    out.frames.push_back(frame);
  }
  std::vector<const dsp::ComplexSignal*> ys, ss;
  for (const auto& ex : out.examples) {
    ys.push_back(&ex.y);
    ss.push_back(&ex.s);
  }
  out.y = to_tensor(ys);
  out.s = to_tensor(ss);
  return out;
}

}  // namespace ccic::data
