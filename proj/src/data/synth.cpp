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

#include "ccic/data/synth.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "ccic/error.hpp"

namespace ccic::data {
namespace {

using cd = std::complex<double>;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void normalize_power(dsp::ComplexSignal& s) {
  double p = 0.0;
  for (std::size_t n = 0; n < s.size(); ++n) p += s.i[n] * s.i[n] + s.q[n] * s.q[n];
  p /= static_cast<double>(s.size());
  if (!(p > 0.0)) return;
  const double g = 1.0 / std::sqrt(p);
  for (std::size_t n = 0; n < s.size(); ++n) {
    s.i[n] *= g;
    s.q[n] *= g;
  }
}

dsp::ComplexSignal emi_tone(std::size_t length, std::mt19937_64& rng, const SynthOptions& opts) {
  std::uniform_int_distribution<int> tones_dist(1, 3);
  std::uniform_real_distribution<double> freq(-0.5, 0.5), phase(-std::numbers::pi, std::numbers::pi),
      amp(0.5, 1.5), unit(0.0, 1.0);
  const int n_tones = opts.n_tones > 0 ? opts.n_tones : tones_dist(rng);
  dsp::ComplexSignal s(length);
  for (int k = 0; k < n_tones; ++k) {
    const double f = freq(rng), ph = phase(rng), a = amp(rng);
    for (std::size_t n = 0; n < length; ++n) s.set(n, s.at(n) + std::polar(a, kTwoPi * f * n + ph));
  }
  if (opts.burst_prob > 0.0) {
    std::normal_distribution<double> nd(0.0, 2.0);
    std::uniform_int_distribution<std::size_t> dur(8, 32);
    for (std::size_t block = 0; block < length; block += 256) {
      if (unit(rng) >= opts.burst_prob) continue;
      const std::size_t span = std::min<std::size_t>(256, length - block);
      const std::size_t d = std::min(dur(rng), span);
      const std::size_t start = block + std::uniform_int_distribution<std::size_t>(0, span - d)(rng);
      for (std::size_t n = start; n < start + d; ++n) s.set(n, s.at(n) + cd(nd(rng), nd(rng)));
    }
  }
  return s;
}

dsp::ComplexSignal ofdm_like(std::size_t length, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> bit(0, 1);
  // IDFT basis restricted to the active bins -32..31.
  std::vector<cd> twiddle(kOfdmFft);
  for (int n = 0; n < kOfdmFft; ++n) twiddle[n] = std::polar(1.0, kTwoPi * n / kOfdmFft);
  dsp::ComplexSignal s(length);
  std::vector<cd> sym(kOfdmActive), body(kOfdmFft);
  const double a = std::numbers::sqrt2 / 2.0;
  for (std::size_t pos = 0; pos < length;) {
    for (auto& v : sym) v = cd(bit(rng) ? -a : a, bit(rng) ? -a : a);
    for (int n = 0; n < kOfdmFft; ++n) {
      cd acc = 0.0;
      for (int k = 0; k < kOfdmActive; ++k) {
        const int bin = k - kOfdmActive / 2;
        acc += sym[k] * twiddle[((bin * n) % kOfdmFft + kOfdmFft) % kOfdmFft];
      }
      body[n] = acc;
    }
    for (int n = -kOfdmCp; n < kOfdmFft && pos < length; ++n, ++pos) {
      s.set(pos, body[(n + kOfdmFft) % kOfdmFft]);
    }
  }
  return s;
}

dsp::ComplexSignal filtered_psk(std::size_t length, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> sps_dist(2, 12), sym_dist(0, 7);
  std::uniform_real_distribution<double> bw(0.6, 1.0);
  const int sps = sps_dist(rng);
  const double cutoff = bw(rng) / sps;  // cycles/sample, between 0.6 and 1.0 of the symbol rate
  constexpr int kTaps = 65;
  std::vector<double> h(kTaps);
  for (int k = 0; k < kTaps; ++k) {
    const double m = k - (kTaps - 1) / 2.0;
    const double sinc = m == 0.0 ? 2.0 * cutoff : std::sin(kTwoPi * cutoff * m) / (std::numbers::pi * m);
    const double hamming = 0.54 - 0.46 * std::cos(kTwoPi * k / (kTaps - 1));
    h[k] = sinc * hamming;
  }
  // Zero-stuffed 8-PSK impulse train, generated with a filter-length lead-in.
  const std::size_t total = length + kTaps;
  std::vector<cd> x(total, 0.0);
  for (std::size_t n = 0; n < total; n += sps) x[n] = std::polar(1.0, kTwoPi * sym_dist(rng) / 8.0);
  dsp::ComplexSignal s(length);
  for (std::size_t n = 0; n < length; ++n) {
    cd acc = 0.0;
    for (int k = 0; k < kTaps; ++k) acc += h[k] * x[n + kTaps - k];
    s.set(n, acc);
  }
  return s;
}

}  // namespace

const char* kind_name(InterferenceKind k) {
  switch (k) {
    case InterferenceKind::emi_tone: return "emi_tone";
    case InterferenceKind::ofdm_like: return "ofdm_like";
    case InterferenceKind::filtered_psk: return "filtered_psk";
  }
  return "unknown";
}

InterferenceKind parse_kind(const std::string& name) {
  if (name == "emi_tone") return InterferenceKind::emi_tone;
  if (name == "ofdm_like") return InterferenceKind::ofdm_like;
  if (name == "filtered_psk") return InterferenceKind::filtered_psk;
  throw InvalidInput("unknown interference kind '" + name + "' (expected emi_tone, ofdm_like or filtered_psk)");
}

Superframe synth_interference(InterferenceKind kind, std::size_t length, std::mt19937_64& rng,
                              const SynthOptions& opts) {
  if (length == 0) throw InvalidInput("synth_interference: length must be positive");
  Superframe f;
  f.kind = kind_name(kind);
  switch (kind) {
    case InterferenceKind::emi_tone: f.signal = emi_tone(length, rng, opts); break;
    case InterferenceKind::ofdm_like: f.signal = ofdm_like(length, rng); break;
    case InterferenceKind::filtered_psk: f.signal = filtered_psk(length, rng); break;
  }
  normalize_power(f.signal);
  return f;
}

}  // namespace ccic::data
