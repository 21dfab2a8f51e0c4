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

#include "ccic/compress/quant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ccic/error.hpp"

namespace ccic::compress {

const char* scheme_name(QScheme s) {
  return s == QScheme::per_tensor ? "per_tensor" : "per_out_channel";
}

QParams calibrate(std::span<const float> values, std::size_t channels, const ChannelMap& channel_of,
                  QScheme scheme) {
  if (values.empty()) throw InvalidInput("calibrate: empty tensor");
  if (channels == 0) throw InvalidInput("calibrate: zero channels");
  std::vector<double> lo(channels, std::numeric_limits<double>::infinity());
  std::vector<double> hi(channels, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::size_t c = channels == 1 ? 0 : channel_of(i);
    const double v = values[i];
    if (!std::isfinite(v)) throw NumericError("calibrate: non-finite value");
    lo[c] = std::min(lo[c], v);
    hi[c] = std::max(hi[c], v);
  }
  QParams qp;
  qp.scheme = scheme;
  qp.scale.resize(channels);
  qp.zero_point.resize(channels);
  for (std::size_t c = 0; c < channels; ++c) {
    if (!(hi[c] > lo[c])) {  // degenerate or empty channel
      qp.scale[c] = 1.0f;
      qp.zero_point[c] = 0;
      continue;
    }
    const double mn = std::min(lo[c], 0.0), mx = std::max(hi[c], 0.0);
    const float scale = static_cast<float>((mx - mn) / 255.0);
    const long zp = std::lround(-mn / static_cast<double>(scale)) - 128;
    qp.scale[c] = scale;
    qp.zero_point[c] = static_cast<std::int32_t>(std::clamp<long>(zp, kQMin, kQMax));
  }
  return qp;
}

ChannelMap leading_axis_map(const nn::Shape& shape) {
  const std::size_t inner = shape.empty() || shape[0] == 0 ? 1 : nn::shape_numel(shape) / shape[0];
  return [inner](std::size_t i) { return i / inner; };
}

QParams calibrate(const nn::Tensor& x, QScheme scheme) {
  if (!x.defined() || x.numel() == 0) throw InvalidInput("calibrate: empty tensor");
  if (scheme == QScheme::per_tensor) {
    return calibrate(x.data(), 1, [](std::size_t) { return std::size_t{0}; }, scheme);
  }
  if (x.rank() < 1) throw InvalidInput("calibrate: per_out_channel needs a leading channel axis");
  return calibrate(x.data(), x.dim(0), leading_axis_map(x.shape()), scheme);
}

namespace {

long grid_index(float x, float scale) {
  return std::lround(static_cast<double>(x) / static_cast<double>(scale));
}

}  // namespace

std::int8_t quantize_value(float x, float scale, std::int32_t zero_point) {
  const long q = grid_index(x, scale) + zero_point;
  return static_cast<std::int8_t>(std::clamp<long>(q, kQMin, kQMax));
}

float dequantize_value(std::int8_t q, float scale, std::int32_t zero_point) {
  return static_cast<float>(static_cast<double>(static_cast<std::int32_t>(q) - zero_point) * scale);
}

nn::Tensor fake_quant(const nn::Tensor& x, const QParams& qp, const ChannelMap& channel_of, nn::Tape* tape) {
  if (qp.channels() == 0 || qp.zero_point.size() != qp.channels()) {
    throw InvalidInput("fake_quant: malformed quantization parameters");
  }
  const bool single = qp.channels() == 1;
  nn::Tensor out(x.shape());
  const float* xp = x.ptr();
  float* op = out.ptr();
  std::vector<std::uint8_t> pass;
  const bool track = nn::Tape::active(tape, {&x});
  if (track) pass.resize(x.numel());
  for (std::size_t i = 0; i < x.numel(); ++i) {
    const std::size_t c = single ? 0 : channel_of(i);
    if (c >= qp.channels()) throw InvalidInput("fake_quant: channel index out of range");
    const long q = grid_index(xp[i], qp.scale[c]) + qp.zero_point[c];
    const long qc = std::clamp<long>(q, kQMin, kQMax);
    op[i] = static_cast<float>(static_cast<double>(qc - qp.zero_point[c]) * qp.scale[c]);
    if (track) pass[i] = q == qc;
  }
  if (track) {
    out.set_requires_grad(true);
    tape->record([x, out, pass = std::move(pass)]() {
      if (!out.has_grad()) return;
      const auto gy = out.grad();
      auto gx = x.grad();
      for (std::size_t i = 0; i < gx.size(); ++i) {
        if (pass[i]) gx[i] += gy[i];
      }
    });
  }
  return out;
}

nn::Tensor fake_quant(const nn::Tensor& x, const QParams& qp, nn::Tape* tape) {
  return fake_quant(x, qp, leading_axis_map(x.shape()), tape);
}

}  // namespace ccic::compress
