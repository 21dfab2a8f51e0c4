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

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ccic/nn/tape.hpp"
#include "ccic/nn/tensor.hpp"

namespace ccic::compress {

enum class QScheme { per_tensor, per_out_channel };

const char* scheme_name(QScheme s);

inline constexpr int kQMin = -128;
inline constexpr int kQMax = 127;

/// Affine int8 parameters; one (scale, zero_point) pair per channel.
struct QParams {
  QScheme scheme = QScheme::per_tensor;
  std::vector<float> scale;
  std::vector<std::int32_t> zero_point;

  std::size_t channels() const noexcept { return scale.size(); }
};

/// Maps a flat element index to its quantization channel.
using ChannelMap = std::function<std::size_t(std::size_t)>;

/// Min/max affine calibration over `values`. The range is widened to include
/// zero so that exact zeros (pruned weights, padding) stay exact.
QParams calibrate(std::span<const float> values, std::size_t channels, const ChannelMap& channel_of,
                  QScheme scheme);

/// per_tensor: one pair. per_out_channel: one pair per index of axis 0.
QParams calibrate(const nn::Tensor& x, QScheme scheme);

/// Channel map that treats axis 0 as the channel axis.
ChannelMap leading_axis_map(const nn::Shape& shape);

std::int8_t quantize_value(float x, float scale, std::int32_t zero_point);
float dequantize_value(std::int8_t q, float scale, std::int32_t zero_point);

/// y = (clamp(round(x/scale) + zp) - zp) * scale, with a straight-through
/// gradient that is zero where the clamp saturates.
nn::Tensor fake_quant(const nn::Tensor& x, const QParams& qp, const ChannelMap& channel_of,
                      nn::Tape* tape = nullptr);
nn::Tensor fake_quant(const nn::Tensor& x, const QParams& qp, nn::Tape* tape = nullptr);

}  // namespace ccic::compress
