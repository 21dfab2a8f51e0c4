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
#include <vector>

#include "ccic/compress/quant.hpp"
#include "ccic/models/model.hpp"

namespace ccic::compress {

/// Activation tensor quantized per tensor.
struct QActivation {
  nn::Shape shape;
  std::vector<std::int8_t> values;
  float scale = 1.0f;
  std::int32_t zero_point = 0;
};

QActivation quantize_activation(const nn::Tensor& x);

/// Largest |(q - zp)| product sum an accumulator can see for `terms` terms.
std::int64_t accumulator_bound(std::size_t terms);

/// Integer conv (or transposed conv) of a quantized activation with the
/// layer's int8 weights. Accumulates in int32 and dequantizes at the output;
/// the float bias is added afterwards. Throws InvalidInput if the layer is
/// not quantized or if the accumulator could overflow.
nn::Tensor int8_conv(const models::ConvLayer& layer, const QActivation& x);

/// Float simulation of the same arithmetic: fake-quantized input through the
/// dequantized weights.
nn::Tensor fake_quant_conv(const models::ConvLayer& layer, const nn::Tensor& x);

/// Output step used to compare the two paths: the per-tensor int8 step of
/// the float-simulated output.
double output_lsb(const nn::Tensor& reference);

}  // namespace ccic::compress
