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
#include <filesystem>

#include "ccic/models/model.hpp"

namespace ccic::models {

/// Checkpoint directory layout: manifest.json (format_version, config,
/// tensors[{name, dtype, shape, offset, nbytes, scale?, zero_point?}]) and
/// weights.bin, a little-endian blob with every tensor 64-byte aligned.
inline constexpr int kCheckpointVersion = 1;
inline constexpr std::size_t kBlobAlignment = 64;

void save_checkpoint(const Model& model, const std::filesystem::path& dir);
Model load_checkpoint(const std::filesystem::path& dir);

/// Sum of tensor payload bytes listed in a checkpoint manifest (excludes padding).
std::uint64_t checkpoint_payload_bytes(const std::filesystem::path& dir);

/// Dequantized float weights: (q - zero_point[c]) * scale[c] per output channel.
nn::Tensor dequantize_weight(const ConvLayer& layer, const QuantizedWeight& q);

}  // namespace ccic::models
