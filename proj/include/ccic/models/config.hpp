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
#include <json.hpp>
#include <string>
#include <vector>

namespace ccic::models {

enum class Preset { m1, m2, m1_mini };

const char* preset_name(Preset p);
Preset parse_preset(const std::string& name);

/// Declarative U-Net topology.
///
/// Encoder block i maps enc_filters[i-1] (or in_channels) to enc_filters[i]
/// with stride enc_strides[i]. Every block but the last records a skip; the
/// last block feeds the bottleneck. Decoder blocks mirror the encoder and
/// consume the skips in reverse order. With lstm_hidden > 0 the bottleneck is
/// a stack of LSTM layers followed by a 1x1 adapter conv back to the
/// encoder width.
struct ModelConfig {
  Preset preset = Preset::m1;
  bool depthwise = false;
  int norm_groups = 4;
  int in_channels = 2;
  int window_len = 512;
  int kernel_size = 3;
  double leaky_slope = 0.01;
  std::vector<int> enc_filters;
  std::vector<int> enc_strides;
  int lstm_hidden = 0;
  int lstm_layers = 0;
  bool lstm_bidirectional = false;
  std::uint64_t seed = 0;

  static ModelConfig make(Preset p, bool depthwise = false);

  /// "m1", "m2-dw", ...
  std::string name() const;
  /// Product of encoder strides; forward requires L divisible by it.
  std::size_t length_multiple() const;
  std::size_t n_decoder_blocks() const { return enc_filters.empty() ? 0 : enc_filters.size() - 1; }
  void validate() const;

  nlohmann::json to_json() const;
  static ModelConfig from_json(const nlohmann::json& j);
  bool operator==(const ModelConfig&) const = default;
};

enum class LayerKind { enc_block, dec_block, lstm_bottleneck, head_conv };

const char* layer_kind_name(LayerKind k);

struct LayerSpec {
  LayerKind kind;
  int in_ch;
  int out_ch;
  int stride;
  bool depthwise;
};

/// Block-level layout emitted by a configuration.
std::vector<LayerSpec> layer_specs(const ModelConfig& cfg);

}  // namespace ccic::models
