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

#include "ccic/models/model.hpp"

namespace ccic::analysis {

/// One MAC is one multiply-accumulate. Biases, norms and activations count
/// zero. conv1d: L_out*C_out*(C_in/g)*k. conv_transpose1d: L_in*C_in*C_out*k/g.
/// LSTM: L*4*H*(C_in+H) per direction, reported separately and only added to
/// the totals when include_recurrent is set.
inline constexpr const char* kMacConvention =
    "1 MAC = 1 multiply-accumulate; bias, norm and activation cost 0; "
    "conv1d L_out*C_out*(C_in/g)*k; conv_transpose1d L_in*C_in*C_out*k/g; "
    "lstm L*4*H*(C_in+H) per direction";

struct CostOptions {
  bool include_recurrent = false;
};

struct CostRow {
  std::string name;
  std::string kind;
  std::uint64_t macs = 0;
  std::uint64_t params = 0;
  std::uint64_t bytes = 0;
};

struct CostReport {
  std::string model;
  std::size_t input_length = 0;
  bool include_recurrent = false;
  std::vector<CostRow> rows;
  std::uint64_t total_macs = 0;
  std::uint64_t total_params = 0;
  std::uint64_t total_bytes = 0;
  /// LSTM MACs, whether or not they are part of total_macs.
  std::uint64_t recurrent_macs = 0;

  nlohmann::json to_json() const;
  std::string to_text() const;
};

CostReport count_macs(const models::Model& model, std::size_t length, const CostOptions& opts = {});

std::uint64_t layer_macs(const models::LayerGeometry& g);

std::uint64_t count_params(const models::Model& model);

/// Bytes per quantized output channel: f32 scale + i8 zero point.
inline constexpr std::uint64_t kQuantMetaBytesPerChannel = 5;

/// Sum of parameter storage (4 bytes f32, 1 byte i8) plus quantization metadata.
std::uint64_t model_size_bytes(const models::Model& model);

}  // namespace ccic::analysis
