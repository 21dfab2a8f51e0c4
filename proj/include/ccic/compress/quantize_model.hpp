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

#include "ccic/compress/quant.hpp"
#include "ccic/data/dataset.hpp"
#include "ccic/models/model.hpp"
#include "ccic/models/trainer.hpp"

namespace ccic::compress {

/// Per-out-channel parameters for a conv weight (group-aware for convT).
QParams calibrate_weight(const models::ConvLayer& layer);

/// Fake-quantized weight of `layer`, calibrated on its current values.
nn::Tensor fake_quant_weight(const models::ConvLayer& layer, nn::Tape* tape = nullptr);

/// Stores int8 weights on `layer` and replaces its float weight with the
/// dequantized values. No-op if already quantized.
void quantize_layer(models::ConvLayer& layer);

/// Quantizes every conv-family weight to int8 in place. LSTM, norm and bias
/// tensors stay float. Already-quantized layers are left alone.
void quantize_in_place(models::Model& model);
models::Model quantize_model(const models::Model& model);

bool is_quantized(const models::Model& model);

/// Forward options that evaluate quantized convs with the integer kernel.
models::ForwardOptions int8_forward_options(nn::Tape* tape = nullptr);

/// Fine-tunes with fake-quantized conv weights, then quantizes. Zero steps is
/// plain post-training quantization.
models::Model qat_finetune(const models::Model& model, const data::Dataset& ds, const models::TrainConfig& cfg,
                           models::TrainResult* trace = nullptr, const models::TrainHooks& hooks = {});

}  // namespace ccic::compress
