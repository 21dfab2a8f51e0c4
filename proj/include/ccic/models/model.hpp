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
#include <optional>
#include <string>
#include <vector>

#include "ccic/models/config.hpp"
#include "ccic/nn/lstm.hpp"
#include "ccic/nn/ops.hpp"
#include "ccic/nn/tape.hpp"

namespace ccic::models {

/// Int8 weight storage with one (scale, zero_point) pair per output channel.
/// For transposed convolutions the output channel of weight element
/// [i, o, k] is group(i) * (C_out / groups) + o.
struct QuantizedWeight {
  std::vector<std::int8_t> values;
  std::vector<float> scale;
  std::vector<std::int32_t> zero_point;
};

/// One convolution (standard, depthwise, pointwise or transposed) with its
/// optional compression state.
struct ConvLayer {
  std::string name;
  bool transposed = false;
  nn::Conv1dParams p;
  /// Present once the layer is quantized; p.weight then holds the dequantized values.
  std::optional<QuantizedWeight> quant;
  /// Optional 0/1 pruning mask with the weight's shape.
  nn::Tensor mask;

  std::size_t in_channels() const;
  std::size_t out_channels() const;
  /// Output channel of flat weight index `idx`.
  std::size_t out_channel_of(std::size_t idx) const;
  /// Zeroes masked weights in place.
  void apply_mask();
};

/// A 3-tap convolution, either dense or depthwise followed by pointwise.
using ConvStage = std::vector<ConvLayer>;

struct NormLayer {
  std::string name;
  int groups = 4;
  nn::Tensor gamma;
  nn::Tensor beta;
};

struct EncoderBlock {
  ConvStage conv1;  // carries the stride
  NormLayer norm1;
  ConvStage conv2;
  NormLayer norm2;
};

struct DecoderBlock {
  ConvStage up;  // transposed, carries the stride
  NormLayer norm_up;
  ConvStage conv;  // 2C -> C after the skip concatenation
  NormLayer norm;
};

struct LstmLayer {
  std::string name;
  nn::LstmParams fwd;
  nn::LstmParams bwd;  // unused unless bidirectional
  bool bidirectional = false;
};

struct Bottleneck {
  std::vector<LstmLayer> lstm;
  ConvLayer adapter;  // 1x1 conv back to the encoder width
};

enum class ParamKind { conv_weight, conv_bias, norm, lstm };

struct NamedParam {
  std::string name;
  nn::Tensor tensor;  // handle sharing the model's storage
  ParamKind kind;
  ConvLayer* conv = nullptr;  // owning conv layer for conv tensors
};

/// Static geometry of one executed convolution or recurrent layer at a
/// given input length. Used for cost accounting and kernel cross-checks.
struct LayerGeometry {
  std::string name;
  std::string kind;  // "conv1d", "conv_transpose1d", "lstm", "group_norm"
  std::size_t c_in = 0, c_out = 0, kernel = 0;
  nn::ConvGeometry geom;
  std::size_t l_in = 0, l_out = 0;
  std::size_t lstm_hidden = 0;
  std::size_t lstm_directions = 0;
  std::size_t weight_numel = 0, bias_numel = 0;
  bool quantized = false;
};

/// Hooks that let compression schemes alter conv execution without the
/// model depending on them.
struct ForwardOptions {
  nn::Tape* tape = nullptr;
  /// Replaces the weight fed to a conv (e.g. fake quantization for QAT).
  std::function<nn::Tensor(const ConvLayer&, nn::Tape*)> weight_transform;
  /// Replaces a whole conv evaluation (e.g. the int8 kernel path).
  std::function<nn::Tensor(const ConvLayer&, const nn::Tensor&)> conv_override;
};

class Model {
 public:
  explicit Model(ModelConfig cfg);

  const ModelConfig& config() const noexcept { return cfg_; }

  /// x [N, 2, L] -> [N, 2, L]. L must be a multiple of config().length_multiple().
  nn::Tensor forward(const nn::Tensor& x, const ForwardOptions& opts = {}) const;
  nn::Tensor forward(const nn::Tensor& x, nn::Tape* tape) const;

  /// Every trainable tensor, in a stable order, with unique names.
  std::vector<NamedParam> parameters();
  /// Visits the same tensors as parameters(), by reference to the owning field.
  void visit(const std::function<void(const std::string&, nn::Tensor&, ParamKind, ConvLayer*)>& f);
  std::vector<const ConvLayer*> conv_layers() const;
  std::vector<ConvLayer*> conv_layers();
  std::vector<const NormLayer*> norm_layers() const;
  std::vector<const LstmLayer*> lstm_layers() const;

  /// Re-applies all pruning masks.
  void apply_masks();
  std::size_t skip_count() const noexcept { return encoder_.empty() ? 0 : encoder_.size() - 1; }

  /// Layer-by-layer geometry for input length `length`.
  std::vector<LayerGeometry> trace(std::size_t length) const;

  /// Throws InvalidInput naming the divisibility requirement.
  void check_length(std::size_t length) const;

  const std::vector<EncoderBlock>& encoder() const noexcept { return encoder_; }
  const std::vector<DecoderBlock>& decoder() const noexcept { return decoder_; }
  const Bottleneck& bottleneck() const noexcept { return bottleneck_; }
  const ConvLayer& head() const noexcept { return head_; }
  ConvLayer& head() noexcept { return head_; }

  /// Deep copy of all tensors.
  Model clone() const;

 private:
  ModelConfig cfg_;
  std::vector<EncoderBlock> encoder_;
  Bottleneck bottleneck_;
  std::vector<DecoderBlock> decoder_;
  ConvLayer head_;
};

}  // namespace ccic::models
