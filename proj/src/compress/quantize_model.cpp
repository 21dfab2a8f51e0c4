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

#include "ccic/compress/quantize_model.hpp"

#include "ccic/compress/int8_conv.hpp"

namespace ccic::compress {

QParams calibrate_weight(const models::ConvLayer& layer) {
  return calibrate(layer.p.weight.data(), layer.out_channels(),
                   [&layer](std::size_t i) { return layer.out_channel_of(i); }, QScheme::per_out_channel);
}

nn::Tensor fake_quant_weight(const models::ConvLayer& layer, nn::Tape* tape) {
  return fake_quant(layer.p.weight, calibrate_weight(layer), [&layer](std::size_t i) { return layer.out_channel_of(i); },
                    tape);
}

void quantize_layer(models::ConvLayer& layer) {
  if (layer.quant) return;
  const QParams qp = calibrate_weight(layer);
  models::QuantizedWeight q;
  q.scale = qp.scale;
  q.zero_point = qp.zero_point;
  auto w = layer.p.weight.data();
  q.values.resize(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const std::size_t c = layer.out_channel_of(i);
    q.values[i] = quantize_value(w[i], q.scale[c], q.zero_point[c]);
    w[i] = dequantize_value(q.values[i], q.scale[c], q.zero_point[c]);
  }
  layer.quant = std::move(q);
}

void quantize_in_place(models::Model& model) {
  for (models::ConvLayer* l : model.conv_layers()) quantize_layer(*l);
}

models::Model quantize_model(const models::Model& model) {
  models::Model m = model.clone();
  quantize_in_place(m);
  return m;
}

bool is_quantized(const models::Model& model) {
  const auto layers = model.conv_layers();
  return !layers.empty() && std::all_of(layers.begin(), layers.end(), [](const auto* l) { return l->quant.has_value(); });
}

models::ForwardOptions int8_forward_options(nn::Tape* tape) {
  models::ForwardOptions o;
  o.tape = tape;
  o.conv_override = [](const models::ConvLayer& l, const nn::Tensor& x) {
    if (!l.quant) return l.transposed ? nn::conv_transpose1d(x, l.p) : nn::conv1d(x, l.p);
    return int8_conv(l, quantize_activation(x));
  };
  return o;
}

models::Model qat_finetune(const models::Model& model, const data::Dataset& ds, const models::TrainConfig& cfg,
                           models::TrainResult* trace, const models::TrainHooks& hooks) {
  models::Model m = model.clone();
  // Training updates the float weights; int8 storage is rebuilt afterwards.
  for (models::ConvLayer* l : m.conv_layers()) l->quant.reset();
  models::TrainHooks h = hooks;
  h.weight_transform = [](const models::ConvLayer& l, nn::Tape* tape) { return fake_quant_weight(l, tape); };
  auto res = models::train(m, ds, cfg, h);
  if (trace) *trace = std::move(res);
  quantize_in_place(m);
  return m;
}

}  // namespace ccic::compress
