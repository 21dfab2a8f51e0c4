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

#include "ccic/models/config.hpp"

#include "ccic/error.hpp"

namespace ccic::models {

const char* preset_name(Preset p) {
  switch (p) {
    case Preset::m1: return "m1";
    case Preset::m2: return "m2";
    case Preset::m1_mini: return "m1-mini";
  }
  return "unknown";
}

Preset parse_preset(const std::string& name) {
  if (name == "m1" || name == "M1") return Preset::m1;
  if (name == "m2" || name == "M2") return Preset::m2;
  if (name == "m1-mini" || name == "m1_mini") return Preset::m1_mini;
  throw InvalidInput("unknown preset '" + name + "' (expected m1, m2 or m1-mini)");
}

const char* layer_kind_name(LayerKind k) {
  switch (k) {
    case LayerKind::enc_block: return "enc_block";
    case LayerKind::dec_block: return "dec_block";
    case LayerKind::lstm_bottleneck: return "lstm_bottleneck";
    case LayerKind::head_conv: return "head_conv";
  }
  return "unknown";
}

ModelConfig ModelConfig::make(Preset p, bool depthwise) {
  ModelConfig c;
  c.preset = p;
  c.depthwise = depthwise;
  switch (p) {
    case Preset::m1:
      c.enc_filters = {64, 128, 256};
      c.enc_strides = {1, 2, 2};
      c.lstm_hidden = 64;
      c.lstm_layers = 2;
      c.lstm_bidirectional = true;
      break;
    case Preset::m2:
      c.enc_filters = {64, 128, 128, 128, 128, 128, 128, 128, 128};
      c.enc_strides = {1, 2, 2, 2, 2, 2, 2, 2, 2};
      break;
    case Preset::m1_mini:
      c.enc_filters = {8, 16, 32};
      c.enc_strides = {1, 2, 2};
      c.lstm_hidden = 16;
      c.lstm_layers = 2;
      c.lstm_bidirectional = true;
      break;
  }
  return c;
}

std::string ModelConfig::name() const { return std::string(preset_name(preset)) + (depthwise ? "-dw" : ""); }

std::size_t ModelConfig::length_multiple() const {
  std::size_t m = 1;
  for (int s : enc_strides) m *= static_cast<std::size_t>(s);
  return m;
}

void ModelConfig::validate() const {
  detail::require(!enc_filters.empty(), "model config: encoder needs at least one block");
  detail::require(enc_filters.size() == enc_strides.size(),
                  "model config: enc_filters and enc_strides differ in length");
  detail::require(in_channels >= 1, "model config: in_channels must be positive");
  detail::require(kernel_size >= 1 && kernel_size % 2 == 1, "model config: kernel_size must be odd");
  detail::require(norm_groups >= 1, "model config: norm_groups must be positive");
  for (std::size_t i = 0; i < enc_filters.size(); ++i) {
    detail::require(enc_strides[i] == 1 || enc_strides[i] == 2, "model config: strides must be 1 or 2");
    detail::require(enc_filters[i] > 0 && enc_filters[i] % norm_groups == 0,
                    "model config: every filter count must be a positive multiple of norm_groups");
  }
  detail::require(lstm_hidden >= 0, "model config: lstm_hidden must be >= 0");
  if (lstm_hidden > 0) detail::require(lstm_layers >= 1, "model config: lstm_layers must be >= 1");
  detail::require(window_len > 0 && window_len % static_cast<int>(length_multiple()) == 0,
                  "model config: window_len must be a multiple of the stride product");
}

nlohmann::json ModelConfig::to_json() const {
  return {{"preset", preset_name(preset)},
          {"depthwise", depthwise},
          {"norm_groups", norm_groups},
          {"in_channels", in_channels},
          {"window_len", window_len},
          {"kernel_size", kernel_size},
          {"leaky_slope", leaky_slope},
          {"enc_filters", enc_filters},
          {"enc_strides", enc_strides},
          {"lstm_hidden", lstm_hidden},
          {"lstm_layers", lstm_layers},
          {"lstm_bidirectional", lstm_bidirectional},
          {"seed", seed}};
}

ModelConfig ModelConfig::from_json(const nlohmann::json& j) {
  ModelConfig c;
  try {
    c.preset = parse_preset(j.at("preset").get<std::string>());
    c.depthwise = j.at("depthwise").get<bool>();
    c.norm_groups = j.at("norm_groups").get<int>();
    c.in_channels = j.at("in_channels").get<int>();
    c.window_len = j.at("window_len").get<int>();
    c.kernel_size = j.at("kernel_size").get<int>();
    c.leaky_slope = j.at("leaky_slope").get<double>();
    c.enc_filters = j.at("enc_filters").get<std::vector<int>>();
    c.enc_strides = j.at("enc_strides").get<std::vector<int>>();
    c.lstm_hidden = j.at("lstm_hidden").get<int>();
    c.lstm_layers = j.at("lstm_layers").get<int>();
    c.lstm_bidirectional = j.at("lstm_bidirectional").get<bool>();
    c.seed = j.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw LoadError(std::string("model config: ") + e.what());
  }
  c.validate();
  return c;
}

std::vector<LayerSpec> layer_specs(const ModelConfig& cfg) {
  cfg.validate();
  std::vector<LayerSpec> out;
  int ch = cfg.in_channels;
  for (std::size_t i = 0; i < cfg.enc_filters.size(); ++i) {
    out.push_back({LayerKind::enc_block, ch, cfg.enc_filters[i], cfg.enc_strides[i], cfg.depthwise});
    ch = cfg.enc_filters[i];
  }
  if (cfg.lstm_hidden > 0) out.push_back({LayerKind::lstm_bottleneck, ch, ch, 1, false});
  for (std::size_t j = cfg.enc_filters.size() - 1; j-- > 0;) {
    out.push_back({LayerKind::dec_block, cfg.enc_filters[j + 1], cfg.enc_filters[j], cfg.enc_strides[j + 1],
                   cfg.depthwise});
  }
  out.push_back({LayerKind::head_conv, cfg.enc_filters.front(), cfg.in_channels, 1, false});
  return out;
}

}  // namespace ccic::models
