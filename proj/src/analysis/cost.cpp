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

#include "ccic/analysis/cost.hpp"

#include <cstdio>

#include "ccic/error.hpp"

namespace ccic::analysis {

std::uint64_t layer_macs(const models::LayerGeometry& g) {
  if (g.kind == "conv1d") {
    const std::uint64_t groups = static_cast<std::uint64_t>(g.geom.groups);
    return static_cast<std::uint64_t>(g.l_out) * g.c_out * (g.c_in / groups) * g.kernel;
  }
  if (g.kind == "conv_transpose1d") {
    const std::uint64_t groups = static_cast<std::uint64_t>(g.geom.groups);
    return static_cast<std::uint64_t>(g.l_in) * g.c_in * g.c_out * g.kernel / groups;
  }
  if (g.kind == "lstm") {
    return static_cast<std::uint64_t>(g.l_in) * g.lstm_directions * 4 * g.lstm_hidden * (g.c_in + g.lstm_hidden);
  }
  return 0;
}

CostReport count_macs(const models::Model& model, std::size_t length, const CostOptions& opts) {
  CostReport r;
  r.model = model.config().name();
  r.input_length = length;
  r.include_recurrent = opts.include_recurrent;
  for (const auto& g : model.trace(length)) {
    CostRow row;
    row.name = g.name;
    row.kind = g.kind;
    const std::uint64_t macs = layer_macs(g);
    if (g.kind == "lstm") {
      r.recurrent_macs += macs;
      row.macs = opts.include_recurrent ? macs : 0;
    } else {
      row.macs = macs;
    }
    row.params = g.weight_numel + g.bias_numel;
    if (g.quantized) {
      row.bytes = g.weight_numel + 4 * g.bias_numel + kQuantMetaBytesPerChannel * g.c_out;
    } else {
      row.bytes = 4 * row.params;
    }
    r.total_macs += row.macs;
    r.total_params += row.params;
    r.total_bytes += row.bytes;
    r.rows.push_back(std::move(row));
  }
  return r;
}

std::uint64_t count_params(const models::Model& model) {
  std::uint64_t n = 0;
  for (const auto& p : const_cast<models::Model&>(model).parameters()) n += p.tensor.numel();
  return n;
}

std::uint64_t model_size_bytes(const models::Model& model) {
  std::uint64_t bytes = 0;
  for (const auto& p : const_cast<models::Model&>(model).parameters()) {
    if (p.kind == models::ParamKind::conv_weight && p.conv && p.conv->quant) {
      bytes += p.tensor.numel() + kQuantMetaBytesPerChannel * p.conv->out_channels();
    } else {
      bytes += 4 * p.tensor.numel();
    }
  }
  return bytes;
}

nlohmann::json CostReport::to_json() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& r : rows) {
    rows_json.push_back({{"name", r.name}, {"kind", r.kind}, {"macs", r.macs}, {"params", r.params}, {"bytes", r.bytes}});
  }
  return {{"model", model},
          {"convention", kMacConvention},
          {"input_length", input_length},
          {"include_recurrent", include_recurrent},
          {"macs", total_macs},
          {"params", total_params},
          {"bytes", total_bytes},
          {"recurrent_macs", recurrent_macs},
          {"rows", rows_json}};
}

std::string CostReport::to_text() const {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof line, "# %s, L=%zu, recurrent MACs %s\n", model.c_str(), input_length,
                include_recurrent ? "included" : "excluded");
  out += line;
  out += std::string("# ") + kMacConvention + "\n";
  std::snprintf(line, sizeof line, "%-32s %-18s %14s %10s %10s\n", "layer", "kind", "macs", "params", "bytes");
  out += line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-32s %-18s %14llu %10llu %10llu\n", r.name.c_str(), r.kind.c_str(),
                  static_cast<unsigned long long>(r.macs), static_cast<unsigned long long>(r.params),
                  static_cast<unsigned long long>(r.bytes));
    out += line;
  }
  std::snprintf(line, sizeof line, "%-32s %-18s %14llu %10llu %10llu\n", "total", "", static_cast<unsigned long long>(total_macs),
                static_cast<unsigned long long>(total_params), static_cast<unsigned long long>(total_bytes));
  out += line;
  return out;
}

}  // namespace ccic::analysis
