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

#include "ccic/compress/prune.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ccic/error.hpp"

namespace ccic::compress {

const char* prune_mode_name(PruneMode m) { return m == PruneMode::unstructured ? "unstructured" : "structured"; }

PruneMode parse_prune_mode(const std::string& s) {
  if (s == "unstructured") return PruneMode::unstructured;
  if (s == "structured") return PruneMode::structured;
  throw InvalidInput("unknown prune mode '" + s + "' (expected unstructured or structured)");
}

namespace {

void check_ratio(double ratio) {
  if (!(ratio >= 0.0 && ratio <= 1.0)) {
    throw InvalidInput("prune: ratio " + std::to_string(ratio) + " is outside [0, 1]");
  }
}

std::size_t prune_count(double ratio, std::size_t n) {
  return std::min(n, static_cast<std::size_t>(std::llround(ratio * static_cast<double>(n))));
}

std::vector<std::size_t> smallest(const std::vector<double>& key, std::size_t count) {
  std::vector<std::size_t> idx(key.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });
  idx.resize(count);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace

std::vector<std::size_t> smallest_magnitude(std::span<const float> w, double ratio) {
  check_ratio(ratio);
  std::vector<double> key(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) key[i] = std::fabs(static_cast<double>(w[i]));
  return smallest(key, prune_count(ratio, w.size()));
}

void prune_in_place(models::Model& model, double ratio, PruneMode mode) {
  check_ratio(ratio);
  for (models::ConvLayer* l : model.conv_layers()) {
    auto w = l->p.weight.data();
    std::vector<std::size_t> drop;
    if (mode == PruneMode::unstructured) {
      drop = smallest_magnitude(w, ratio);
    } else {
      std::vector<double> norm(l->out_channels(), 0.0);
      for (std::size_t i = 0; i < w.size(); ++i) norm[l->out_channel_of(i)] += std::fabs(static_cast<double>(w[i]));
      const auto filters = smallest(norm, prune_count(ratio, norm.size()));
      std::vector<char> gone(norm.size(), 0);
      for (auto c : filters) gone[c] = 1;
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (gone[l->out_channel_of(i)]) drop.push_back(i);
      }
    }
    if (!l->mask.defined()) l->mask = nn::Tensor(l->p.weight.shape(), 1.0f);
    auto m = l->mask.data();
    for (auto i : drop) m[i] = 0.0f;
    l->apply_mask();
    if (l->quant) {
      // Keep int8 storage consistent: the zero point dequantizes to exactly 0.
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] == 0.0f) l->quant->values[i] = static_cast<std::int8_t>(l->quant->zero_point[l->out_channel_of(i)]);
      }
    }
  }
}

models::Model prune_unstructured(const models::Model& model, double ratio) {
  check_ratio(ratio);
  models::Model m = model.clone();
  prune_in_place(m, ratio, PruneMode::unstructured);
  return m;
}

SparsityReport sparsity(const models::Model& model) {
  SparsityReport r;
  for (const models::ConvLayer* l : model.conv_layers()) {
    SparsityRow row;
    row.name = l->name + ".weight";
    const auto w = std::as_const(l->p.weight).data();
    row.numel = w.size();
    row.zeros = static_cast<std::size_t>(std::count(w.begin(), w.end(), 0.0f));
    r.numel += row.numel;
    r.zeros += row.zeros;
    r.rows.push_back(std::move(row));
  }
  return r;
}

}  // namespace ccic::compress
