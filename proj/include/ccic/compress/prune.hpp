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

#include <span>
#include <string>
#include <vector>

#include "ccic/models/model.hpp"

namespace ccic::compress {

enum class PruneMode { unstructured, structured };

const char* prune_mode_name(PruneMode m);
PruneMode parse_prune_mode(const std::string& s);

/// Indices of the round(ratio * n) smallest |w|; ties go to the lower index.
std::vector<std::size_t> smallest_magnitude(std::span<const float> w, double ratio);

/// Prunes every conv-family weight independently and stores the masks on the
/// layers so later optimizer steps keep the zeros. Structured mode removes
/// whole output filters by L1 norm.
void prune_in_place(models::Model& model, double ratio, PruneMode mode = PruneMode::unstructured);
models::Model prune_unstructured(const models::Model& model, double ratio);

struct SparsityRow {
  std::string name;
  std::size_t numel = 0;
  std::size_t zeros = 0;
  double fraction() const { return numel ? static_cast<double>(zeros) / static_cast<double>(numel) : 0.0; }
};

struct SparsityReport {
  std::vector<SparsityRow> rows;
  std::size_t numel = 0;
  std::size_t zeros = 0;
  double global_fraction() const { return numel ? static_cast<double>(zeros) / static_cast<double>(numel) : 0.0; }
};

/// Exact zero counts over the prunable (conv weight) tensors.
SparsityReport sparsity(const models::Model& model);

}  // namespace ccic::compress
