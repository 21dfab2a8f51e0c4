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

#include <cstddef>
#include <functional>

namespace ccic::nn {

/// Worker threads used by kernels for batch/channel parallelism.
/// Defaults to std::thread::hardware_concurrency().
void set_num_threads(int n);
int num_threads();

/// Runs body(i) for i in [0, count), split into contiguous chunks across
/// worker threads. Iterations must be independent.
void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace ccic::nn
