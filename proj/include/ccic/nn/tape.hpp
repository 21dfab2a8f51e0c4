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

#include <functional>
#include <initializer_list>
#include <vector>

#include "ccic/nn/tensor.hpp"

namespace ccic::nn {

/// Ordered record of differentiable ops executed since the last clear().
///
/// Each op that sees a tape and at least one input requiring grad pushes a
/// closure which reads its output's gradient and accumulates into its
/// inputs. backward() runs the closures in reverse execution order.
template <typename T>
class BasicTape {
 public:
  using BackwardFn = std::function<void()>;

  void record(BackwardFn fn) { nodes_.push_back(std::move(fn)); }
  std::size_t size() const noexcept { return nodes_.size(); }
  void clear() { nodes_.clear(); }

  /// Seeds d loss / d loss = 1 and propagates. `loss` must hold one element.
  void backward(BasicTensor<T>& loss);

  /// True when `tape` is non-null and any defined input requires grad.
  static bool active(const BasicTape* tape, std::initializer_list<const BasicTensor<T>*> inputs);

 private:
  std::vector<BackwardFn> nodes_;
};

using Tape = BasicTape<float>;
using TapeD = BasicTape<double>;

extern template class BasicTape<float>;
extern template class BasicTape<double>;

}  // namespace ccic::nn
