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

#include "ccic/nn/tape.hpp"

#include <ranges>

#include "ccic/error.hpp"

namespace ccic::nn {

template <typename T>
void BasicTape<T>::backward(BasicTensor<T>& loss) {
  if (!loss.defined() || loss.numel() != 1) {
    throw InvalidInput("backward: loss must be a scalar, got shape " +
                       (loss.defined() ? shape_string(loss.shape()) : std::string("<undefined>")));
  }
  auto g = loss.grad();
  g[0] += T{1};
  for (auto& node : std::views::reverse(nodes_)) node();
}

template <typename T>
bool BasicTape<T>::active(const BasicTape* tape,
                          std::initializer_list<const BasicTensor<T>*> inputs) {
  if (tape == nullptr) return false;
  for (const auto* t : inputs) {
    if (t != nullptr && t->defined() && t->requires_grad()) return true;
  }
  return false;
}

template class BasicTape<float>;
template class BasicTape<double>;

}  // namespace ccic::nn
