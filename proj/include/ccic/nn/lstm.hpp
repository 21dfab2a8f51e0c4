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

#include "ccic/nn/tape.hpp"
#include "ccic/nn/tensor.hpp"

namespace ccic::nn {

/// Single-direction LSTM layer with PyTorch gate order (i, f, g, o).
template <typename T>
struct BasicLstmParams {
  std::size_t input_size = 0;
  std::size_t hidden_size = 0;
  BasicTensor<T> w_ih;  // [4H, C_in]
  BasicTensor<T> w_hh;  // [4H, H]
  BasicTensor<T> b_ih;  // [4H]
  BasicTensor<T> b_hh;  // [4H]

  /// 4H(C_in + H) + 8H.
  std::size_t param_count() const { return 4 * hidden_size * (input_size + hidden_size) + 8 * hidden_size; }
};
using LstmParams = BasicLstmParams<float>;

template <typename T>
struct LstmResult {
  BasicTensor<T> output;  // [N, L, H]
  BasicTensor<T> h_n;     // [N, H], detached
  BasicTensor<T> c_n;     // [N, H], detached
};

/// Runs the recurrence over x: [N, L, C_in]. With `reverse` the sequence is
/// scanned from the last step to the first and output[t] is the state after
/// consuming x[t..L-1]. h0/c0 may be undefined (zero state).
template <typename T>
LstmResult<T> lstm_forward(const BasicTensor<T>& x, const BasicLstmParams<T>& p,
                           const BasicTensor<T>& h0 = {}, const BasicTensor<T>& c0 = {},
                           bool reverse = false, BasicTape<T>* tape = nullptr);

}  // namespace ccic::nn
