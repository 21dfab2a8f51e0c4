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

#include "ccic/nn/tape.hpp"
#include "ccic/nn/tensor.hpp"

namespace ccic::nn {

/// Geometry of a 1-D (transposed) convolution. `output_padding` is only used
/// by conv_transpose1d.
struct ConvGeometry {
  int stride = 1;
  int padding = 0;
  int groups = 1;
  int output_padding = 0;
};

/// Weights of one convolution.
///
/// conv1d expects weight [C_out, C_in/groups, k]; conv_transpose1d expects
/// weight [C_in, C_out/groups, k] so that it is the exact adjoint of a conv1d
/// sharing the same tensor. `bias` may be undefined.
template <typename T>
struct BasicConv1dParams {
  BasicTensor<T> weight;
  BasicTensor<T> bias;
  ConvGeometry geom;

  int kernel_size() const { return static_cast<int>(weight.dim(2)); }
  bool depthwise(std::size_t c_in, std::size_t c_out) const {
    return geom.groups > 1 && static_cast<std::size_t>(geom.groups) == c_in && c_in == c_out;
  }
};
using Conv1dParams = BasicConv1dParams<float>;

std::size_t conv1d_output_length(std::size_t l_in, int kernel, const ConvGeometry& g);
std::size_t conv_transpose1d_output_length(std::size_t l_in, int kernel, const ConvGeometry& g);

/// Cross-correlation with zero padding. x: [N, C_in, L].
template <typename T>
BasicTensor<T> conv1d(const BasicTensor<T>& x, const BasicConv1dParams<T>& p,
                      BasicTape<T>* tape = nullptr);

/// Transposed convolution. x: [N, C_in, L] ->
/// [N, C_out, (L-1)*stride - 2*padding + k + output_padding].
template <typename T>
BasicTensor<T> conv_transpose1d(const BasicTensor<T>& x, const BasicConv1dParams<T>& p,
                                BasicTape<T>* tape = nullptr);

/// Group normalization over (C/groups)*L entries per (sample, group),
/// followed by per-channel affine. gamma/beta may be undefined (identity).
template <typename T>
BasicTensor<T> group_norm(const BasicTensor<T>& x, int groups, double eps,
                          const BasicTensor<T>& gamma, const BasicTensor<T>& beta,
                          BasicTape<T>* tape = nullptr);

template <typename T>
BasicTensor<T> leaky_relu(const BasicTensor<T>& x, double slope = 0.01,
                          BasicTape<T>* tape = nullptr);

/// Channel concatenation [N,C1,L1] ++ [N,C2,L2] -> [N,C1+C2,min(L1,L2)].
/// Lengths may differ by at most one; the longer input loses its last sample.
template <typename T>
BasicTensor<T> concat_channels(const BasicTensor<T>& a, const BasicTensor<T>& b,
                               BasicTape<T>* tape = nullptr);

/// Concatenation along the last axis of two [N, L, F] tensors.
template <typename T>
BasicTensor<T> concat_features(const BasicTensor<T>& a, const BasicTensor<T>& b,
                               BasicTape<T>* tape = nullptr);

/// [N, A, B] -> [N, B, A].
template <typename T>
BasicTensor<T> swap_last_axes(const BasicTensor<T>& x, BasicTape<T>* tape = nullptr);

template <typename T>
BasicTensor<T> add(const BasicTensor<T>& a, const BasicTensor<T>& b, BasicTape<T>* tape = nullptr);

template <typename T>
BasicTensor<T> mul(const BasicTensor<T>& a, const BasicTensor<T>& b, BasicTape<T>* tape = nullptr);

/// Sum of all elements as a one-element tensor.
template <typename T>
BasicTensor<T> sum(const BasicTensor<T>& x, BasicTape<T>* tape = nullptr);

template <typename T>
BasicTensor<T> mean(const BasicTensor<T>& x, BasicTape<T>* tape = nullptr);

/// Per-sample complex MSE for [N, 2, L] pairs: (1/L) sum_{c,t} (p - t)^2.
/// `target` never receives gradient.
template <typename T>
BasicTensor<T> per_sample_mse(const BasicTensor<T>& pred, const BasicTensor<T>& target,
                              BasicTape<T>* tape = nullptr);

/// Elementwise y = f(x) with derivative df supplied by the caller.
template <typename T>
BasicTensor<T> map_elementwise(const BasicTensor<T>& x, const std::function<double(double)>& f,
                               const std::function<double(double)>& df,
                               BasicTape<T>* tape = nullptr);

namespace detail {

/// Throws NumericError naming `op` when any element is NaN or Inf.
template <typename T>
void check_finite(const BasicTensor<T>& t, const char* op);

/// Adds `src` into the gradient buffer of `dst`.
template <typename T>
void accumulate_grad(const BasicTensor<T>& dst, std::span<const T> src);

}  // namespace detail
}  // namespace ccic::nn
