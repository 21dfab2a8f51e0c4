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

#include "ccic/nn/tensor.hpp"

#include <numeric>
#include <sstream>
#include <utility>

#include "ccic/error.hpp"

namespace ccic::nn {

std::size_t shape_numel(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

std::string shape_string(const Shape& shape) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) os << (i ? "," : "") << shape[i];
  os << ']';
  return os.str();
}

template <typename T>
BasicTensor<T>::BasicTensor(Shape shape, T fill) : s_(std::make_shared<Storage>()) {
  s_->values.assign(shape_numel(shape), fill);
  s_->shape = std::move(shape);
}

template <typename T>
BasicTensor<T>::BasicTensor(Shape shape, std::vector<T> values) : s_(std::make_shared<Storage>()) {
  if (shape_numel(shape) != values.size()) {
    throw InvalidInput("Tensor: shape " + shape_string(shape) + " does not match " +
                       std::to_string(values.size()) + " values");
  }
  s_->shape = std::move(shape);
  s_->values = std::move(values);
}

template <typename T>
const Shape& BasicTensor<T>::shape() const {
  if (!s_) throw InvalidInput("Tensor: use of undefined tensor");
  return s_->shape;
}

template <typename T>
std::size_t BasicTensor<T>::dim(std::size_t axis) const {
  const auto& sh = shape();
  if (axis >= sh.size()) {
    throw InvalidInput("Tensor: axis " + std::to_string(axis) + " out of range for shape " +
                       shape_string(sh));
  }
  return sh[axis];
}

template <typename T>
std::size_t BasicTensor<T>::numel() const {
  return s_ ? s_->values.size() : 0;
}

template <typename T>
std::span<T> BasicTensor<T>::data() {
  if (!s_) throw InvalidInput("Tensor: use of undefined tensor");
  return s_->values;
}

template <typename T>
std::span<const T> BasicTensor<T>::data() const {
  if (!s_) throw InvalidInput("Tensor: use of undefined tensor");
  return s_->values;
}

template <typename T>
T BasicTensor<T>::item() const {
  if (numel() != 1) throw InvalidInput("Tensor::item: tensor has " + std::to_string(numel()) + " elements");
  return s_->values[0];
}

template <typename T>
BasicTensor<T>& BasicTensor<T>::set_requires_grad(bool on) {
  if (!s_) throw InvalidInput("Tensor: use of undefined tensor");
  s_->requires_grad = on;
  return *this;
}

template <typename T>
std::span<T> BasicTensor<T>::grad() const {
  if (!s_) throw InvalidInput("Tensor: grad() on an undefined tensor");
  if (s_->grad.empty()) s_->grad.assign(s_->values.size(), T{0});
  return s_->grad;
}

template <typename T>
void BasicTensor<T>::zero_grad() {
  if (s_) s_->grad.clear();
}

template <typename T>
BasicTensor<T> BasicTensor<T>::clone() const {
  if (!s_) return {};
  return BasicTensor(s_->shape, s_->values);
}

template class BasicTensor<float>;
template class BasicTensor<double>;

}  // namespace ccic::nn
