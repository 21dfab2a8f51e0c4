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
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace ccic::nn {

using Shape = std::vector<std::size_t>;

std::size_t shape_numel(const Shape& shape);
std::string shape_string(const Shape& shape);

/// Dense row-major tensor handle.
///
/// Copies share storage (the autodiff tape keeps handles to saved inputs);
/// use clone() for an independent copy. The gradient buffer is allocated
/// lazily on first access through grad().
template <typename T>
class BasicTensor {
 public:
  using value_type = T;

  BasicTensor() = default;
  explicit BasicTensor(Shape shape, T fill = T{0});
  BasicTensor(Shape shape, std::vector<T> values);

  bool defined() const noexcept { return static_cast<bool>(s_); }
  const Shape& shape() const;
  std::size_t rank() const { return shape().size(); }
  std::size_t dim(std::size_t axis) const;
  std::size_t numel() const;

  std::span<T> data();
  std::span<const T> data() const;
  T* ptr() { return data().data(); }
  const T* ptr() const { return data().data(); }
  T item() const;

  bool requires_grad() const noexcept { return s_ && s_->requires_grad; }
  BasicTensor& set_requires_grad(bool on);

  bool has_grad() const noexcept { return s_ && !s_->grad.empty(); }
  /// Gradient buffer, zero-initialized on first call. The gradient belongs to
  /// the shared storage, so it is writable through const handles.
  std::span<T> grad() const;
  void zero_grad();

  BasicTensor clone() const;
  bool shares_storage(const BasicTensor& other) const noexcept { return s_ == other.s_; }

 private:
  struct Storage {
    Shape shape;
    std::vector<T> values;
    std::vector<T> grad;
    bool requires_grad = false;
  };
  std::shared_ptr<Storage> s_;
};

using Tensor = BasicTensor<float>;
using TensorD = BasicTensor<double>;

extern template class BasicTensor<float>;
extern template class BasicTensor<double>;

}  // namespace ccic::nn
