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

#include <cmath>
#include <string>
#include <vector>

#include "ccic/error.hpp"
#include "ccic/nn/ops.hpp"

namespace ccic::nn {

namespace detail {

template <typename T>
void check_finite(const BasicTensor<T>& t, const char* op) {
  for (const T v : t.data()) {
    if (!std::isfinite(v)) throw NumericError(std::string(op) + ": produced a non-finite value");
  }
}

template <typename T>
void accumulate_grad(const BasicTensor<T>& dst, std::span<const T> src) {
  auto g = dst.grad();
  if (g.size() != src.size()) throw InvalidInput("accumulate_grad: size mismatch");
  for (std::size_t i = 0; i < g.size(); ++i) g[i] += src[i];
}

}  // namespace detail

template <typename T>
BasicTensor<T> leaky_relu(const BasicTensor<T>& x, double slope, BasicTape<T>* tape) {
  BasicTensor<T> out(x.shape());
  const T s = static_cast<T>(slope);
  const T* xp = x.ptr();
  T* op = out.ptr();
  for (std::size_t i = 0; i < x.numel(); ++i) op[i] = xp[i] >= T{0} ? xp[i] : s * xp[i];
  if (BasicTape<T>::active(tape, {&x})) {
    out.set_requires_grad(true);
    tape->record([x, out, s]() mutable {
      if (!out.has_grad()) return;
      const auto gy = out.grad();
      auto gx = x.grad();
      const T* xp = x.ptr();
      for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += xp[i] >= T{0} ? gy[i] : s * gy[i];
    });
  }
  return out;
}

template <typename T>
BasicTensor<T> concat_channels(const BasicTensor<T>& a, const BasicTensor<T>& b, BasicTape<T>* tape) {
  if (a.rank() != 3 || b.rank() != 3 || a.dim(0) != b.dim(0)) {
    throw InvalidInput("concat_channels: expected [N,C,L] tensors with equal N, got " +
                       shape_string(a.shape()) + " and " + shape_string(b.shape()));
  }
  const std::size_t la = a.dim(2), lb = b.dim(2);
  const std::size_t gap = la > lb ? la - lb : lb - la;
  if (gap > 1) {
    throw InvalidInput("concat_channels: lengths " + std::to_string(la) + " and " + std::to_string(lb) +
                       " differ by more than one sample");
  }
  const std::size_t n = a.dim(0), ca = a.dim(1), cb = b.dim(1), l = std::min(la, lb);
  BasicTensor<T> out({n, ca + cb, l});
  T* op = out.ptr();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < ca; ++c) {
      const T* src = a.ptr() + (i * ca + c) * la;
      std::copy(src, src + l, op + (i * (ca + cb) + c) * l);
    }
    for (std::size_t c = 0; c < cb; ++c) {
      const T* src = b.ptr() + (i * cb + c) * lb;
      std::copy(src, src + l, op + (i * (ca + cb) + ca + c) * l);
    }
  }
  if (BasicTape<T>::active(tape, {&a, &b})) {
    out.set_requires_grad(true);
    tape->record([a, b, out, n, ca, cb, la, lb, l]() mutable {
      if (!out.has_grad()) return;
      const T* gy = out.grad().data();
      if (a.requires_grad()) {
        T* ga = a.grad().data();
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t c = 0; c < ca; ++c)
            for (std::size_t t = 0; t < l; ++t) ga[(i * ca + c) * la + t] += gy[(i * (ca + cb) + c) * l + t];
      }
      if (b.requires_grad()) {
        T* gb = b.grad().data();
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t c = 0; c < cb; ++c)
            for (std::size_t t = 0; t < l; ++t)
              gb[(i * cb + c) * lb + t] += gy[(i * (ca + cb) + ca + c) * l + t];
      }
    });
  }
  return out;
}

template <typename T>
BasicTensor<T> concat_features(const BasicTensor<T>& a, const BasicTensor<T>& b, BasicTape<T>* tape) {
  if (a.rank() != 3 || b.rank() != 3 || a.dim(0) != b.dim(0) || a.dim(1) != b.dim(1)) {
    throw InvalidInput("concat_features: expected [N,L,F] tensors with equal N and L, got " +
                       shape_string(a.shape()) + " and " + shape_string(b.shape()));
  }
  const std::size_t rows = a.dim(0) * a.dim(1), fa = a.dim(2), fb = b.dim(2);
  BasicTensor<T> out({a.dim(0), a.dim(1), fa + fb});
  T* op = out.ptr();
  for (std::size_t r = 0; r < rows; ++r) {
    std::copy(a.ptr() + r * fa, a.ptr() + (r + 1) * fa, op + r * (fa + fb));
    std::copy(b.ptr() + r * fb, b.ptr() + (r + 1) * fb, op + r * (fa + fb) + fa);
  }
  if (BasicTape<T>::active(tape, {&a, &b})) {
    out.set_requires_grad(true);
    tape->record([a, b, out, rows, fa, fb]() mutable {
      if (!out.has_grad()) return;
      const T* gy = out.grad().data();
      if (a.requires_grad()) {
        T* ga = a.grad().data();
        for (std::size_t r = 0; r < rows; ++r)
          for (std::size_t f = 0; f < fa; ++f) ga[r * fa + f] += gy[r * (fa + fb) + f];
      }
      if (b.requires_grad()) {
        T* gb = b.grad().data();
        for (std::size_t r = 0; r < rows; ++r)
          for (std::size_t f = 0; f < fb; ++f) gb[r * fb + f] += gy[r * (fa + fb) + fa + f];
      }
    });
  }
  return out;
}

template <typename T>
BasicTensor<T> swap_last_axes(const BasicTensor<T>& x, BasicTape<T>* tape) {
  if (x.rank() != 3) throw InvalidInput("swap_last_axes: expected rank 3, got " + shape_string(x.shape()));
  const std::size_t n = x.dim(0), a = x.dim(1), b = x.dim(2);
  BasicTensor<T> out({n, b, a});
  const T* xp = x.ptr();
  T* op = out.ptr();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t p = 0; p < a; ++p)
      for (std::size_t q = 0; q < b; ++q) op[(i * b + q) * a + p] = xp[(i * a + p) * b + q];
  if (BasicTape<T>::active(tape, {&x})) {
    out.set_requires_grad(true);
    tape->record([x, out, n, a, b]() mutable {
      if (!out.has_grad()) return;
      const T* gy = out.grad().data();
      T* gx = x.grad().data();
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t p = 0; p < a; ++p)
          for (std::size_t q = 0; q < b; ++q) gx[(i * a + p) * b + q] += gy[(i * b + q) * a + p];
    });
  }
  return out;
}

template <typename T>
BasicTensor<T> add(const BasicTensor<T>& a, const BasicTensor<T>& b, BasicTape<T>* tape) {
  if (a.shape() != b.shape()) {
    throw InvalidInput("add: shape mismatch " + shape_string(a.shape()) + " vs " + shape_string(b.shape()));
  }
  BasicTensor<T> out(a.shape());
  for (std::size_t i = 0; i < a.numel(); ++i) out.ptr()[i] = a.ptr()[i] + b.ptr()[i];
  if (BasicTape<T>::active(tape, {&a, &b})) {
    out.set_requires_grad(true);
    tape->record([a, b, out]() mutable {
      if (!out.has_grad()) return;
      const auto gy = out.grad();
      if (a.requires_grad()) detail::accumulate_grad(a, std::span<const T>(gy));
      if (b.requires_grad()) detail::accumulate_grad(b, std::span<const T>(gy));
    });
  }
  return out;
}

template <typename T>
BasicTensor<T> mul(const BasicTensor<T>& a, const BasicTensor<T>& b, BasicTape<T>* tape) {
  if (a.shape() != b.shape()) {
    throw InvalidInput("mul: shape mismatch " + shape_string(a.shape()) + " vs " + shape_string(b.shape()));
  }
  BasicTensor<T> out(a.shape());
  for (std::size_t i = 0; i < a.numel(); ++i) out.ptr()[i] = a.ptr()[i] * b.ptr()[i];
  detail::check_finite(out, "mul");
  if (BasicTape<T>::active(tape, {&a, &b})) {
    out.set_requires_grad(true);
    tape->record([a, b, out]() mutable {
      if (!out.has_grad()) return;
      const auto gy = out.grad();
      if (a.requires_grad()) {
        auto ga = a.grad();
        for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += gy[i] * b.ptr()[i];
      }
      if (b.requires_grad()) {
        auto gb = b.grad();
        for (std::size_t i = 0; i < gb.size(); ++i) gb[i] += gy[i] * a.ptr()[i];
      }
    });
  }
  return out;
}

template <typename T>
BasicTensor<T> sum(const BasicTensor<T>& x, BasicTape<T>* tape) {
  double acc = 0.0;
  for (const T v : x.data()) acc += v;
  BasicTensor<T> out({1}, static_cast<T>(acc));
  detail::check_finite(out, "sum");
  if (BasicTape<T>::active(tape, {&x})) {
    out.set_requires_grad(true);
    tape->record([x, out]() mutable {
      if (!out.has_grad()) return;
      const T g = out.grad()[0];
      for (T& v : x.grad()) v += g;
    });
  }
  return out;
}

template <typename T>
BasicTensor<T> mean(const BasicTensor<T>& x, BasicTape<T>* tape) {
  if (x.numel() == 0) throw InvalidInput("mean: empty tensor");
  double acc = 0.0;
  for (const T v : x.data()) acc += v;
  const double inv = 1.0 / static_cast<double>(x.numel());
  BasicTensor<T> out({1}, static_cast<T>(acc * inv));
  detail::check_finite(out, "mean");
  if (BasicTape<T>::active(tape, {&x})) {
    out.set_requires_grad(true);
    tape->record([x, out, inv]() mutable {
      if (!out.has_grad()) return;
      const T g = static_cast<T>(out.grad()[0] * inv);
      for (T& v : x.grad()) v += g;
    });
  }
  return out;
}

template <typename T>
BasicTensor<T> per_sample_mse(const BasicTensor<T>& pred, const BasicTensor<T>& target, BasicTape<T>* tape) {
  if (pred.rank() != 3 || pred.shape() != target.shape()) {
    throw InvalidInput("per_sample_mse: expected equal [N,C,L] shapes, got " + shape_string(pred.shape()) +
                       " and " + shape_string(target.shape()));
  }
  const std::size_t n = pred.dim(0), per = pred.dim(1) * pred.dim(2);
  const double inv_l = 1.0 / static_cast<double>(pred.dim(2));
  BasicTensor<T> out({n});
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t e = 0; e < per; ++e) {
      const double d = static_cast<double>(pred.ptr()[i * per + e]) - target.ptr()[i * per + e];
      acc += d * d;
    }
    out.ptr()[i] = static_cast<T>(acc * inv_l);
  }
  detail::check_finite(out, "per_sample_mse");
  if (BasicTape<T>::active(tape, {&pred})) {
    out.set_requires_grad(true);
    tape->record([pred, target, out, n, per, inv_l]() mutable {
      if (!out.has_grad()) return;
      const auto gy = out.grad();
      auto gp = pred.grad();
      for (std::size_t i = 0; i < n; ++i) {
        const double scale = 2.0 * inv_l * gy[i];
        for (std::size_t e = 0; e < per; ++e) {
          const std::size_t j = i * per + e;
          gp[j] += static_cast<T>(scale * (static_cast<double>(pred.ptr()[j]) - target.ptr()[j]));
        }
      }
    });
  }
  return out;
}

template <typename T>
BasicTensor<T> map_elementwise(const BasicTensor<T>& x, const std::function<double(double)>& f,
                               const std::function<double(double)>& df, BasicTape<T>* tape) {
  BasicTensor<T> out(x.shape());
  for (std::size_t i = 0; i < x.numel(); ++i) out.ptr()[i] = static_cast<T>(f(x.ptr()[i]));
  detail::check_finite(out, "map_elementwise");
  if (BasicTape<T>::active(tape, {&x})) {
    out.set_requires_grad(true);
    tape->record([x, out, df]() mutable {
      if (!out.has_grad()) return;
      const auto gy = out.grad();
      auto gx = x.grad();
      for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += static_cast<T>(gy[i] * df(x.ptr()[i]));
    });
  }
  return out;
}

#define CCIC_INSTANTIATE(T)                                                                               \
  template void detail::check_finite(const BasicTensor<T>&, const char*);                                 \
  template void detail::accumulate_grad(const BasicTensor<T>&, std::span<const T>);                             \
  template BasicTensor<T> leaky_relu(const BasicTensor<T>&, double, BasicTape<T>*);                       \
  template BasicTensor<T> concat_channels(const BasicTensor<T>&, const BasicTensor<T>&, BasicTape<T>*);   \
  template BasicTensor<T> concat_features(const BasicTensor<T>&, const BasicTensor<T>&, BasicTape<T>*);   \
  template BasicTensor<T> swap_last_axes(const BasicTensor<T>&, BasicTape<T>*);                           \
  template BasicTensor<T> add(const BasicTensor<T>&, const BasicTensor<T>&, BasicTape<T>*);               \
  template BasicTensor<T> mul(const BasicTensor<T>&, const BasicTensor<T>&, BasicTape<T>*);               \
  template BasicTensor<T> sum(const BasicTensor<T>&, BasicTape<T>*);                                      \
  template BasicTensor<T> mean(const BasicTensor<T>&, BasicTape<T>*);                                     \
  template BasicTensor<T> per_sample_mse(const BasicTensor<T>&, const BasicTensor<T>&, BasicTape<T>*);    \
  template BasicTensor<T> map_elementwise(const BasicTensor<T>&, const std::function<double(double)>&,    \
                                          const std::function<double(double)>&, BasicTape<T>*);

CCIC_INSTANTIATE(float)
CCIC_INSTANTIATE(double)

#undef CCIC_INSTANTIATE

}  // namespace ccic::nn
