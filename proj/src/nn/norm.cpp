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

template <typename T>
BasicTensor<T> group_norm(const BasicTensor<T>& x, int groups, double eps, const BasicTensor<T>& gamma,
                          const BasicTensor<T>& beta, BasicTape<T>* tape) {
  if (x.rank() != 3) throw InvalidInput("group_norm: expected [N,C,L], got " + shape_string(x.shape()));
  const std::size_t n = x.dim(0), c = x.dim(1), l = x.dim(2);
  if (groups < 1 || c % static_cast<std::size_t>(groups) != 0) {
    throw InvalidInput("group_norm: " + std::to_string(groups) + " groups do not divide " +
                       std::to_string(c) + " channels");
  }
  for (const auto* t : {&gamma, &beta}) {
    if (t->defined() && (t->rank() != 1 || t->dim(0) != c)) {
      throw InvalidInput("group_norm: affine parameter shape " + shape_string(t->shape()) +
                         " does not match " + std::to_string(c) + " channels");
    }
  }
  const std::size_t g = static_cast<std::size_t>(groups);
  const std::size_t cpg = c / g;
  const std::size_t span = cpg * l;

  BasicTensor<T> out(x.shape());
  std::vector<double> mean_v(n * g), rstd_v(n * g);
  const T* xp = x.ptr();
  T* op = out.ptr();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t gi = 0; gi < g; ++gi) {
      const T* base = xp + (i * c + gi * cpg) * l;
      double s = 0.0;
      for (std::size_t e = 0; e < span; ++e) s += base[e];
      const double mu = s / static_cast<double>(span);
      double v = 0.0;
      for (std::size_t e = 0; e < span; ++e) {
        const double d = base[e] - mu;
        v += d * d;
      }
      v /= static_cast<double>(span);
      const double rstd = 1.0 / std::sqrt(v + eps);
      mean_v[i * g + gi] = mu;
      rstd_v[i * g + gi] = rstd;
      for (std::size_t cc = 0; cc < cpg; ++cc) {
        const std::size_t ch = gi * cpg + cc;
        const double ga = gamma.defined() ? gamma.ptr()[ch] : 1.0;
        const double be = beta.defined() ? beta.ptr()[ch] : 0.0;
        const T* xr = base + cc * l;
        T* orow = op + (i * c + ch) * l;
        for (std::size_t t = 0; t < l; ++t) orow[t] = static_cast<T>((xr[t] - mu) * rstd * ga + be);
      }
    }
  }
  detail::check_finite(out, "group_norm");

  if (BasicTape<T>::active(tape, {&x, &gamma, &beta})) {
    out.set_requires_grad(true);
    tape->record([x, gamma, beta, out, mean_v = std::move(mean_v), rstd_v = std::move(rstd_v), n, c, l, g,
                  cpg, span]() mutable {
      if (!out.has_grad()) return;
      const T* gy = out.grad().data();
      const T* xp = x.ptr();
      std::vector<T> gx(x.requires_grad() ? x.numel() : 0);
      std::vector<double> ggamma(c, 0.0), gbeta(c, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t gi = 0; gi < g; ++gi) {
          const double mu = mean_v[i * g + gi];
          const double rstd = rstd_v[i * g + gi];
          double sum_dxhat = 0.0, sum_dxhat_xhat = 0.0;
          for (std::size_t cc = 0; cc < cpg; ++cc) {
            const std::size_t ch = gi * cpg + cc;
            const double ga = gamma.defined() ? gamma.ptr()[ch] : 1.0;
            const std::size_t off = (i * c + ch) * l;
            for (std::size_t t = 0; t < l; ++t) {
              const double xhat = (xp[off + t] - mu) * rstd;
              const double dy = gy[off + t];
              ggamma[ch] += dy * xhat;
              gbeta[ch] += dy;
              sum_dxhat += dy * ga;
              sum_dxhat_xhat += dy * ga * xhat;
            }
          }
          if (gx.empty()) continue;
          const double m1 = sum_dxhat / static_cast<double>(span);
          const double m2 = sum_dxhat_xhat / static_cast<double>(span);
          for (std::size_t cc = 0; cc < cpg; ++cc) {
            const std::size_t ch = gi * cpg + cc;
            const double ga = gamma.defined() ? gamma.ptr()[ch] : 1.0;
            const std::size_t off = (i * c + ch) * l;
            for (std::size_t t = 0; t < l; ++t) {
              const double xhat = (xp[off + t] - mu) * rstd;
              gx[off + t] = static_cast<T>(rstd * (gy[off + t] * ga - m1 - xhat * m2));
            }
          }
        }
      }
      if (!gx.empty()) detail::accumulate_grad(x, std::span<const T>(gx));
      if (gamma.defined() && gamma.requires_grad()) {
        std::vector<T> tmp(ggamma.begin(), ggamma.end());
        detail::accumulate_grad(gamma, std::span<const T>(tmp));
      }
      if (beta.defined() && beta.requires_grad()) {
        std::vector<T> tmp(gbeta.begin(), gbeta.end());
        detail::accumulate_grad(beta, std::span<const T>(tmp));
      }
    });
  }
  return out;
}

template BasicTensor<float> group_norm(const BasicTensor<float>&, int, double, const BasicTensor<float>&,
                                       const BasicTensor<float>&, BasicTape<float>*);
template BasicTensor<double> group_norm(const BasicTensor<double>&, int, double, const BasicTensor<double>&,
                                        const BasicTensor<double>&, BasicTape<double>*);

}  // namespace ccic::nn
