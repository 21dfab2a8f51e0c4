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

#include "ccic/nn/lstm.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "ccic/error.hpp"
#include "ccic/nn/ops.hpp"

namespace ccic::nn {
namespace {

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

template <typename T>
void check_param(const BasicTensor<T>& t, const Shape& want, const char* name) {
  if (!t.defined() || t.shape() != want) {
    throw InvalidInput(std::string("lstm_forward: ") + name + " must have shape " + shape_string(want) +
                       (t.defined() ? ", got " + shape_string(t.shape()) : std::string(", got undefined")));
  }
}

}  // namespace

template <typename T>
LstmResult<T> lstm_forward(const BasicTensor<T>& x, const BasicLstmParams<T>& p, const BasicTensor<T>& h0,
                           const BasicTensor<T>& c0, bool reverse, BasicTape<T>* tape) {
  if (x.rank() != 3 || x.dim(2) != p.input_size) {
    throw InvalidInput("lstm_forward: expected x [N,L," + std::to_string(p.input_size) + "], got " +
                       shape_string(x.shape()));
  }
  const std::size_t n = x.dim(0), len = x.dim(1), c = p.input_size, h = p.hidden_size, g4 = 4 * h;
  check_param(p.w_ih, {g4, c}, "w_ih");
  check_param(p.w_hh, {g4, h}, "w_hh");
  check_param(p.b_ih, {g4}, "b_ih");
  check_param(p.b_hh, {g4}, "b_hh");
  if (h0.defined()) check_param(h0, {n, h}, "h0");
  if (c0.defined()) check_param(c0, {n, h}, "c0");

  LstmResult<T> res;
  res.output = BasicTensor<T>({n, len, h});
  res.h_n = BasicTensor<T>({n, h});
  res.c_n = BasicTensor<T>({n, h});

  // Activated gates i, f, g, o and cell states, indexed by [n, t].
  std::vector<double> gates(n * len * g4), cells(n * len * h);
  const T* xp = x.ptr();
  const T* wih = p.w_ih.ptr();
  const T* whh = p.w_hh.ptr();
  std::vector<double> pre(g4), hprev(h), cprev(h);
  for (std::size_t b = 0; b < n; ++b) {
    for (std::size_t j = 0; j < h; ++j) {
      hprev[j] = h0.defined() ? h0.ptr()[b * h + j] : 0.0;
      cprev[j] = c0.defined() ? c0.ptr()[b * h + j] : 0.0;
    }
    for (std::size_t step = 0; step < len; ++step) {
      const std::size_t t = reverse ? len - 1 - step : step;
      const T* xt = xp + (b * len + t) * c;
      for (std::size_t r = 0; r < g4; ++r) {
        double acc = static_cast<double>(p.b_ih.ptr()[r]) + p.b_hh.ptr()[r];
        const T* wr = wih + r * c;
        for (std::size_t k = 0; k < c; ++k) acc += static_cast<double>(wr[k]) * xt[k];
        const T* ur = whh + r * h;
        for (std::size_t k = 0; k < h; ++k) acc += static_cast<double>(ur[k]) * hprev[k];
        pre[r] = acc;
      }
      double* gt = gates.data() + (b * len + t) * g4;
      double* ct = cells.data() + (b * len + t) * h;
      T* ht = res.output.ptr() + (b * len + t) * h;
      for (std::size_t j = 0; j < h; ++j) {
        const double ig = sigmoid(pre[j]);
        const double fg = sigmoid(pre[h + j]);
        const double gg = std::tanh(pre[2 * h + j]);
        const double og = sigmoid(pre[3 * h + j]);
        gt[j] = ig;
        gt[h + j] = fg;
        gt[2 * h + j] = gg;
        gt[3 * h + j] = og;
        const double cn = fg * cprev[j] + ig * gg;
        ct[j] = cn;
        const double hn = og * std::tanh(cn);
        ht[j] = static_cast<T>(hn);
        cprev[j] = cn;
        hprev[j] = hn;
      }
    }
    for (std::size_t j = 0; j < h; ++j) {
      res.h_n.ptr()[b * h + j] = static_cast<T>(hprev[j]);
      res.c_n.ptr()[b * h + j] = static_cast<T>(cprev[j]);
    }
  }
  detail::check_finite(res.output, "lstm_forward");

  if (BasicTape<T>::active(tape, {&x, &p.w_ih, &p.w_hh, &p.b_ih, &p.b_hh, &h0, &c0})) {
    res.output.set_requires_grad(true);
    tape->record([x, p, h0, c0, out = res.output, gates = std::move(gates), cells = std::move(cells), n, len, c,
                  h, g4, reverse]() mutable {
      if (!out.has_grad()) return;
      const T* gy = out.grad().data();
      const T* xp = x.ptr();
      const T* hs = out.ptr();
      std::vector<double> gw_ih(g4 * c, 0.0), gw_hh(g4 * h, 0.0), gb(g4, 0.0);
      std::vector<double> gx(x.requires_grad() ? x.numel() : 0, 0.0);
      std::vector<double> dh_next(h), dc_next(h), dpre(g4), hprev(h), cprev(h);
      std::vector<double> gh0(h0.defined() ? n * h : 0, 0.0), gc0(c0.defined() ? n * h : 0, 0.0);
      const T* wih = p.w_ih.ptr();
      const T* whh = p.w_hh.ptr();
      for (std::size_t b = 0; b < n; ++b) {
        std::fill(dh_next.begin(), dh_next.end(), 0.0);
        std::fill(dc_next.begin(), dc_next.end(), 0.0);
        for (std::size_t step = len; step-- > 0;) {
          const std::size_t t = reverse ? len - 1 - step : step;
          const bool first = step == 0;
          const std::size_t tp = reverse ? t + 1 : t - 1;  // previous step in scan order
          for (std::size_t j = 0; j < h; ++j) {
            if (first) {
              hprev[j] = h0.defined() ? h0.ptr()[b * h + j] : 0.0;
              cprev[j] = c0.defined() ? c0.ptr()[b * h + j] : 0.0;
            } else {
              hprev[j] = hs[(b * len + tp) * h + j];
              cprev[j] = cells[(b * len + tp) * h + j];
            }
          }
          const double* gt = gates.data() + (b * len + t) * g4;
          const double* ct = cells.data() + (b * len + t) * h;
          for (std::size_t j = 0; j < h; ++j) {
            const double ig = gt[j], fg = gt[h + j], gg = gt[2 * h + j], og = gt[3 * h + j];
            const double tc = std::tanh(ct[j]);
            const double dh = gy[(b * len + t) * h + j] + dh_next[j];
            const double dc = dh * og * (1.0 - tc * tc) + dc_next[j];
            dpre[j] = dc * gg * ig * (1.0 - ig);
            dpre[h + j] = dc * cprev[j] * fg * (1.0 - fg);
            dpre[2 * h + j] = dc * ig * (1.0 - gg * gg);
            dpre[3 * h + j] = dh * tc * og * (1.0 - og);
            dc_next[j] = dc * fg;
          }
          const T* xt = xp + (b * len + t) * c;
          std::fill(dh_next.begin(), dh_next.end(), 0.0);
          for (std::size_t r = 0; r < g4; ++r) {
            const double d = dpre[r];
            gb[r] += d;
            double* gwr = gw_ih.data() + r * c;
            for (std::size_t k = 0; k < c; ++k) gwr[k] += d * xt[k];
            double* gur = gw_hh.data() + r * h;
            for (std::size_t k = 0; k < h; ++k) gur[k] += d * hprev[k];
            const T* ur = whh + r * h;
            for (std::size_t k = 0; k < h; ++k) dh_next[k] += d * ur[k];
            if (!gx.empty()) {
              double* gxt = gx.data() + (b * len + t) * c;
              const T* wr = wih + r * c;
              for (std::size_t k = 0; k < c; ++k) gxt[k] += d * wr[k];
            }
          }
        }
        for (std::size_t j = 0; j < h; ++j) {
          if (!gh0.empty()) gh0[b * h + j] = dh_next[j];
          if (!gc0.empty()) gc0[b * h + j] = dc_next[j];
        }
      }
      auto push = [](const BasicTensor<T>& dst, const std::vector<double>& src) {
        if (!dst.defined() || !dst.requires_grad()) return;
        std::vector<T> tmp(src.begin(), src.end());
        detail::accumulate_grad(dst, std::span<const T>(tmp));
      };
      push(x, gx);
      push(p.w_ih, gw_ih);
      push(p.w_hh, gw_hh);
      push(p.b_ih, gb);
      push(p.b_hh, gb);
      push(h0, gh0);
      push(c0, gc0);
    });
  }
  return res;
}

template LstmResult<float> lstm_forward(const BasicTensor<float>&, const BasicLstmParams<float>&,
                                        const BasicTensor<float>&, const BasicTensor<float>&, bool,
                                        BasicTape<float>*);
template LstmResult<double> lstm_forward(const BasicTensor<double>&, const BasicLstmParams<double>&,
                                         const BasicTensor<double>&, const BasicTensor<double>&, bool,
                                         BasicTape<double>*);

}  // namespace ccic::nn
