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

#include <algorithm>
#include <cstring>
#include <string>

#include "ccic/error.hpp"
#include "ccic/nn/ops.hpp"
#include "ccic/nn/parallel.hpp"

namespace ccic::nn {
namespace {

// Both convolution directions reduce to three loops over a pair of
// "source" and "dest" feature maps linked by a weight [Cs, Cd/g, K]:
//
//   gather:  src_s[n, cs, t] = sum_{cd, k} w[cs, cd', k] * dst_d[n, cd, t*stride + k - pad]
//   scatter: dst_d[n, cd, t*stride + k - pad] += w[cs, cd', k] * src_s[n, cs, t]
//   wgrad:   gw[cs, cd', k] += sum_{n, t} src_s[n, cs, t] * dst_d[n, cd, t*stride + k - pad]
//
// conv1d forward is gather (s = output), its input gradient is scatter; for
// conv_transpose1d the roles swap.
struct Pairing {
  std::size_t n = 0;
  std::size_t cs = 0, ls = 0;  // "s" side channels/length
  std::size_t cd = 0, ld = 0;  // "d" side channels/length
  std::size_t k = 0;
  long stride = 1, pad = 0;
  std::size_t groups = 1;

  std::size_t cs_per_group() const { return cs / groups; }
  std::size_t cd_per_group() const { return cd / groups; }

  // Valid t in [t_lo, t_hi) such that 0 <= t*stride + off < ld.
  void t_range(long off, std::size_t& t_lo, std::size_t& t_hi) const {
    long lo = off >= 0 ? 0 : (-off + stride - 1) / stride;
    long hi_incl = (static_cast<long>(ld) - 1 - off);
    long hi = hi_incl < 0 ? 0 : hi_incl / stride + 1;
    hi = std::min<long>(hi, static_cast<long>(ls));
    lo = std::min(lo, hi);
    t_lo = static_cast<std::size_t>(lo);
    t_hi = static_cast<std::size_t>(hi);
  }
};

// Splits each d-side row into `stride` phases so strided taps read (or
// write) contiguous memory: phase q, slot i holds position i*stride + q.
template <typename T>
struct Phased {
  std::size_t len = 0;  // slots per phase
  std::vector<T> buf;   // [rows, stride, len]

  Phased(const Pairing& p, std::size_t rows) : len((p.ld + p.stride - 1) / p.stride) {
    buf.assign(rows * static_cast<std::size_t>(p.stride) * len, T{0});
  }
  T* row(const Pairing& p, std::size_t r) { return buf.data() + r * static_cast<std::size_t>(p.stride) * len; }
};

// Pointer `q` such that q[t] aliases position t*stride + off of a phased row.
template <typename T>
T* tap(const Pairing& p, T* phased_row, std::size_t len, long off) {
  const long ph = ((off % p.stride) + p.stride) % p.stride;
  const long base = (off - ph) / p.stride;
  return phased_row + static_cast<std::size_t>(ph) * len + base;
}

constexpr std::size_t kBlock = 4;
constexpr std::size_t kTile = 16;

constexpr std::size_t kChunkTiles = 16;

// acc[b][0..kTile) = sum_{j, kk} w[b][j][kk] * x[(j*stride + kk%stride)*row + kk/stride + i]
// for four consecutive output channels b; w rows are [cdg, k] per channel.
// `taps[wi]` is the packed-input offset of weight element wi = j*k + kk.
template <typename T>
void tile4(const T* x, const T* w, const std::size_t* taps, std::size_t wn, T* out, std::size_t out_stride) {
  T acc[kBlock][kTile] = {};
  for (std::size_t wi = 0; wi < wn; ++wi) {
    const T* xr = x + taps[wi];
    const T w0 = w[wi], w1 = w[wn + wi], w2 = w[2 * wn + wi], w3 = w[3 * wn + wi];
    for (std::size_t i = 0; i < kTile; ++i) {
      acc[0][i] += w0 * xr[i];
      acc[1][i] += w1 * xr[i];
      acc[2][i] += w2 * xr[i];
      acc[3][i] += w3 * xr[i];
    }
  }
  for (std::size_t b = 0; b < kBlock; ++b) std::copy(acc[b], acc[b] + kTile, out + b * out_stride);
}

template <typename T>
void tile1(const T* x, const T* w, const std::size_t* taps, std::size_t wn, T* out) {
  T acc[kTile] = {};
  for (std::size_t wi = 0; wi < wn; ++wi) {
    const T* xr = x + taps[wi];
    for (std::size_t i = 0; i < kTile; ++i) acc[i] += w[wi] * xr[i];
  }
  std::copy(acc, acc + kTile, out);
}

// float specialization holding the 4x16 accumulator in eight 8-lane vectors.
using f8 = float __attribute__((vector_size(32)));

inline f8 load8(const float* p) {
  f8 v;
  __builtin_memcpy(&v, p, sizeof v);
  return v;
}

inline void store8(float* p, f8 v) { __builtin_memcpy(p, &v, sizeof v); }

template <>
void tile4<float>(const float* x, const float* w, const std::size_t* taps, std::size_t wn, float* out,
                  std::size_t out_stride) {
  static_assert(kTile == 16 && kBlock == 4);
  f8 a0 = {}, a1 = {}, b0 = {}, b1 = {}, c0 = {}, c1 = {}, d0 = {}, d1 = {};
  for (std::size_t wi = 0; wi < wn; ++wi) {
    const float* xr = x + taps[wi];
    const f8 x0 = load8(xr), x1 = load8(xr + 8);
    const float w0 = w[wi], w1 = w[wn + wi], w2 = w[2 * wn + wi], w3 = w[3 * wn + wi];
    a0 += w0 * x0;
    a1 += w0 * x1;
    b0 += w1 * x0;
    b1 += w1 * x1;
    c0 += w2 * x0;
    c1 += w2 * x1;
    d0 += w3 * x0;
    d1 += w3 * x1;
  }
  store8(out, a0);
  store8(out + 8, a1);
  store8(out + out_stride, b0);
  store8(out + out_stride + 8, b1);
  store8(out + 2 * out_stride, c0);
  store8(out + 2 * out_stride + 8, c1);
  store8(out + 3 * out_stride, d0);
  store8(out + 3 * out_stride + 8, d1);
}

// Gather as a register-tiled kernel. The d side is packed once into
// [cd, stride phase, n * P] with the padding materialized, so every tap of
// every output position reads in bounds and samples sit back to back along
// one axis; a tile may straddle two samples and the overhang is dropped.
template <typename T>
void gather(const Pairing& p, const T* d, const T* w, T* s) {
  const std::size_t cdg = p.cd_per_group();
  const std::size_t csg = p.cs_per_group();
  const std::size_t st = static_cast<std::size_t>(p.stride);
  const std::size_t reach = (p.k - 1) / st;
  const std::size_t slot = p.ls + reach;  // P: padded positions per sample and phase
  const std::size_t span = p.n * slot;
  const std::size_t tiles = (span + kTile - 1) / kTile;
  const std::size_t row_len = tiles * kTile + reach + kTile;
  std::vector<T> packed(p.cd * st * row_len, T{0});
  for (std::size_t c = 0; c < p.cd; ++c) {
    for (std::size_t n = 0; n < p.n; ++n) {
      const T* in = d + (n * p.cd + c) * p.ld;
      // padded position u = t*stride + kk maps to phase u % stride, slot u / stride
      for (std::size_t i = 0; i < p.ld; ++i) {
        const std::size_t u = i + static_cast<std::size_t>(p.pad);
        const std::size_t q = u % st, m = u / st;
        if (m < slot) packed[(c * st + q) * row_len + n * slot + m] = in[i];
      }
    }
  }
  std::vector<std::size_t> taps(cdg * p.k);
  for (std::size_t j = 0; j < cdg; ++j) {
    for (std::size_t kk = 0; kk < p.k; ++kk) taps[j * p.k + kk] = (j * st + kk % st) * row_len + kk / st;
  }
  std::vector<T> out(p.cs * tiles * kTile);
  const std::size_t bpg = (csg + kBlock - 1) / kBlock;
  const std::size_t blocks = p.groups * bpg;
  const std::size_t chunks = (tiles + kChunkTiles - 1) / kChunkTiles;
  // Chunk-major order keeps one chunk of input resident while every output
  // block consumes it, so the working set does not grow with the batch.
  parallel_for(chunks * blocks, [&](std::size_t begin, std::size_t end) {
    for (std::size_t idx = begin; idx < end; ++idx) {
      const std::size_t chunk = idx / blocks, blk = idx % blocks;
      const std::size_t grp = blk / bpg;
      const std::size_t cs0 = grp * csg + (blk % bpg) * kBlock;
      const std::size_t nb = std::min(kBlock, grp * csg + csg - cs0);
      const std::size_t tile_end = std::min(tiles, (chunk + 1) * kChunkTiles);
      for (std::size_t tile = chunk * kChunkTiles; tile < tile_end; ++tile) {
        const std::size_t v0 = tile * kTile;
        const T* xbase = packed.data() + grp * cdg * st * row_len + v0;
        T* obase = out.data() + cs0 * tiles * kTile + v0;
        if (nb == kBlock) {
          tile4(xbase, w + cs0 * cdg * p.k, taps.data(), taps.size(), obase, tiles * kTile);
        } else {
          for (std::size_t b = 0; b < nb; ++b) {
            tile1(xbase, w + (cs0 + b) * cdg * p.k, taps.data(), taps.size(), obase + b * tiles * kTile);
          }
        }
      }
    }
  });
  for (std::size_t n = 0; n < p.n; ++n) {
    for (std::size_t c = 0; c < p.cs; ++c) {
      const T* src = out.data() + c * tiles * kTile + n * slot;
      std::copy(src, src + p.ls, s + (n * p.cs + c) * p.ls);
    }
  }
}

template <typename T>
void scatter(const Pairing& p, const T* s, const T* w, T* d) {
  const std::size_t cdg = p.cd_per_group();
  const std::size_t csg = p.cs_per_group();
  const std::size_t bpg = (cdg + kBlock - 1) / kBlock;
  const std::size_t stride = static_cast<std::size_t>(p.stride);
  const std::size_t plen = (p.ld + stride - 1) / stride;
  parallel_for(p.n * p.groups * bpg, [&](std::size_t begin, std::size_t end) {
    // Accumulate in phase-major scratch, interleave into d at the end.
    std::vector<T> scratch(kBlock * stride * plen);
    for (std::size_t idx = begin; idx < end; ++idx) {
      const std::size_t n = idx / (p.groups * bpg);
      const std::size_t grp = (idx / bpg) % p.groups;
      const std::size_t j0 = (idx % bpg) * kBlock;
      const std::size_t nb = std::min(kBlock, cdg - j0);
      std::fill(scratch.begin(), scratch.end(), T{0});
      T* rows[kBlock];
      for (std::size_t b = 0; b < kBlock; ++b) rows[b] = scratch.data() + b * stride * plen;
      for (std::size_t c = 0; c < csg; ++c) {
        const std::size_t cs = grp * csg + c;
        const T* srow = s + (n * p.cs + cs) * p.ls;
        for (std::size_t kk = 0; kk < p.k; ++kk) {
          const long off = static_cast<long>(kk) - p.pad;
          std::size_t lo = 0, hi = 0;
          p.t_range(off, lo, hi);
          if (lo >= hi) continue;
          if (nb == kBlock) {
            const T w0 = w[(cs * cdg + j0 + 0) * p.k + kk], w1 = w[(cs * cdg + j0 + 1) * p.k + kk];
            const T w2 = w[(cs * cdg + j0 + 2) * p.k + kk], w3 = w[(cs * cdg + j0 + 3) * p.k + kk];
            T* __restrict r0 = tap(p, rows[0], plen, off);
            T* __restrict r1 = tap(p, rows[1], plen, off);
            T* __restrict r2 = tap(p, rows[2], plen, off);
            T* __restrict r3 = tap(p, rows[3], plen, off);
            for (std::size_t t = lo; t < hi; ++t) {
              const T x = srow[t];
              r0[t] += w0 * x;
              r1[t] += w1 * x;
              r2[t] += w2 * x;
              r3[t] += w3 * x;
            }
          } else {
            for (std::size_t b = 0; b < nb; ++b) {
              const T wv = w[(cs * cdg + j0 + b) * p.k + kk];
              T* r = tap(p, rows[b], plen, off);
              for (std::size_t t = lo; t < hi; ++t) r[t] += wv * srow[t];
            }
          }
        }
      }
      for (std::size_t b = 0; b < nb; ++b) {
        T* out = d + (n * p.cd + grp * cdg + j0 + b) * p.ld;
        for (std::size_t i = 0; i < p.ld; ++i) out[i] = rows[b][(i % stride) * plen + i / stride];
      }
    }
  });
}

template <typename T>
void wgrad(const Pairing& p, const T* s, const T* d, T* gw) {
  const std::size_t cdg = p.cd_per_group();
  parallel_for(p.cs, [&](std::size_t begin, std::size_t end) {
    for (std::size_t cs = begin; cs < end; ++cs) {
      const std::size_t grp = cs / p.cs_per_group();
      for (std::size_t j = 0; j < cdg; ++j) {
        for (std::size_t kk = 0; kk < p.k; ++kk) {
          const long off = static_cast<long>(kk) - p.pad;
          std::size_t lo = 0, hi = 0;
          p.t_range(off, lo, hi);
          double acc = 0.0;
          for (std::size_t n = 0; n < p.n; ++n) {
            const T* srow = s + (n * p.cs + cs) * p.ls;
            const T* xrow = d + (n * p.cd + grp * cdg + j) * p.ld;
            T part{0};
            for (std::size_t t = lo; t < hi; ++t) part += srow[t] * xrow[static_cast<long>(t) * p.stride + off];
            acc += part;
          }
          gw[(cs * cdg + j) * p.k + kk] += static_cast<T>(acc);
        }
      }
    }
  });
}

template <typename T>
void add_bias(BasicTensor<T>& out, const BasicTensor<T>& bias) {
  if (!bias.defined()) return;
  const std::size_t n = out.dim(0), c = out.dim(1), l = out.dim(2);
  T* o = out.ptr();
  const T* b = bias.ptr();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t ch = 0; ch < c; ++ch) {
      T* row = o + (i * c + ch) * l;
      for (std::size_t t = 0; t < l; ++t) row[t] += b[ch];
    }
}

template <typename T>
std::vector<T> bias_grad(const BasicTensor<T>& gout_t) {
  const auto& sh = gout_t.shape();
  const std::size_t n = sh[0], c = sh[1], l = sh[2];
  std::vector<T> gb(c, T{0});
  const auto g = gout_t.grad();
  for (std::size_t ch = 0; ch < c; ++ch) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const T* row = g.data() + (i * c + ch) * l;
      for (std::size_t t = 0; t < l; ++t) acc += row[t];
    }
    gb[ch] = static_cast<T>(acc);
  }
  return gb;
}

void check_geometry(const ConvGeometry& g, const char* op) {
  if (g.stride < 1) throw InvalidInput(std::string(op) + ": stride must be >= 1");
  if (g.padding < 0) throw InvalidInput(std::string(op) + ": padding must be >= 0");
  if (g.groups < 1) throw InvalidInput(std::string(op) + ": groups must be >= 1");
}

template <typename T>
void check_bias(const BasicTensor<T>& bias, std::size_t c_out, const char* op) {
  if (bias.defined() && (bias.rank() != 1 || bias.dim(0) != c_out)) {
    throw InvalidInput(std::string(op) + ": bias shape " + shape_string(bias.shape()) +
                       " does not match " + std::to_string(c_out) + " output channels");
  }
}

}  // namespace

std::size_t conv1d_output_length(std::size_t l_in, int kernel, const ConvGeometry& g) {
  check_geometry(g, "conv1d");
  const long span = static_cast<long>(l_in) + 2L * g.padding - kernel;
  if (kernel < 1 || span < 0) {
    throw InvalidInput("conv1d: input length " + std::to_string(l_in) + " with padding " +
                       std::to_string(g.padding) + " is shorter than kernel " + std::to_string(kernel));
  }
  return static_cast<std::size_t>(span / g.stride + 1);
}

std::size_t conv_transpose1d_output_length(std::size_t l_in, int kernel, const ConvGeometry& g) {
  check_geometry(g, "conv_transpose1d");
  if (g.output_padding < 0 || g.output_padding >= g.stride) {
    throw InvalidInput("conv_transpose1d: output_padding must lie in [0, stride)");
  }
  const long len = (static_cast<long>(l_in) - 1) * g.stride - 2L * g.padding + kernel + g.output_padding;
  if (l_in == 0 || kernel < 1 || len <= 0) {
    throw InvalidInput("conv_transpose1d: geometry yields empty output");
  }
  return static_cast<std::size_t>(len);
}

template <typename T>
BasicTensor<T> conv1d(const BasicTensor<T>& x, const BasicConv1dParams<T>& p, BasicTape<T>* tape) {
  const auto& w = p.weight;
  if (x.rank() != 3 || w.rank() != 3) {
    throw InvalidInput("conv1d: expected x [N,C,L] and weight [C_out,C_in/g,k], got " +
                       shape_string(x.shape()) + " and " + shape_string(w.shape()));
  }
  check_geometry(p.geom, "conv1d");
  const std::size_t groups = static_cast<std::size_t>(p.geom.groups);
  const std::size_t c_in = x.dim(1), c_out = w.dim(0);
  if (c_in % groups != 0 || c_out % groups != 0 || w.dim(1) * groups != c_in) {
    throw InvalidInput("conv1d: channels/groups mismatch: x " + shape_string(x.shape()) + ", weight " +
                       shape_string(w.shape()) + ", groups " + std::to_string(groups));
  }
  check_bias(p.bias, c_out, "conv1d");
  const std::size_t k = w.dim(2);
  const std::size_t l_out = conv1d_output_length(x.dim(2), static_cast<int>(k), p.geom);

  Pairing pr;
  pr.n = x.dim(0);
  pr.cs = c_out;
  pr.ls = l_out;
  pr.cd = c_in;
  pr.ld = x.dim(2);
  pr.k = k;
  pr.stride = p.geom.stride;
  pr.pad = p.geom.padding;
  pr.groups = groups;

  BasicTensor<T> out({pr.n, c_out, l_out});
  gather(pr, x.ptr(), w.ptr(), out.ptr());
  add_bias(out, p.bias);
  detail::check_finite(out, "conv1d");

  if (BasicTape<T>::active(tape, {&x, &p.weight, &p.bias})) {
    out.set_requires_grad(true);
    tape->record([pr, x, w = p.weight, b = p.bias, out]() mutable {
      if (!out.has_grad()) return;
      const T* gy = out.grad().data();
      if (x.requires_grad()) {
        std::vector<T> gx(x.numel());
        scatter(pr, gy, w.ptr(), gx.data());
        detail::accumulate_grad(x, std::span<const T>(gx));
      }
      if (w.requires_grad()) wgrad(pr, gy, x.ptr(), w.grad().data());
      if (b.defined() && b.requires_grad()) {
        const auto gb = bias_grad(out);
        detail::accumulate_grad(b, std::span<const T>(gb));
      }
    });
  }
  return out;
}

template <typename T>
BasicTensor<T> conv_transpose1d(const BasicTensor<T>& x, const BasicConv1dParams<T>& p,
                                BasicTape<T>* tape) {
  const auto& w = p.weight;
  if (x.rank() != 3 || w.rank() != 3) {
    throw InvalidInput("conv_transpose1d: expected x [N,C,L] and weight [C_in,C_out/g,k], got " +
                       shape_string(x.shape()) + " and " + shape_string(w.shape()));
  }
  check_geometry(p.geom, "conv_transpose1d");
  const std::size_t groups = static_cast<std::size_t>(p.geom.groups);
  const std::size_t c_in = x.dim(1);
  if (w.dim(0) != c_in || c_in % groups != 0) {
    throw InvalidInput("conv_transpose1d: channels/groups mismatch: x " + shape_string(x.shape()) +
                       ", weight " + shape_string(w.shape()) + ", groups " + std::to_string(groups));
  }
  const std::size_t c_out = w.dim(1) * groups;
  check_bias(p.bias, c_out, "conv_transpose1d");
  const std::size_t k = w.dim(2);
  const std::size_t l_out = conv_transpose1d_output_length(x.dim(2), static_cast<int>(k), p.geom);

  Pairing pr;
  pr.n = x.dim(0);
  pr.cs = c_in;
  pr.ls = x.dim(2);
  pr.cd = c_out;
  pr.ld = l_out;
  pr.k = k;
  pr.stride = p.geom.stride;
  pr.pad = p.geom.padding;
  pr.groups = groups;

  BasicTensor<T> out({pr.n, c_out, l_out});
  scatter(pr, x.ptr(), w.ptr(), out.ptr());
  add_bias(out, p.bias);
  detail::check_finite(out, "conv_transpose1d");

  if (BasicTape<T>::active(tape, {&x, &p.weight, &p.bias})) {
    out.set_requires_grad(true);
    tape->record([pr, x, w = p.weight, b = p.bias, out]() mutable {
      if (!out.has_grad()) return;
      const T* gy = out.grad().data();
      if (x.requires_grad()) {
        std::vector<T> gx(x.numel());
        gather(pr, gy, w.ptr(), gx.data());
        detail::accumulate_grad(x, std::span<const T>(gx));
      }
      if (w.requires_grad()) wgrad(pr, x.ptr(), gy, w.grad().data());
      if (b.defined() && b.requires_grad()) {
        const auto gb = bias_grad(out);
        detail::accumulate_grad(b, std::span<const T>(gb));
      }
    });
  }
  return out;
}

template BasicTensor<float> conv1d(const BasicTensor<float>&, const BasicConv1dParams<float>&, BasicTape<float>*);
template BasicTensor<double> conv1d(const BasicTensor<double>&, const BasicConv1dParams<double>&, BasicTape<double>*);
template BasicTensor<float> conv_transpose1d(const BasicTensor<float>&, const BasicConv1dParams<float>&,
                                             BasicTape<float>*);
template BasicTensor<double> conv_transpose1d(const BasicTensor<double>&, const BasicConv1dParams<double>&,
                                              BasicTape<double>*);

}  // namespace ccic::nn
