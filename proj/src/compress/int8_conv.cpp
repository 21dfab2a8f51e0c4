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

#include "ccic/compress/int8_conv.hpp"

#include <limits>

#include "ccic/error.hpp"

namespace ccic::compress {

QActivation quantize_activation(const nn::Tensor& x) {
  const QParams qp = calibrate(x, QScheme::per_tensor);
  QActivation a;
  a.shape = x.shape();
  a.scale = qp.scale[0];
  a.zero_point = qp.zero_point[0];
  a.values.resize(x.numel());
  const float* xp = x.ptr();
  for (std::size_t i = 0; i < a.values.size(); ++i) a.values[i] = quantize_value(xp[i], a.scale, a.zero_point);
  return a;
}

std::int64_t accumulator_bound(std::size_t terms) {
  // |q - zp| <= 255 for q, zp in [-128, 127].
  return static_cast<std::int64_t>(terms) * 255 * 255;
}

nn::Tensor int8_conv(const models::ConvLayer& layer, const QActivation& x) {
  if (!layer.quant) throw InvalidInput("int8_conv: layer '" + layer.name + "' is not quantized");
  const auto& q = *layer.quant;
  const auto& g = layer.p.geom;
  const nn::Shape& ws = layer.p.weight.shape();
  const std::size_t k = ws[2], groups = static_cast<std::size_t>(g.groups);
  const std::size_t c_in = layer.in_channels(), c_out = layer.out_channels();
  if (x.shape.size() != 3 || x.shape[1] != c_in) {
    throw InvalidInput("int8_conv: layer '" + layer.name + "' expects " + std::to_string(c_in) + " input channels");
  }
  const std::size_t cin_g = c_in / groups, cout_g = c_out / groups;
  if (accumulator_bound(cin_g * k) > std::numeric_limits<std::int32_t>::max()) {
    throw InvalidInput("int8_conv: layer '" + layer.name + "' could overflow a 32-bit accumulator");
  }
  const std::size_t n = x.shape[0], l_in = x.shape[2];
  const std::size_t l_out = layer.transposed ? nn::conv_transpose1d_output_length(l_in, static_cast<int>(k), g)
                                             : nn::conv1d_output_length(l_in, static_cast<int>(k), g);
  const long stride = g.stride, pad = g.padding;

  std::vector<std::int16_t> xd(x.values.size());
  for (std::size_t i = 0; i < xd.size(); ++i) xd[i] = static_cast<std::int16_t>(x.values[i] - x.zero_point);
  std::vector<std::int16_t> wd(q.values.size());
  for (std::size_t i = 0; i < wd.size(); ++i) {
    wd[i] = static_cast<std::int16_t>(q.values[i] - q.zero_point[layer.out_channel_of(i)]);
  }

  nn::Tensor out({n, c_out, l_out});
  float* op = out.ptr();
  const float* bias = layer.p.bias.defined() ? layer.p.bias.ptr() : nullptr;
  std::vector<std::int32_t> acc(l_out);
  for (std::size_t b = 0; b < n; ++b) {
    for (std::size_t gi = 0; gi < groups; ++gi) {
      for (std::size_t ol = 0; ol < cout_g; ++ol) {
        const std::size_t oc = gi * cout_g + ol;
        std::fill(acc.begin(), acc.end(), 0);
        for (std::size_t il = 0; il < cin_g; ++il) {
          const std::size_t ic = gi * cin_g + il;
          const std::int16_t* xr = xd.data() + (b * c_in + ic) * l_in;
          const std::int16_t* wr =
              layer.transposed ? wd.data() + (ic * cout_g + ol) * k : wd.data() + (oc * cin_g + il) * k;
          for (std::size_t kk = 0; kk < k; ++kk) {
            const std::int32_t w = wr[kk];
            if (w == 0) continue;
            if (!layer.transposed) {
              for (std::size_t t = 0; t < l_out; ++t) {
                const long s = static_cast<long>(t) * stride - pad + static_cast<long>(kk);
                if (s >= 0 && s < static_cast<long>(l_in)) acc[t] += w * xr[s];
              }
            } else {
              for (std::size_t t = 0; t < l_in; ++t) {
                const long o = static_cast<long>(t) * stride - pad + static_cast<long>(kk);
                if (o >= 0 && o < static_cast<long>(l_out)) acc[static_cast<std::size_t>(o)] += w * xr[t];
              }
            }
          }
        }
        const double s = static_cast<double>(x.scale) * q.scale[oc];
        const double bv = bias ? bias[oc] : 0.0;
        float* orow = op + (b * c_out + oc) * l_out;
        for (std::size_t t = 0; t < l_out; ++t) orow[t] = static_cast<float>(acc[t] * s + bv);
      }
    }
  }
  return out;
}

nn::Tensor fake_quant_conv(const models::ConvLayer& layer, const nn::Tensor& x) {
  if (!layer.quant) throw InvalidInput("fake_quant_conv: layer '" + layer.name + "' is not quantized");
  const nn::Tensor xq = fake_quant(x, calibrate(x, QScheme::per_tensor));
  return layer.transposed ? nn::conv_transpose1d(xq, layer.p) : nn::conv1d(xq, layer.p);
}

double output_lsb(const nn::Tensor& reference) {
  return calibrate(reference, QScheme::per_tensor).scale[0];
}

}  // namespace ccic::compress
