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

#include "ccic/models/model.hpp"

#include <cmath>
#include <random>

#include "ccic/error.hpp"

namespace ccic::models {
namespace {

using nn::Shape;
using nn::Tensor;

std::size_t sz(int v) { return static_cast<std::size_t>(v); }

void fill_uniform(Tensor& t, double bound, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-bound, bound);
  for (auto& v : t.data()) v = static_cast<float>(u(rng));
}

/// Conv with He-uniform fan-in init and zero bias. Weight layout follows
/// conv1d ([C_out, C_in/g, k]) or conv_transpose1d ([C_in, C_out/g, k]).
ConvLayer make_conv(std::string name, std::size_t c_in, std::size_t c_out, std::size_t k, nn::ConvGeometry g,
                    bool transposed, std::mt19937_64& rng) {
  ConvLayer l;
  l.name = std::move(name);
  l.transposed = transposed;
  l.p.geom = g;
  const std::size_t groups = sz(g.groups);
  const Shape ws = transposed ? Shape{c_in, c_out / groups, k} : Shape{c_out, c_in / groups, k};
  l.p.weight = Tensor(ws);
  fill_uniform(l.p.weight, std::sqrt(6.0 / static_cast<double>(ws[1] * k)), rng);
  l.p.bias = Tensor({c_out});
  return l;
}

/// 3-tap stage: dense, or depthwise (groups = C_in) followed by pointwise.
ConvStage make_stage(const std::string& name, std::size_t c_in, std::size_t c_out, int k, int stride,
                     bool transposed, bool depthwise, std::mt19937_64& rng) {
  const int pad = k / 2;
  const int out_pad = transposed ? stride - 1 : 0;
  ConvStage st;
  if (!depthwise) {
    st.push_back(make_conv(name, c_in, c_out, sz(k), {stride, pad, 1, out_pad}, transposed, rng));
  } else {
    st.push_back(make_conv(name + ".dw", c_in, c_in, sz(k), {stride, pad, static_cast<int>(c_in), out_pad},
                           transposed, rng));
    st.push_back(make_conv(name + ".pw", c_in, c_out, 1, {1, 0, 1, 0}, false, rng));
  }
  return st;
}

NormLayer make_norm(std::string name, std::size_t c, int groups) {
  return {std::move(name), groups, Tensor({c}, 1.0f), Tensor({c}, 0.0f)};
}

nn::LstmParams make_lstm(std::size_t c_in, std::size_t h, std::mt19937_64& rng) {
  nn::LstmParams p;
  p.input_size = c_in;
  p.hidden_size = h;
  p.w_ih = Tensor({4 * h, c_in});
  p.w_hh = Tensor({4 * h, h});
  p.b_ih = Tensor({4 * h});
  p.b_hh = Tensor({4 * h});
  const double b = 1.0 / std::sqrt(static_cast<double>(h));
  for (Tensor* t : {&p.w_ih, &p.w_hh, &p.b_ih, &p.b_hh}) fill_uniform(*t, b, rng);
  return p;
}

Tensor run_conv(const ConvLayer& l, const Tensor& x, const ForwardOptions& o) {
  if (o.conv_override) return o.conv_override(l, x);
  nn::Conv1dParams p = l.p;
  if (o.weight_transform) p.weight = o.weight_transform(l, o.tape);
  return l.transposed ? nn::conv_transpose1d(x, p, o.tape) : nn::conv1d(x, p, o.tape);
}

Tensor run_stage(const ConvStage& st, Tensor x, const ForwardOptions& o) {
  for (const auto& l : st) x = run_conv(l, x, o);
  return x;
}

Tensor norm_act(const NormLayer& n, const Tensor& x, double slope, const ForwardOptions& o) {
  return nn::leaky_relu(nn::group_norm(x, n.groups, 1e-5, n.gamma, n.beta, o.tape), slope, o.tape);
}

}  // namespace

std::size_t ConvLayer::in_channels() const {
  return transposed ? p.weight.dim(0) : p.weight.dim(1) * sz(p.geom.groups);
}

std::size_t ConvLayer::out_channels() const {
  return transposed ? p.weight.dim(1) * sz(p.geom.groups) : p.weight.dim(0);
}

std::size_t ConvLayer::out_channel_of(std::size_t idx) const {
  const std::size_t k = p.weight.dim(2), d1 = p.weight.dim(1);
  const std::size_t row = idx / k;  // index into [dim0, dim1]
  if (!transposed) return row / d1;
  const std::size_t i = row / d1, o = row % d1;
  const std::size_t in_per_group = p.weight.dim(0) / sz(p.geom.groups);
  return (i / in_per_group) * d1 + o;
}

void ConvLayer::apply_mask() {
  if (!mask.defined()) return;
  auto w = p.weight.data();
  const auto m = std::as_const(mask).data();
  for (std::size_t i = 0; i < w.size(); ++i)
    if (m[i] == 0.0f) w[i] = 0.0f;
}

Model::Model(ModelConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  std::mt19937_64 rng(cfg_.seed);
  const int k = cfg_.kernel_size, g = cfg_.norm_groups;
  std::size_t ch = sz(cfg_.in_channels);
  for (std::size_t i = 0; i < cfg_.enc_filters.size(); ++i) {
    const std::size_t out = sz(cfg_.enc_filters[i]);
    const std::string pre = "enc" + std::to_string(i + 1);
    EncoderBlock b;
    b.conv1 = make_stage(pre + ".conv1", ch, out, k, cfg_.enc_strides[i], false, cfg_.depthwise, rng);
    b.norm1 = make_norm(pre + ".norm1", out, g);
    b.conv2 = make_stage(pre + ".conv2", out, out, k, 1, false, cfg_.depthwise, rng);
    b.norm2 = make_norm(pre + ".norm2", out, g);
    encoder_.push_back(std::move(b));
    ch = out;
  }
  if (cfg_.lstm_hidden > 0) {
    const std::size_t h = sz(cfg_.lstm_hidden);
    const std::size_t dirs = cfg_.lstm_bidirectional ? 2 : 1;
    std::size_t in = ch;
    for (int l = 0; l < cfg_.lstm_layers; ++l) {
      LstmLayer layer;
      layer.name = "bottleneck.lstm" + std::to_string(l + 1);
      layer.bidirectional = cfg_.lstm_bidirectional;
      layer.fwd = make_lstm(in, h, rng);
      if (layer.bidirectional) layer.bwd = make_lstm(in, h, rng);
      bottleneck_.lstm.push_back(std::move(layer));
      in = h * dirs;
    }
    bottleneck_.adapter = make_conv("bottleneck.adapter", in, ch, 1, {1, 0, 1, 0}, false, rng);
  }
  for (std::size_t j = cfg_.enc_filters.size() - 1; j-- > 0;) {
    const std::size_t in = sz(cfg_.enc_filters[j + 1]), out = sz(cfg_.enc_filters[j]);
    const std::string pre = "dec" + std::to_string(decoder_.size() + 1);
    DecoderBlock d;
    d.up = make_stage(pre + ".up", in, out, k, cfg_.enc_strides[j + 1], true, cfg_.depthwise, rng);
    d.norm_up = make_norm(pre + ".norm_up", out, g);
    d.conv = make_stage(pre + ".conv", 2 * out, out, k, 1, false, cfg_.depthwise, rng);
    d.norm = make_norm(pre + ".norm", out, g);
    decoder_.push_back(std::move(d));
  }
  head_ = make_conv("head", sz(cfg_.enc_filters.front()), sz(cfg_.in_channels), 1, {1, 0, 1, 0}, false, rng);
}

void Model::check_length(std::size_t length) const {
  const std::size_t m = cfg_.length_multiple();
  if (length == 0 || length % m != 0) {
    throw InvalidInput(cfg_.name() + ": input length " + std::to_string(length) + " must be a positive multiple of " +
                       std::to_string(m) + " (product of encoder strides)");
  }
}

Tensor Model::forward(const Tensor& x, nn::Tape* tape) const {
  ForwardOptions o;
  o.tape = tape;
  return forward(x, o);
}

Tensor Model::forward(const Tensor& x, const ForwardOptions& o) const {
  if (x.rank() != 3 || x.dim(1) != sz(cfg_.in_channels)) {
    throw InvalidInput(cfg_.name() + ": expected input [N, " + std::to_string(cfg_.in_channels) + ", L], got " +
                       nn::shape_string(x.shape()));
  }
  check_length(x.dim(2));
  const double slope = cfg_.leaky_slope;
  Tensor h = x;
  std::vector<Tensor> skips;
  for (std::size_t i = 0; i < encoder_.size(); ++i) {
    const auto& b = encoder_[i];
    h = norm_act(b.norm1, run_stage(b.conv1, h, o), slope, o);
    h = norm_act(b.norm2, run_stage(b.conv2, h, o), slope, o);
    if (i + 1 < encoder_.size()) skips.push_back(h);
  }
  if (!bottleneck_.lstm.empty()) {
    Tensor z = nn::swap_last_axes(h, o.tape);  // [N, L', C]
    for (const auto& layer : bottleneck_.lstm) {
      Tensor f = nn::lstm_forward(z, layer.fwd, {}, {}, false, o.tape).output;
      if (layer.bidirectional) {
        Tensor r = nn::lstm_forward(z, layer.bwd, {}, {}, true, o.tape).output;
        z = nn::concat_features(f, r, o.tape);
      } else {
        z = f;
      }
    }
    h = run_conv(bottleneck_.adapter, nn::swap_last_axes(z, o.tape), o);
  }
  for (const auto& d : decoder_) {
    h = norm_act(d.norm_up, run_stage(d.up, h, o), slope, o);
    h = nn::concat_channels(h, skips.back(), o.tape);
    skips.pop_back();
    h = norm_act(d.norm, run_stage(d.conv, h, o), slope, o);
  }
  return run_conv(head_, h, o);
}

void Model::visit(const std::function<void(const std::string&, Tensor&, ParamKind, ConvLayer*)>& f) {
  auto conv = [&](ConvLayer& l) {
    f(l.name + ".weight", l.p.weight, ParamKind::conv_weight, &l);
    if (l.p.bias.defined()) f(l.name + ".bias", l.p.bias, ParamKind::conv_bias, &l);
  };
  auto norm = [&](NormLayer& n) {
    f(n.name + ".gamma", n.gamma, ParamKind::norm, nullptr);
    f(n.name + ".beta", n.beta, ParamKind::norm, nullptr);
  };
  auto lstm = [&](const std::string& pre, nn::LstmParams& p) {
    f(pre + ".w_ih", p.w_ih, ParamKind::lstm, nullptr);
    f(pre + ".w_hh", p.w_hh, ParamKind::lstm, nullptr);
    f(pre + ".b_ih", p.b_ih, ParamKind::lstm, nullptr);
    f(pre + ".b_hh", p.b_hh, ParamKind::lstm, nullptr);
  };
  for (auto& b : encoder_) {
    for (auto& l : b.conv1) conv(l);
    norm(b.norm1);
    for (auto& l : b.conv2) conv(l);
    norm(b.norm2);
  }
  for (auto& layer : bottleneck_.lstm) {
    lstm(layer.name + ".fwd", layer.fwd);
    if (layer.bidirectional) lstm(layer.name + ".bwd", layer.bwd);
  }
  if (!bottleneck_.lstm.empty()) conv(bottleneck_.adapter);
  for (auto& d : decoder_) {
    for (auto& l : d.up) conv(l);
    norm(d.norm_up);
    for (auto& l : d.conv) conv(l);
    norm(d.norm);
  }
  conv(head_);
}

std::vector<NamedParam> Model::parameters() {
  std::vector<NamedParam> out;
  visit([&](const std::string& name, Tensor& t, ParamKind kind, ConvLayer* l) {
    out.push_back({name, t, kind, l});
  });
  return out;
}

std::vector<ConvLayer*> Model::conv_layers() {
  std::vector<ConvLayer*> out;
  for (auto& b : encoder_) {
    for (auto& l : b.conv1) out.push_back(&l);
    for (auto& l : b.conv2) out.push_back(&l);
  }
  if (!bottleneck_.lstm.empty()) out.push_back(&bottleneck_.adapter);
  for (auto& d : decoder_) {
    for (auto& l : d.up) out.push_back(&l);
    for (auto& l : d.conv) out.push_back(&l);
  }
  out.push_back(&head_);
  return out;
}

std::vector<const ConvLayer*> Model::conv_layers() const {
  auto v = const_cast<Model*>(this)->conv_layers();
  return {v.begin(), v.end()};
}

std::vector<const NormLayer*> Model::norm_layers() const {
  std::vector<const NormLayer*> out;
  for (const auto& b : encoder_) {
    out.push_back(&b.norm1);
    out.push_back(&b.norm2);
  }
  for (const auto& d : decoder_) {
    out.push_back(&d.norm_up);
    out.push_back(&d.norm);
  }
  return out;
}

std::vector<const LstmLayer*> Model::lstm_layers() const {
  std::vector<const LstmLayer*> out;
  for (const auto& l : bottleneck_.lstm) out.push_back(&l);
  return out;
}

void Model::apply_masks() {
  for (auto* l : conv_layers()) l->apply_mask();
}

std::vector<LayerGeometry> Model::trace(std::size_t length) const {
  check_length(length);
  std::vector<LayerGeometry> rows;
  std::size_t l = length;
  auto conv = [&](const ConvLayer& c) {
    LayerGeometry g;
    g.name = c.name;
    g.kind = c.transposed ? "conv_transpose1d" : "conv1d";
    g.c_in = c.in_channels();
    g.c_out = c.out_channels();
    g.kernel = c.p.weight.dim(2);
    g.geom = c.p.geom;
    g.l_in = l;
    g.l_out = c.transposed ? nn::conv_transpose1d_output_length(l, static_cast<int>(g.kernel), g.geom)
                           : nn::conv1d_output_length(l, static_cast<int>(g.kernel), g.geom);
    g.weight_numel = c.p.weight.numel();
    g.bias_numel = c.p.bias.defined() ? c.p.bias.numel() : 0;
    g.quantized = c.quant.has_value();
    rows.push_back(g);
    l = g.l_out;
  };
  auto norm = [&](const NormLayer& n) {
    LayerGeometry g;
    g.name = n.name;
    g.kind = "group_norm";
    g.c_in = g.c_out = n.gamma.numel();
    g.l_in = g.l_out = l;
    g.weight_numel = n.gamma.numel();
    g.bias_numel = n.beta.numel();
    rows.push_back(g);
  };
  std::vector<std::size_t> skip_len;
  for (std::size_t i = 0; i < encoder_.size(); ++i) {
    for (const auto& c : encoder_[i].conv1) conv(c);
    norm(encoder_[i].norm1);
    for (const auto& c : encoder_[i].conv2) conv(c);
    norm(encoder_[i].norm2);
    if (i + 1 < encoder_.size()) skip_len.push_back(l);
  }
  for (const auto& layer : bottleneck_.lstm) {
    LayerGeometry g;
    g.name = layer.name;
    g.kind = "lstm";
    g.c_in = layer.fwd.input_size;
    g.lstm_hidden = layer.fwd.hidden_size;
    g.lstm_directions = layer.bidirectional ? 2 : 1;
    g.c_out = g.lstm_hidden * g.lstm_directions;
    g.l_in = g.l_out = l;
    const std::size_t h = g.lstm_hidden;
    g.weight_numel = g.lstm_directions * 4 * h * (g.c_in + h);
    g.bias_numel = g.lstm_directions * 8 * h;
    rows.push_back(g);
  }
  if (!bottleneck_.lstm.empty()) conv(bottleneck_.adapter);
  for (const auto& d : decoder_) {
    for (const auto& c : d.up) conv(c);
    norm(d.norm_up);
    l = std::min(l, skip_len.back());
    skip_len.pop_back();
    for (const auto& c : d.conv) conv(c);
    norm(d.norm);
  }
  conv(head_);
  return rows;
}

Model Model::clone() const {
  Model m = *this;
  m.visit([](const std::string&, Tensor& t, ParamKind, ConvLayer*) { t = t.clone(); });
  for (auto* l : m.conv_layers())
    if (l->mask.defined()) l->mask = l->mask.clone();
  return m;
}

}  // namespace ccic::models
