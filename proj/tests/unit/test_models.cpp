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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>

#include "ccic/data/synth.hpp"
#include "ccic/error.hpp"
#include "ccic/models/checkpoint.hpp"
#include "ccic/models/config.hpp"
#include "ccic/models/evaluate.hpp"
#include "ccic/models/model.hpp"
#include "ccic/models/trainer.hpp"

using namespace ccic;
using namespace ccic::models;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("ccic_models_" + tag + "_" + std::to_string(std::random_device{}()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

nn::Tensor random_input(std::size_t n, std::size_t len, std::uint64_t seed) {
  nn::Tensor x({n, 2, len});
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> nd(0.0f, 1.0f);
  for (auto& v : x.data()) v = nd(rng);
  return x;
}

bool same_bytes(const nn::Tensor& a, const nn::Tensor& b) {
  if (a.shape() != b.shape()) return false;
  return std::memcmp(a.ptr(), b.ptr(), a.numel() * sizeof(float)) == 0;
}

bool same_parameters(Model& a, Model& b) {
  auto pa = a.parameters(), pb = b.parameters();
  if (pa.size() != pb.size()) return false;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    if (pa[i].name != pb[i].name || !same_bytes(pa[i].tensor, pb[i].tensor)) return false;
  }
  return true;
}

data::Dataset tone_dataset(std::size_t frames, std::size_t length, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<data::Superframe> out;
  for (std::size_t i = 0; i < frames; ++i) {
    auto f = data::synth_interference(data::InterferenceKind::emi_tone, length, rng);
    f.id = "tone" + std::to_string(i);
    out.push_back(std::move(f));
  }
  auto ds = data::Dataset::from_frames(std::move(out));
  ds.assign_splits(seed);
  return ds;
}

}  // namespace

TEST_CASE("m1 encoder ladder 2-64-128-256 with strides 1,2,2") {
  const auto cfg = ModelConfig::make(Preset::m1, false);
  CHECK(cfg.enc_filters == std::vector<int>{64, 128, 256});
  CHECK(cfg.enc_strides == std::vector<int>{1, 2, 2});
  CHECK(cfg.lstm_hidden == 64);
  Model m(cfg);
  REQUIRE(m.encoder().size() == 3);
  std::size_t ch = 2;
  const int strides[] = {1, 2, 2};
  const std::size_t widths[] = {64, 128, 256};
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& c1 = m.encoder()[i].conv1.front();
    CHECK(c1.in_channels() == ch);
    CHECK(c1.out_channels() == widths[i]);
    CHECK(c1.p.geom.stride == strides[i]);
    CHECK(m.encoder()[i].conv2.front().p.geom.stride == 1);
    CHECK(c1.p.weight.dim(2) == 3);
    ch = widths[i];
  }
  CHECK(m.decoder().size() == 2);
  CHECK(m.bottleneck().lstm.size() == 2);
  CHECK(m.head().out_channels() == 2);
}

TEST_CASE("m2 has nine encoder blocks, stride 1 then eight stride 2") {
  Model m(ModelConfig::make(Preset::m2, false));
  REQUIRE(m.encoder().size() == 9);
  CHECK(m.encoder()[0].conv1.front().p.geom.stride == 1);
  CHECK(m.encoder()[0].conv1.front().out_channels() == 64);
  for (std::size_t i = 1; i < 9; ++i) {
    CHECK(m.encoder()[i].conv1.front().p.geom.stride == 2);
    CHECK(m.encoder()[i].conv1.front().out_channels() == 128);
  }
  CHECK(m.decoder().size() == 8);
  CHECK(m.bottleneck().lstm.empty());
  CHECK(m.config().length_multiple() == 256);
}

TEST_CASE("depthwise variant splits every 3-tap conv into depthwise and pointwise") {
  Model m(ModelConfig::make(Preset::m1, true));
  for (const auto* l : m.conv_layers()) {
    if (l->p.weight.dim(2) == 3) {
      CHECK(l->name.size() > 3);
      CHECK(l->name.substr(l->name.size() - 3) == ".dw");
      CHECK(l->p.geom.groups == static_cast<int>(l->in_channels()));
    }
  }
  CHECK(m.encoder()[1].conv1.size() == 2);
  CHECK(m.encoder()[1].conv1[1].name == "enc2.conv1.pw");
}

TEST_CASE("layer specs follow the preset patterns") {
  for (auto p : {Preset::m1, Preset::m2, Preset::m1_mini}) {
    const auto specs = layer_specs(ModelConfig::make(p, false));
    REQUIRE_FALSE(specs.empty());
    CHECK(specs.back().kind == LayerKind::head_conv);
    for (const auto& s : specs) CHECK((s.stride == 1 || s.stride == 2));
    const auto n_enc = std::count_if(specs.begin(), specs.end(), [](auto& s) { return s.kind == LayerKind::enc_block; });
    const auto n_dec = std::count_if(specs.begin(), specs.end(), [](auto& s) { return s.kind == LayerKind::dec_block; });
    CHECK(n_dec == n_enc - 1);
  }
}

TEST_CASE("config json round trip and validation") {
  auto cfg = ModelConfig::make(Preset::m1_mini, true);
  cfg.seed = 77;
  CHECK(ModelConfig::from_json(cfg.to_json()) == cfg);
  auto j = cfg.to_json();
  j["enc_strides"] = {1, 3, 2};
  CHECK_THROWS_AS(ModelConfig::from_json(j), InvalidInput);
  CHECK_THROWS_AS(parse_preset("m3"), InvalidInput);
  CHECK(parse_preset("m1-mini") == Preset::m1_mini);
}

TEST_CASE("same seed builds identical parameters, different seeds differ") {
  Model a(ModelConfig::make(Preset::m1, false)), b(ModelConfig::make(Preset::m1, false));
  CHECK(same_parameters(a, b));
  auto cfg = ModelConfig::make(Preset::m1, false);
  cfg.seed = 1;
  Model c(cfg);
  CHECK_FALSE(same_parameters(a, c));
}

TEST_CASE("forward preserves shape for every valid length") {
  Model m1(ModelConfig::make(Preset::m1_mini, false));
  for (std::size_t len : {4ul, 8ul, 64ul, 100ul, 512ul}) {
    const auto y = m1.forward(random_input(2, len, len));
    CHECK(y.shape() == nn::Shape{2, 2, len});
  }
  Model m2(ModelConfig::make(Preset::m2, true));
  for (std::size_t len : {256ul, 512ul, 1024ul}) CHECK(m2.forward(random_input(1, len, 1)).shape() == nn::Shape{1, 2, len});
}

TEST_CASE("incompatible length names the divisibility requirement") {
  Model m(ModelConfig::make(Preset::m2, false));
  try {
    (void)m.forward(random_input(1, 500, 1));
    FAIL("expected InvalidInput");
  } catch (const InvalidInput& e) {
    CHECK(std::string(e.what()).find("multiple of 256") != std::string::npos);
  }
  Model m1(ModelConfig::make(Preset::m1, false));
  CHECK_THROWS_AS((void)m1.forward(random_input(1, 6, 1)), InvalidInput);
  CHECK_THROWS_AS((void)m1.forward(nn::Tensor({1, 3, 8})), InvalidInput);
}

TEST_CASE("zero head gives exactly zero output") {
  Model m(ModelConfig::make(Preset::m1_mini, false));
  for (auto& v : m.head().p.weight.data()) v = 0.0f;
  for (auto& v : m.head().p.bias.data()) v = 0.0f;
  const auto y = m.forward(random_input(2, 64, 3));
  for (float v : y.data()) CHECK(v == 0.0f);
}

TEST_CASE("batch of three equals three single forwards") {
  for (auto p : {Preset::m1_mini, Preset::m2}) {
    Model m(ModelConfig::make(p, false));
    const std::size_t len = p == Preset::m2 ? 256 : 64;
    const auto x = random_input(3, len, 9);
    const auto y = m.forward(x);
    for (std::size_t n = 0; n < 3; ++n) {
      nn::Tensor xi({1, 2, len});
      std::copy_n(x.ptr() + n * 2 * len, 2 * len, xi.ptr());
      const auto yi = m.forward(xi);
      for (std::size_t k = 0; k < 2 * len; ++k) CHECK(std::fabs(yi.ptr()[k] - y.ptr()[n * 2 * len + k]) <= 1e-6);
    }
  }
}

TEST_CASE("skip count equals decoder blocks") {
  for (auto p : {Preset::m1, Preset::m2, Preset::m1_mini}) {
    Model m(ModelConfig::make(p, false));
    CHECK(m.skip_count() == m.decoder().size());
  }
}

TEST_CASE("parameter registry covers every layer tensor exactly once") {
  for (bool dw : {false, true}) {
    Model m(ModelConfig::make(Preset::m1, dw));
    const auto params = m.parameters();
    std::set<std::string> names;
    std::set<const void*> storage;
    for (const auto& p : params) {
      CHECK(names.insert(p.name).second);
      CHECK(storage.insert(p.tensor.ptr()).second);
    }
    // Walk the layer structure independently.
    std::set<const void*> walked;
    for (const auto* c : m.conv_layers()) {
      walked.insert(c->p.weight.ptr());
      walked.insert(c->p.bias.ptr());
    }
    for (const auto* n : m.norm_layers()) {
      walked.insert(n->gamma.ptr());
      walked.insert(n->beta.ptr());
    }
    for (const auto* l : m.lstm_layers()) {
      for (const auto* d : {&l->fwd, &l->bwd}) {
        if (!d->w_ih.defined()) continue;
        for (const auto* t : {&d->w_ih, &d->w_hh, &d->b_ih, &d->b_hh}) walked.insert(t->ptr());
      }
    }
    CHECK(walked == storage);
    std::size_t numel = 0;
    for (const auto& p : params) numel += p.tensor.numel();
    CHECK(numel == (dw ? 515850u : 928258u));  // arch_oracle.py
  }
}

TEST_CASE("clone is deep") {
  Model a(ModelConfig::make(Preset::m1_mini, false));
  Model b = a.clone();
  CHECK(same_parameters(a, b));
  b.head().p.weight.data()[0] += 1.0f;
  CHECK_FALSE(same_parameters(a, b));
}

TEST_CASE("zero training steps leave the model unchanged") {
  auto ds = tone_dataset(4, 2048, 1);
  Model m(ModelConfig::make(Preset::m1_mini, false));
  Model ref = m.clone();
  TrainConfig tc;
  tc.steps = 0;
  const auto r = train(m, ds, tc);
  CHECK(r.loss_trace.empty());
  CHECK(same_parameters(m, ref));
}

TEST_CASE("training is deterministic under a fixed seed and changes the weights") {
  auto ds = tone_dataset(4, 2048, 2);
  TrainConfig tc;
  tc.steps = 6;
  tc.window_len = 128;
  tc.seed = 42;
  Model a(ModelConfig::make(Preset::m1_mini, false)), b(ModelConfig::make(Preset::m1_mini, false));
  Model init = a.clone();
  const auto ra = train(a, ds, tc);
  const auto rb = train(b, ds, tc);
  REQUIRE(ra.loss_trace.size() == 6);
  CHECK(ra.loss_trace == rb.loss_trace);
  CHECK(same_parameters(a, b));
  CHECK_FALSE(same_parameters(a, init));
  for (const auto& p : a.parameters()) CHECK_FALSE(p.tensor.requires_grad());
}

TEST_CASE("non-finite loss aborts with the step number") {
  auto ds = tone_dataset(4, 2048, 3);
  Model m(ModelConfig::make(Preset::m1_mini, false));
  m.head().p.weight.data()[0] = std::numeric_limits<float>::quiet_NaN();
  TrainConfig tc;
  tc.steps = 3;
  tc.window_len = 64;
  try {
    (void)train(m, ds, tc);
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("step 0") != std::string::npos);
  }
}

TEST_CASE("training an empty split is an error") {
  auto ds = tone_dataset(3, 1024, 4);  // nothing reserved, so the test split is empty
  Model m(ModelConfig::make(Preset::m1_mini, false));
  TrainConfig tc;
  tc.steps = 1;
  tc.split = data::Split::test;
  CHECK_THROWS_AS((void)train(m, ds, tc), InvalidInput);
}

TEST_CASE("evaluate reports one row per grid point and is deterministic") {
  auto ds = tone_dataset(4, 4096, 5);
  Model m(ModelConfig::make(Preset::m1_mini, false));
  EvalConfig ec;
  ec.windows = 10;
  ec.batch = 4;
  ec.window_len = 128;
  ec.seed = 3;
  const auto a = evaluate(m, ds, ec);
  const auto b = evaluate(m, ds, ec);
  REQUIRE(a.size() == 6);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].sinr_db == ec.sinr_grid[i]);
    CHECK(a[i].windows == 10);
    CHECK(a[i].mean_score == b[i].mean_score);
    CHECK(a[i].mean_mse > 0.0);
  }
  // The passthrough baseline improves with SINR.
  CHECK(a.back().baseline_mean_score > a.front().baseline_mean_score);
}

TEST_CASE("window_mse is the complex per-window mean") {
  nn::Tensor p({1, 2, 2}, std::vector<float>{1, 0, 0, 0});
  nn::Tensor t({1, 2, 2}, std::vector<float>{0, 0, 0, 2});
  CHECK(window_mse(p, t) == std::vector<double>{(1.0 + 4.0) / 2.0});
  CHECK_THROWS_AS(window_mse(p, nn::Tensor({1, 2, 3})), InvalidInput);
}

TEST_CASE("checkpoint round trip is bit identical") {
  TempDir dir("rt");
  auto cfg = ModelConfig::make(Preset::m1, true);
  cfg.seed = 5;
  Model m(cfg);
  save_checkpoint(m, dir.path);
  Model back = load_checkpoint(dir.path);
  CHECK(back.config() == m.config());
  CHECK(same_parameters(m, back));
  const auto x = random_input(1, 64, 2);
  CHECK(same_bytes(m.forward(x), back.forward(x)));

  std::ifstream in(dir.path / "manifest.json");
  const auto j = nlohmann::json::parse(in);
  CHECK(j["format_version"] == kCheckpointVersion);
  for (const auto& t : j["tensors"]) {
    CHECK(t["offset"].get<std::uint64_t>() % kBlobAlignment == 0);
    CHECK(t["dtype"] == "f32");
  }
  std::uint64_t params = 0;
  for (const auto& p : m.parameters()) params += p.tensor.numel();
  CHECK(checkpoint_payload_bytes(dir.path) == 4 * params);
}

TEST_CASE("damaged checkpoints raise descriptive load errors") {
  TempDir dir("bad");
  Model m(ModelConfig::make(Preset::m1_mini, false));
  save_checkpoint(m, dir.path);
  const auto manifest = dir.path / "manifest.json";
  std::string text;
  {
    std::ifstream in(manifest);
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  auto expect_load_error = [&](const char* needle) {
    try {
      (void)load_checkpoint(dir.path);
      FAIL("expected LoadError");
    } catch (const LoadError& e) {
      INFO(e.what());
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };

  SUBCASE("truncated blob") {
    fs::resize_file(dir.path / "weights.bin", fs::file_size(dir.path / "weights.bin") / 2);
    expect_load_error("truncated");
  }
  SUBCASE("corrupt manifest") {
    std::ofstream(manifest) << text.substr(0, text.size() / 2);
    expect_load_error("corrupt manifest");
  }
  SUBCASE("unknown version") {
    auto j = nlohmann::json::parse(text);
    j["format_version"] = 7;
    std::ofstream(manifest) << j.dump();
    expect_load_error("format_version 7");
  }
  SUBCASE("shape mismatch") {
    auto j = nlohmann::json::parse(text);
    j["tensors"][0]["shape"] = {1, 2, 3};
    std::ofstream(manifest) << j.dump();
    expect_load_error("shape");
  }
  SUBCASE("missing tensor") {
    auto j = nlohmann::json::parse(text);
    j["tensors"].erase(j["tensors"].begin() + 2);
    std::ofstream(manifest) << j.dump();
    expect_load_error("missing");
  }
  SUBCASE("missing directory") {
    fs::remove_all(dir.path);
    expect_load_error("missing");
  }
}

TEST_CASE("checkpoint keeps pruning masks") {
  TempDir dir("mask");
  Model m(ModelConfig::make(Preset::m1_mini, false));
  auto* l = m.conv_layers()[1];
  l->mask = nn::Tensor(l->p.weight.shape(), 1.0f);
  l->mask.data()[0] = 0.0f;
  l->apply_mask();
  save_checkpoint(m, dir.path);
  Model back = load_checkpoint(dir.path);
  const auto* lb = back.conv_layers()[1];
  REQUIRE(lb->mask.defined());
  CHECK(same_bytes(lb->mask, l->mask));
  CHECK(lb->p.weight.data()[0] == 0.0f);
}
