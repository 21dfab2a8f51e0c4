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
#include <complex>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <set>

#include "ccic/data/batch.hpp"
#include "ccic/data/dataset.hpp"
#include "ccic/data/sigf.hpp"
#include "ccic/data/synth.hpp"
#include "ccic/dsp/mixing.hpp"
#include "ccic/error.hpp"

using namespace ccic;
using namespace ccic::data;
namespace fs = std::filesystem;

namespace {

// Frozen from tests/oracles/data_oracle.py.
constexpr const char* kSigfHex = "534947460100000002000000000000000000c03f00000080000010c000004040";
constexpr double kChi2Df512 = 616.6114586535608;
constexpr double kChi2Df19 = 43.82019596451753;

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("ccic_data_" + tag + "_" + std::to_string(std::random_device{}()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string hex_of(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::string out;
  char c;
  static const char* digits = "0123456789abcdef";
  while (in.get(c)) {
    const auto u = static_cast<unsigned char>(c);
    out += digits[u >> 4];
    out += digits[u & 15];
  }
  return out;
}

double mean_power(const dsp::ComplexSignal& s) {
  double acc = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) acc += s.i[k] * s.i[k] + s.q[k] * s.q[k];
  return acc / static_cast<double>(s.size());
}

std::vector<Superframe> toy_frames(std::size_t n, std::size_t length, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Superframe> out;
  for (std::size_t i = 0; i < n; ++i) {
    auto f = synth_interference(static_cast<InterferenceKind>(i % 3), length, rng);
    f.id = "sf" + std::to_string(i);
    out.push_back(std::move(f));
  }
  return out;
}

double chi_square(const std::vector<std::size_t>& counts, double expected) {
  double chi = 0.0;
  for (auto c : counts) chi += (static_cast<double>(c) - expected) * (static_cast<double>(c) - expected) / expected;
  return chi;
}

}  // namespace

TEST_CASE("sigf byte layout matches the struct-packed reference") {
  TempDir dir("layout");
  write_sigf_raw(dir.path / "a.sigf", {1.5f, -0.0f, -2.25f, 3.0f});
  CHECK(hex_of(dir.path / "a.sigf") == kSigfHex);
  CHECK(sigf_sample_count(dir.path / "a.sigf") == 2);
}

TEST_CASE("sigf round trip is bit exact for arbitrary float32 payloads") {
  TempDir dir("roundtrip");
  std::mt19937 rng(11);
  std::vector<float> v(4096);
  for (auto& x : v) x = std::bit_cast<float>(static_cast<std::uint32_t>(rng()) & 0xff7fffffu);  // finite patterns
  v[0] = -0.0f;
  v[1] = 0.0f;
  v[2] = std::numeric_limits<float>::denorm_min();
  v[3] = -std::numeric_limits<float>::max();
  write_sigf_raw(dir.path / "x.sigf", v);
  const auto back = read_sigf_raw(dir.path / "x.sigf");
  REQUIRE(back.size() == v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    CHECK(std::bit_cast<std::uint32_t>(back[i]) == std::bit_cast<std::uint32_t>(v[i]));
  }
}

TEST_CASE("sigf loader rejects damaged files with the filename") {
  TempDir dir("bad");
  write_sigf_raw(dir.path / "ok.sigf", {1.0f, 2.0f, 3.0f, 4.0f});
  auto bytes = hex_of(dir.path / "ok.sigf");

  {
    std::ofstream out(dir.path / "magic.sigf", std::ios::binary);
    out << "SIGX";
    out.write(std::string(12 + 16, '\0').data(), 28);
  }
  try {
    (void)read_sigf_raw(dir.path / "magic.sigf");
    FAIL("expected LoadError");
  } catch (const LoadError& e) {
    CHECK(std::string(e.what()).find("magic.sigf") != std::string::npos);
  }

  fs::copy_file(dir.path / "ok.sigf", dir.path / "trunc.sigf");
  fs::resize_file(dir.path / "trunc.sigf", 16 + 12);
  CHECK_THROWS_AS((void)read_sigf_raw(dir.path / "trunc.sigf"), LoadError);

  fs::copy_file(dir.path / "ok.sigf", dir.path / "short_header.sigf");
  fs::resize_file(dir.path / "short_header.sigf", 10);
  CHECK_THROWS_AS((void)read_sigf_raw(dir.path / "short_header.sigf"), LoadError);

  {
    std::ofstream out(dir.path / "version.sigf", std::ios::binary);
    const std::uint32_t version = 2;
    const std::uint64_t count = 0;
    out << "SIGF";
    out.write(reinterpret_cast<const char*>(&version), 4);
    out.write(reinterpret_cast<const char*>(&count), 8);
  }
  CHECK_THROWS_AS((void)read_sigf_raw(dir.path / "version.sigf"), LoadError);
  CHECK_THROWS_AS((void)read_sigf_raw(dir.path / "missing.sigf"), IoError);
}

TEST_CASE("empty directory loads as an empty dataset") {
  TempDir dir("empty");
  const auto ds = Dataset::load(dir.path);
  CHECK(ds.empty());
  CHECK(ds.size() == 0);
}

TEST_CASE("synthetic corpus round-trips through save and load bit exactly") {
  TempDir dir("corpus");
  auto frames = toy_frames(5, 3000, 4);
  auto ds = Dataset::from_frames(frames);
  ds.reserve_test({"sf4"});
  ds.assign_splits(9);
  ds.save(dir.path);
  const auto back = Dataset::load(dir.path);
  REQUIRE(back.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(back.entries()[i].id == ds.entries()[i].id);
    CHECK(back.entries()[i].kind == ds.entries()[i].kind);
    CHECK(back.entries()[i].length == 3000);
    CHECK(back.entries()[i].split == ds.entries()[i].split);
    const auto sig = back.signal(i);
    // Stored as float32, so compare against the float32 image of the frame.
    for (std::size_t k = 0; k < sig->size(); ++k) {
      CHECK(sig->i[k] == static_cast<double>(static_cast<float>(frames[i].signal.i[k])));
      CHECK(sig->q[k] == static_cast<double>(static_cast<float>(frames[i].signal.q[k])));
    }
  }
  CHECK(back.entries()[4].reserved_test);
  CHECK(back.entries()[4].split == Split::test);
}

TEST_CASE("loader validates lengths and manifest version") {
  TempDir dir("manifest");
  auto ds = Dataset::from_frames(toy_frames(3, 1000, 5));
  ds.save(dir.path);

  SUBCASE("length mismatch") {
    const auto loaded = Dataset::load(dir.path);
    write_sigf_raw(dir.path / loaded.entries()[1].path, std::vector<float>(2 * 999, 0.5f));
    CHECK_THROWS_AS(Dataset::load(dir.path), LoadError);
  }
  SUBCASE("future manifest version") {
    std::ifstream in(dir.path / "manifest.json");
    std::string text((std::istreambuf_iterator<char>(in)), {});
    in.close();
    const auto pos = text.find("\"format_version\": 1");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 19, "\"format_version\": 9");
    std::ofstream(dir.path / "manifest.json") << text;
    CHECK_THROWS_AS(Dataset::load(dir.path), LoadError);
  }
  SUBCASE("sigf files without a manifest") {
    fs::remove(dir.path / "manifest.json");
    CHECK_THROWS_AS(Dataset::load(dir.path), LoadError);
  }
}

TEST_CASE("split follows the floor rule and partitions the frames") {
  // (n, ratio, train, val) frozen from the oracle
  const struct {
    std::size_t n;
    double ratio;
    std::size_t train, val;
  } cases[] = {{139, 0.8, 111, 28}, {10, 0.8, 8, 2}, {5, 0.8, 4, 1}, {2, 0.8, 1, 1}, {7, 0.5, 3, 4}};
  for (const auto& c : cases) {
    auto ds = Dataset::from_frames(toy_frames(c.n, 64, 1));
    ds.assign_splits(123, c.ratio);
    CHECK(ds.indices(Split::train).size() == c.train);
    CHECK(ds.indices(Split::val).size() == c.val);
    std::set<std::size_t> seen;
    for (auto s : {Split::train, Split::val, Split::test}) {
      for (auto i : ds.indices(s)) CHECK(seen.insert(i).second);
    }
    CHECK(seen.size() == c.n);
  }
}

TEST_CASE("split is deterministic and keeps reserved test frames out") {
  auto a = Dataset::from_frames(toy_frames(20, 64, 1));
  auto b = Dataset::from_frames(toy_frames(20, 64, 1));
  a.reserve_test({"sf0", "sf7"});
  b.reserve_test({"sf0", "sf7"});
  a.assign_splits(5);
  b.assign_splits(5);
  for (std::size_t i = 0; i < 20; ++i) CHECK(a.entries()[i].split == b.entries()[i].split);
  CHECK(a.indices(Split::test) == std::vector<std::size_t>{0, 7});
  CHECK(a.indices(Split::train).size() == 14);  // floor(0.8 * 18)

  auto one = Dataset::from_frames(toy_frames(1, 64, 1));
  CHECK_THROWS_AS(one.assign_splits(1), InvalidInput);
  CHECK_THROWS_AS(a.reserve_test({"nope"}), InvalidInput);
}

TEST_CASE("sample_window bounds and uniform start") {
  std::mt19937_64 rng(3);
  dsp::ComplexSignal frame(512);
  for (std::size_t k = 0; k < 512; ++k) frame.i[k] = static_cast<double>(k);
  const auto w = sample_window(frame, 512, rng);
  CHECK(w.size() == 512);
  CHECK(w.i[0] == 0.0);
  CHECK_THROWS_AS(sample_window(frame, 513, rng), InvalidInput);

  // Starts over [0, L] on a 2L frame: 10,000 draws, chi-square at p = 0.001.
  const std::size_t len = 512;
  dsp::ComplexSignal wide(2 * len);
  for (std::size_t k = 0; k < wide.size(); ++k) wide.i[k] = static_cast<double>(k);
  std::vector<std::size_t> counts(len + 1, 0);
  const std::size_t draws = 10000;
  for (std::size_t d = 0; d < draws; ++d) {
    const auto s = sample_window(wide, len, rng);
    REQUIRE(s.size() == len);
    const auto start = static_cast<std::size_t>(s.i[0]);
    CHECK(s.i[len - 1] == static_cast<double>(start + len - 1));
    ++counts[start];
  }
  CHECK(chi_square(counts, static_cast<double>(draws) / static_cast<double>(len + 1)) < kChi2Df512);
}

TEST_CASE("make_batch shapes, metadata and determinism") {
  auto ds = Dataset::from_frames(toy_frames(6, 2048, 8));
  ds.assign_splits(2);
  std::mt19937_64 rng(17);
  const auto b = make_batch(ds, Split::train, 2, 512, rng);
  CHECK(b.y.shape() == nn::Shape{2, 2, 512});
  CHECK(b.s.shape() == nn::Shape{2, 2, 512});
  REQUIRE(b.examples.size() == 2);
  for (std::size_t n = 0; n < 2; ++n) {
    const auto& ex = b.examples[n];
    CHECK(ex.sinr_db >= -30.0);
    CHECK(ex.sinr_db <= 0.0);
    CHECK(std::fabs(ex.phase_rad) <= std::numbers::pi);
    CHECK(ex.y.size() == 512);
    // y = s + g e^{j phi} b, and the tensors carry exactly y and s
    for (std::size_t k = 0; k < 512; k += 37) {
      CHECK(b.y.ptr()[(n * 2 + 0) * 512 + k] == static_cast<float>(ex.y.i[k]));
      CHECK(b.s.ptr()[(n * 2 + 1) * 512 + k] == static_cast<float>(ex.s.q[k]));
    }
    const double achieved = 10.0 * std::log10(mean_power(ex.s) / mean_power(dsp::ComplexSignal(
                                                                   [&] {
                                                                     std::vector<double> d(512);
                                                                     for (std::size_t k = 0; k < 512; ++k) d[k] = ex.y.i[k] - ex.s.i[k];
                                                                     return d;
                                                                   }(),
                                                                   [&] {
                                                                     std::vector<double> d(512);
                                                                     for (std::size_t k = 0; k < 512; ++k) d[k] = ex.y.q[k] - ex.s.q[k];
                                                                     return d;
                                                                   }())));
    CHECK(achieved == doctest::Approx(ex.sinr_db).epsilon(1e-9));
  }

  std::mt19937_64 r1(5), r2(5);
  const auto a1 = make_batch(ds, Split::train, 3, 256, r1);
  const auto a2 = make_batch(ds, Split::train, 3, 256, r2);
  CHECK(std::equal(a1.y.data().begin(), a1.y.data().end(), a2.y.data().begin()));
  const auto a3 = make_batch(ds, Split::train, 3, 256, r1);
  CHECK_FALSE(std::equal(a1.y.data().begin(), a1.y.data().end(), a3.y.data().begin()));

  auto none = Dataset::from_frames(toy_frames(3, 2048, 8));
  none.reserve_test({"sf0", "sf1", "sf2"});
  std::mt19937_64 r3(1);
  CHECK_THROWS_AS(make_batch(none, Split::train, 2, 512, r3), InvalidInput);
}

TEST_CASE("no test superframe contributes a training or validation window") {
  auto ds = Dataset::from_frames(toy_frames(12, 1024, 21));
  ds.reserve_test({"sf2", "sf5", "sf11"});
  ds.assign_splits(4);
  std::set<std::string> test_ids;
  for (auto i : ds.indices(Split::test)) test_ids.insert(ds.entries()[i].id);
  std::mt19937_64 rng(8);
  for (auto split : {Split::train, Split::val}) {
    for (int rep = 0; rep < 200; ++rep) {
      const auto b = make_batch(ds, split, 4, 64, rng);
      for (auto f : b.frames) {
        CHECK(test_ids.count(ds.entries()[f].id) == 0);
        CHECK(ds.entries()[f].split == split);
      }
    }
  }
}

TEST_CASE("augmentation marginals are uniform") {
  auto ds = Dataset::from_frames(toy_frames(4, 512, 6));
  ds.assign_splits(1);
  std::mt19937_64 rng(99);
  std::vector<std::size_t> sinr_bins(20, 0), phase_bins(20, 0);
  std::size_t total = 0;
  while (total < 10000) {
    const auto b = make_batch(ds, Split::train, 50, 32, rng);
    for (const auto& ex : b.examples) {
      sinr_bins[std::min<std::size_t>(19, static_cast<std::size_t>((ex.sinr_db + 30.0) / 30.0 * 20.0))]++;
      phase_bins[std::min<std::size_t>(
          19, static_cast<std::size_t>((ex.phase_rad + std::numbers::pi) / (2 * std::numbers::pi) * 20.0))]++;
      ++total;
    }
  }
  CHECK(chi_square(sinr_bins, total / 20.0) < kChi2Df19);
  CHECK(chi_square(phase_bins, total / 20.0) < kChi2Df19);
}

TEST_CASE("synthetic families have unit power") {
  std::mt19937_64 rng(12);
  for (auto kind : {InterferenceKind::emi_tone, InterferenceKind::ofdm_like, InterferenceKind::filtered_psk}) {
    for (std::size_t len : {1ul, 100ul, 4096ul}) {
      const auto f = synth_interference(kind, len, rng);
      CHECK(f.signal.size() == len);
      CHECK(mean_power(f.signal) == doctest::Approx(1.0).epsilon(1e-6));
      CHECK(f.kind == kind_name(kind));
    }
  }
  CHECK(parse_kind("ofdm_like") == InterferenceKind::ofdm_like);
  CHECK_THROWS_AS(parse_kind("wifi"), InvalidInput);
}

TEST_CASE("single tone without bursts is a constant-envelope exponential") {
  std::mt19937_64 rng(2);
  SynthOptions opts;
  opts.n_tones = 1;
  opts.burst_prob = 0.0;
  const auto f = synth_interference(InterferenceKind::emi_tone, 2048, rng, opts);
  for (std::size_t k = 0; k < f.signal.size(); ++k) {
    CHECK(std::hypot(f.signal.i[k], f.signal.q[k]) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("ofdm stand-in occupies its designed band") {
  // Averaged periodogram over 256-sample segments; band |f| <= 0.25.
  std::mt19937_64 rng(31);
  const auto f = synth_interference(InterferenceKind::ofdm_like, 1 << 15, rng);
  const std::size_t seg = 256;
  std::vector<double> psd(seg, 0.0);
  for (std::size_t start = 0; start + seg <= f.signal.size(); start += seg) {
    for (std::size_t bin = 0; bin < seg; ++bin) {
      std::complex<double> acc = 0.0;
      for (std::size_t n = 0; n < seg; ++n) {
        const double ang = -2.0 * std::numbers::pi * static_cast<double>(bin * n) / static_cast<double>(seg);
        acc += std::complex<double>(f.signal.i[start + n], f.signal.q[start + n]) * std::polar(1.0, ang);
      }
      psd[bin] += std::norm(acc);
    }
  }
  double in_band = 0.0, total = 0.0;
  for (std::size_t bin = 0; bin < seg; ++bin) {
    const double freq = bin < seg / 2 ? static_cast<double>(bin) / seg : static_cast<double>(bin) / seg - 1.0;
    total += psd[bin];
    if (std::fabs(freq) <= 0.25) in_band += psd[bin];
  }
  CHECK(in_band / total > 0.95);
}
