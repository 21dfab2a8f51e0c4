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

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>
#include <random>
#include <sstream>

#include "ccic/cli/app.hpp"

using ccic::cli::run;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("ccic_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string one_line(const std::string& s) {
  const auto nl = s.find('\n');
  return nl == std::string::npos ? s : s.substr(0, nl);
}

}  // namespace

TEST_CASE("top-level help lists every subcommand") {
  const auto r = invoke({"--help"});
  CHECK(r.code == 0);
  for (const auto& s : ccic::cli::subcommands()) CHECK(r.out.find(s) != std::string::npos);
  CHECK(r.out.find("--seed") != std::string::npos);
  CHECK(r.out.find("--config") != std::string::npos);
}

TEST_CASE("each subcommand help names its flags") {
  const std::map<std::string, std::vector<std::string>> flags{
      {"synth", {"--kind", "--count", "--length", "--test-count"}},
      {"convert", {"--input", "--format", "--id", "--test"}},
      {"train", {"--data", "--preset", "--dw", "--steps", "--lr", "--sinr"}},
      {"eval", {"--data", "--checkpoint", "--split", "--windows", "--int8"}},
      {"count", {"--preset", "--dw", "--include-recurrent", "--quantized", "--format"}},
      {"quantize", {"--checkpoint", "--qat-steps"}},
      {"prune", {"--checkpoint", "--ratio", "--mode"}},
      {"bench", {"--preset", "--batches", "--length", "--sps", "--warmup", "--iters", "--memory-limit"}},
  };
  REQUIRE(flags.size() == ccic::cli::subcommands().size());
  for (const auto& [sub, names] : flags) {
    const auto r = invoke({sub, "--help"});
    INFO(sub);
    CHECK(r.code == 0);
    for (const auto& f : names) CHECK(r.out.find(f) != std::string::npos);
  }
}

TEST_CASE("usage errors exit 2 with a diagnostic") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {},
           {"frobnicate"},
           {"count", "--preset", "m9"},
           {"prune", "--checkpoint", "x", "--ratio", "1.5"},
           {"count", "--bogus"},
           {"--config", "/nonexistent/ccic.json", "count"},
       }) {
    const auto r = invoke(args);
    CHECK(r.code == 2);
    CHECK(r.err.rfind("ccic: ", 0) == 0);
  }
}

TEST_CASE("runtime errors exit 1 with a one-line diagnostic") {
  TempDir t;
  const auto r = invoke({"--seed", "1", "eval", "--data", t / "missing", "--checkpoint", t / "nope"});
  CHECK(r.code == 1);
  CHECK(r.err.rfind("ccic: ", 0) == 0);
  CHECK(r.err.find('\n') == r.err.size() - 1);
  const auto s = invoke({"--seed", "1", "synth", "--count", "1"});
  CHECK(s.code == 1);
  CHECK(s.err.find("--out") != std::string::npos);
}

TEST_CASE("count prints the cost report as json") {
  const auto r = invoke({"--seed", "0", "count", "--preset", "m1"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["macs"] == 123994112);
  CHECK(j["params"] == 928258);
  CHECK(j["recurrent_macs"] == 33554432);
  const auto q = json::parse(invoke({"count", "--preset", "m1", "--quantized", "--seed", "0"}).out);
  CHECK(q["bytes"] == 1740818);
  const auto t = invoke({"--seed", "0", "count", "--preset", "m2", "--dw", "--format", "text"});
  CHECK(t.code == 0);
  CHECK(t.out.find("51427072") != std::string::npos);
}

TEST_CASE("omitted seed is chosen and reported") {
  TempDir t;
  const auto r = invoke({"--out", t / "c", "synth", "--kind", "emi_tone", "--count", "2", "--length", "1024"});
  CHECK(r.code == 0);
  CHECK(r.err.find("seed: ") != std::string::npos);
  CHECK(r.err.find("--seed") != std::string::npos);
}

TEST_CASE("config file supplies flags, command line wins") {
  TempDir t;
  std::ofstream(t / "cfg.json") << R"({"seed": 3, "count": {"preset": "m2", "dw": true}})";
  auto j = json::parse(invoke({"--config", t / "cfg.json", "count"}).out);
  CHECK(j["macs"] == 51427072);
  j = json::parse(invoke({"--config", t / "cfg.json", "count", "--preset", "m1"}).out);
  CHECK(j["macs"] == 51448832);
  std::ofstream(t / "bad.json") << "{not json";
  const auto bad = invoke({"--config", t / "bad.json", "count"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("not valid JSON") != std::string::npos);
}

TEST_CASE("synth, train, eval, quantize, prune and bench workflow") {
  TempDir t;
  const auto corpus = t / "corpus";
  auto r = invoke({"--seed", "5", "--out", corpus, "synth", "--kind", "emi_tone", "--count", "5", "--length", "4096",
                 "--test-count", "1"});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["superframes"] == 5);
  CHECK(j["test"] == 1);
  CHECK(fs::exists(t.path / "corpus" / "manifest.json"));

  // Append an external recording.
  {
    std::ofstream raw(t / "rec.bin", std::ios::binary);
    for (int i = 0; i < 2048; ++i) {
      const float iq[2] = {static_cast<float>(i % 7) - 3.0f, 1.0f};
      raw.write(reinterpret_cast<const char*>(iq), sizeof iq);
    }
  }
  r = invoke({"--seed", "5", "--out", corpus, "convert", "--input", t / "rec.bin", "--id", "rec"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["superframes"] == 6);

  const auto ckpt = t / "ckpt";
  r = invoke({"--seed", "7", "--out", ckpt, "train", "--data", corpus, "--preset", "m1-mini", "--steps", "3",
            "--length", "128", "--log-every", "1"});
  REQUIRE(r.code == 0);
  j = json::parse(r.out);
  CHECK(j["steps"] == 3);
  CHECK(j["model"] == "m1-mini");
  CHECK(fs::exists(t.path / "ckpt" / "weights.bin"));
  CHECK(fs::exists(t.path / "ckpt" / "train_log.json"));
  CHECK(r.err.find("step 2 loss") != std::string::npos);

  const std::vector<std::string> eval_args{"--seed", "11", "eval", "--data", corpus, "--checkpoint", ckpt,
                                           "--split", "train", "--windows", "4", "--length", "128"};
  const auto e1 = invoke(eval_args), e2 = invoke(eval_args);
  REQUIRE(e1.code == 0);
  CHECK(e1.out == e2.out);
  j = json::parse(e1.out);
  CHECK(j["rows"].size() == 6);
  CHECK(j["rows"][0]["sinr_db"] == -30.0);

  const auto qdir = t / "q";
  r = invoke({"--seed", "1", "--out", qdir, "quantize", "--checkpoint", ckpt});
  REQUIRE(r.code == 0);
  r = invoke({"--seed", "11", "eval", "--data", corpus, "--checkpoint", qdir, "--split", "train", "--windows", "4",
            "--length", "128", "--int8"});
  CHECK(r.code == 0);
  r = invoke({"--seed", "11", "eval", "--data", corpus, "--checkpoint", ckpt, "--windows", "4", "--length", "128",
            "--int8"});
  CHECK(r.code == 1);
  CHECK(one_line(r.err).find("quantized") != std::string::npos);

  const auto pdir = t / "p";
  r = invoke({"--seed", "1", "--out", pdir, "prune", "--checkpoint", ckpt, "--ratio", "0.25"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["global_sparsity"].get<double>() == doctest::Approx(0.25).epsilon(0.01));

  r = invoke({"--seed", "1", "bench", "--checkpoint", ckpt, "--batches", "1", "2", "--length", "64", "--warmup", "1",
            "--iters", "5", "--format", "csv"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("model,batch,status", 0) == 0);
  r = invoke({"--seed", "1", "--out", t / "bench.json", "bench", "--preset", "m1-mini", "--batches", "1", "4",
            "--length", "64", "--warmup", "1", "--iters", "5", "--memory-limit", "1"});
  REQUIRE(r.code == 0);
  std::ifstream in(t / "bench.json");
  j = json::parse(in);
  REQUIRE(j["rows"].size() == 1);
  CHECK(j["rows"][0]["status"] == "oom");
}
