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

#include "ccic/cli/app.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <random>
#include <sstream>

#include "ccic/analysis/cost.hpp"
#include "ccic/bench/bench.hpp"
#include "ccic/bench/report.hpp"
#include "ccic/compress/prune.hpp"
#include "ccic/compress/quantize_model.hpp"
#include "ccic/data/dataset.hpp"
#include "ccic/data/synth.hpp"
#include "ccic/error.hpp"
#include "ccic/models/checkpoint.hpp"
#include "ccic/models/evaluate.hpp"
#include "ccic/models/trainer.hpp"
#include "ccic/nn/parallel.hpp"

namespace ccic::cli {

namespace fs = std::filesystem;
using nlohmann::json;

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"synth", "convert", "train", "eval",
                                              "count", "quantize", "prune", "bench"};
  return names;
}

namespace {

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string config;
  std::string out;
};

// Expands `--config file.json` into flags. Top-level scalar keys apply to
// every subcommand, an object keyed by the subcommand name applies to that
// subcommand only; flags already on the command line win.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::exception& e) {
    throw LoadError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  if (!cfg.is_object()) throw LoadError("config file '" + path + "' must hold a JSON object");
  std::string sub;
  for (const auto& a : args) {
    if (std::find(subcommands().begin(), subcommands().end(), a) != subcommands().end()) {
      sub = a;
      break;
    }
  }
  json merged = json::object();
  for (const auto& [k, v] : cfg.items()) {
    if (!v.is_object()) merged[k] = v;
  }
  if (!sub.empty() && cfg.contains(sub) && cfg[sub].is_object()) {
    for (const auto& [k, v] : cfg[sub].items()) merged[k] = v;
  }
  auto given = [&](const std::string& flag) {
    for (const auto& a : args) {
      if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    }
    return false;
  };
  auto scalar = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
  for (const auto& [k, v] : merged.items()) {
    const std::string flag = "--" + k;
    if (k == "config" || given(flag)) continue;
    if (v.is_boolean()) {
      if (v.get<bool>()) args.push_back(flag);
    } else if (v.is_array()) {
      args.push_back(flag);
      for (const auto& e : v) args.push_back(scalar(e));
    } else {
      args.push_back(flag);
      args.push_back(scalar(v));
    }
  }
  return args;
}

std::uint64_t resolve_seed(const Globals& g, std::ostream& err) {
  if (g.seed) return *g.seed;
  const std::uint64_t s = (static_cast<std::uint64_t>(std::random_device{}()) << 32) ^ std::random_device{}();
  err << "seed: " << s << " (pass --seed " << s << " to reproduce)\n";
  return s;
}

void emit(const std::string& payload, const Globals& g, std::ostream& out) {
  if (g.out.empty()) {
    out << payload;
    if (payload.empty() || payload.back() != '\n') out << '\n';
    return;
  }
  std::ofstream f(g.out, std::ios::trunc);
  if (!f) throw IoError("cannot write '" + g.out + "'");
  f << payload;
  if (payload.empty() || payload.back() != '\n') f << '\n';
  if (!f) throw IoError("write failed for '" + g.out + "'");
}

std::string require_out(const Globals& g, const char* what) {
  if (g.out.empty()) throw InvalidInput(std::string("--out is required (") + what + ")");
  return g.out;
}

models::Model model_from(const std::string& checkpoint, const std::string& preset, bool dw, std::uint64_t seed) {
  if (!checkpoint.empty()) return models::load_checkpoint(checkpoint);
  auto cfg = models::ModelConfig::make(models::parse_preset(preset), dw);
  cfg.seed = seed;
  return models::Model(cfg);
}

data::Dataset open_dataset(const std::string& dir, std::uint64_t seed) {
  auto ds = data::Dataset::load(dir);
  if (ds.empty()) throw InvalidInput("dataset '" + dir + "' holds no superframes");
  const bool assigned = std::all_of(ds.entries().begin(), ds.entries().end(),
                                    [](const auto& e) { return e.split != data::Split::unassigned; });
  if (!assigned) ds.assign_splits(seed);
  return ds;
}

// ---- synth ---------------------------------------------------------------

struct SynthArgs {
  std::vector<std::string> kinds{"emi_tone", "ofdm_like", "filtered_psk"};
  std::size_t count = 4;
  std::size_t length = 65536;
  std::size_t test_count = 0;
  double train_ratio = 0.8;
};

void cmd_synth(const SynthArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
  const std::string dir = require_out(g, "synth writes a corpus directory");
  const std::uint64_t seed = resolve_seed(g, err);
  std::mt19937_64 rng(seed);
  std::vector<data::Superframe> frames;
  std::vector<std::string> test_ids;
  for (const auto& name : a.kinds) {
    const auto kind = data::parse_kind(name);
    for (std::size_t i = 0; i < a.count; ++i) {
      auto f = data::synth_interference(kind, a.length, rng);
      char id[64];
      std::snprintf(id, sizeof id, "%s-%04zu", name.c_str(), i);
      f.id = id;
      if (i + a.test_count >= a.count) test_ids.push_back(f.id);
      frames.push_back(std::move(f));
    }
  }
  auto ds = data::Dataset::from_frames(std::move(frames));
  ds.reserve_test(test_ids);
  ds.assign_splits(seed, a.train_ratio);
  ds.save(dir);
  json summary = {{"out", dir}, {"seed", seed}, {"superframes", ds.size()},
                  {"train", ds.indices(data::Split::train).size()},
                  {"val", ds.indices(data::Split::val).size()},
                  {"test", ds.indices(data::Split::test).size()}};
  out << summary.dump() << '\n';
}

// ---- convert -------------------------------------------------------------

struct ConvertArgs {
  std::string input;
  std::string format = "f32";
  std::string id;
  std::string kind = "external";
  bool test = false;
};

void cmd_convert(const ConvertArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
  const std::string dir = require_out(g, "convert appends to a corpus directory");
  std::ifstream in(a.input, std::ios::binary);
  if (!in) throw IoError("cannot open '" + a.input + "'");
  const std::vector<char> raw((std::istreambuf_iterator<char>(in)), {});
  const std::size_t width = a.format == "f32" ? 4 : 8;
  if (raw.size() % (2 * width) != 0) {
    throw LoadError("'" + a.input + "' holds " + std::to_string(raw.size()) + " bytes, not a whole number of " +
                    a.format + " I/Q pairs");
  }
  const std::size_t n = raw.size() / (2 * width);
  data::Superframe f;
  f.id = a.id.empty() ? fs::path(a.input).stem().string() : a.id;
  f.kind = a.kind;
  f.signal = dsp::ComplexSignal(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (width == 4) {
      float iq[2];
      std::memcpy(iq, raw.data() + 8 * k, 8);
      f.signal.i[k] = iq[0];
      f.signal.q[k] = iq[1];
    } else {
      double iq[2];
      std::memcpy(iq, raw.data() + 16 * k, 16);
      f.signal.i[k] = iq[0];
      f.signal.q[k] = iq[1];
    }
  }
  std::vector<data::Superframe> frames;
  std::vector<std::string> test_ids;
  if (fs::exists(fs::path(dir) / "manifest.json")) {
    const auto old = data::Dataset::load(dir);
    for (std::size_t i = 0; i < old.size(); ++i) {
      const auto& e = old.entries()[i];
      if (e.id == f.id) throw InvalidInput("corpus '" + dir + "' already holds superframe '" + f.id + "'");
      if (e.reserved_test) test_ids.push_back(e.id);
      frames.push_back({e.id, e.kind, *old.signal(i)});
    }
  }
  if (a.test) test_ids.push_back(f.id);
  frames.push_back(std::move(f));
  auto ds = data::Dataset::from_frames(std::move(frames));
  ds.reserve_test(test_ids);
  ds.save(dir);
  err << "converted " << n << " samples into '" << dir << "'\n";
  out << json({{"out", dir}, {"samples", n}, {"superframes", ds.size()}}).dump() << '\n';
}

// ---- train ---------------------------------------------------------------

struct TrainArgs {
  std::string data;
  std::string preset = "m1";
  bool dw = false;
  std::string init;
  std::int64_t steps = 1000;
  std::size_t batch = 2;
  double lr = 0.002;
  std::size_t length = 512;
  double tau = 1.0;
  std::optional<double> sinr;
  std::int64_t log_every = 100;
};

void cmd_train(const TrainArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
  const std::string dir = require_out(g, "train writes a checkpoint directory");
  const std::uint64_t seed = resolve_seed(g, err);
  auto ds = open_dataset(a.data, seed);
  auto model = model_from(a.init, a.preset, a.dw, seed);
  models::TrainConfig tc;
  tc.steps = a.steps;
  tc.batch = a.batch;
  tc.lr0 = a.lr;
  tc.window_len = a.length;
  tc.tau = a.tau;
  tc.seed = seed;
  tc.fixed_sinr_db = a.sinr;
  models::TrainHooks hooks;
  hooks.on_step = [&](std::int64_t step, double loss) {
    if (a.log_every > 0 && (step % a.log_every == 0 || step + 1 == a.steps)) {
      err << "step " << step << " loss " << loss << '\n';
    }
  };
  const auto res = models::train(model, ds, tc, hooks);
  models::save_checkpoint(model, dir);
  json log = {{"seed", seed}, {"steps", a.steps}, {"model", model.config().name()}, {"loss", res.loss_trace}};
  std::ofstream(fs::path(dir) / "train_log.json") << log.dump() << '\n';
  json summary = {{"out", dir}, {"seed", seed}, {"model", model.config().name()}, {"steps", a.steps}};
  if (!res.loss_trace.empty()) {
    summary["first_loss"] = res.loss_trace.front();
    summary["final_loss"] = res.loss_trace.back();
  }
  out << summary.dump() << '\n';
}

// ---- eval ----------------------------------------------------------------

struct EvalArgs {
  std::string data;
  std::string checkpoint;
  std::string split = "val";
  std::size_t windows = 1000;
  std::size_t batch = 16;
  std::size_t length = 512;
  std::vector<double> sinr{-30, -24, -18, -12, -6, 0};
  bool int8 = false;
};

void cmd_eval(const EvalArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
  const std::uint64_t seed = resolve_seed(g, err);
  auto ds = open_dataset(a.data, seed);
  const auto model = models::load_checkpoint(a.checkpoint);
  models::EvalConfig ec;
  ec.sinr_grid = a.sinr;
  ec.windows = a.windows;
  ec.batch = a.batch;
  ec.window_len = a.length;
  ec.seed = seed;
  ec.split = data::parse_split(a.split);
  if (a.int8 && !compress::is_quantized(model)) throw InvalidInput("--int8 needs a quantized checkpoint");
  const auto opts = a.int8 ? compress::int8_forward_options() : models::ForwardOptions{};
  const auto rows = models::evaluate(model, ds, ec, opts);
  json jr = json::array();
  double mean = 0.0;
  for (const auto& r : rows) {
    jr.push_back({{"sinr_db", r.sinr_db}, {"windows", r.windows}, {"mean_mse", r.mean_mse},
                  {"mean_score", r.mean_score}, {"baseline_mean_score", r.baseline_mean_score}});
    mean += r.mean_score / static_cast<double>(rows.size());
    char line[128];
    std::snprintf(line, sizeof line, "sinr %6.1f dB  score %7.3f  passthrough %7.3f\n", r.sinr_db, r.mean_score,
                  r.baseline_mean_score);
    err << line;
  }
  emit(json({{"checkpoint", a.checkpoint}, {"model", model.config().name()}, {"split", a.split}, {"seed", seed},
             {"int8", a.int8}, {"mean_score", mean}, {"rows", jr}})
           .dump(2),
       g, out);
}

// ---- count ---------------------------------------------------------------

struct CountArgs {
  std::string preset = "m1";
  bool dw = false;
  std::string checkpoint;
  std::size_t length = 512;
  bool include_recurrent = false;
  bool quantized = false;
  std::string format = "json";
};

void cmd_count(const CountArgs& a, const Globals& g, std::ostream& out) {
  auto model = model_from(a.checkpoint, a.preset, a.dw, g.seed.value_or(0));
  if (a.quantized) compress::quantize_in_place(model);
  const auto rep = analysis::count_macs(model, a.length, {a.include_recurrent});
  if (a.format == "text") {
    emit(rep.to_text(), g, out);
  } else {
    auto j = rep.to_json();
    j["size_bytes"] = analysis::model_size_bytes(model);
    emit(j.dump(2), g, out);
  }
}

// ---- quantize ------------------------------------------------------------

struct QuantizeArgs {
  std::string checkpoint;
  std::string data;
  std::int64_t qat_steps = 0;
  std::size_t batch = 2;
  double lr = 0.0002;
};

void cmd_quantize(const QuantizeArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
  const std::string dir = require_out(g, "quantize writes a checkpoint directory");
  const auto model = models::load_checkpoint(a.checkpoint);
  models::Model q = model.clone();
  if (a.qat_steps > 0) {
    if (a.data.empty()) throw InvalidInput("--qat-steps needs --data");
    const std::uint64_t seed = resolve_seed(g, err);
    auto ds = open_dataset(a.data, seed);
    models::TrainConfig tc;
    tc.steps = a.qat_steps;
    tc.batch = a.batch;
    tc.lr0 = a.lr;
    tc.seed = seed;
    q = compress::qat_finetune(model, ds, tc);
  } else {
    compress::quantize_in_place(q);
  }
  models::save_checkpoint(q, dir);
  out << json({{"out", dir},
               {"qat_steps", a.qat_steps},
               {"float_bytes", analysis::model_size_bytes(model)},
               {"quantized_bytes", analysis::model_size_bytes(q)},
               {"payload_bytes", models::checkpoint_payload_bytes(dir)}})
             .dump()
      << '\n';
}

// ---- prune ---------------------------------------------------------------

struct PruneArgs {
  std::string checkpoint;
  double ratio = 0.0;
  std::string mode = "unstructured";
};

void cmd_prune(const PruneArgs& a, const Globals& g, std::ostream& out) {
  const std::string dir = require_out(g, "prune writes a checkpoint directory");
  auto model = models::load_checkpoint(a.checkpoint);
  compress::prune_in_place(model, a.ratio, compress::parse_prune_mode(a.mode));
  models::save_checkpoint(model, dir);
  const auto sp = compress::sparsity(model);
  json rows = json::array();
  for (const auto& r : sp.rows) {
    rows.push_back({{"name", r.name}, {"numel", r.numel}, {"zeros", r.zeros}, {"fraction", r.fraction()}});
  }
  out << json({{"out", dir}, {"ratio", a.ratio}, {"mode", a.mode}, {"global_sparsity", sp.global_fraction()},
               {"tensors", rows}})
             .dump(2)
      << '\n';
}

// ---- bench ---------------------------------------------------------------

struct BenchArgs {
  std::string preset = "m2";
  bool dw = false;
  std::string checkpoint;
  std::vector<std::size_t> batches{1, 2, 4, 8, 16};
  std::size_t length = 512;
  std::size_t sps = 16;
  int warmup = 3;
  int iters = 20;
  int threads = 0;
  std::uint64_t memory_limit = 0;
  std::string format = "json";
  bool int8 = false;
};

void cmd_bench(const BenchArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
  const std::uint64_t seed = resolve_seed(g, err);
  auto model = model_from(a.checkpoint, a.preset, a.dw, seed);
  bench::BenchConfig cfg;
  cfg.batches = a.batches;
  cfg.window_len = a.length;
  cfg.sps = a.sps;
  cfg.warmup_iters = a.warmup;
  cfg.measured_iters = a.iters;
  cfg.threads = a.threads;
  cfg.seed = seed;
  if (a.memory_limit) cfg.memory_limit_bytes = a.memory_limit;
  if (a.int8) {
    compress::quantize_in_place(model);
    cfg.forward = compress::int8_forward_options();
    cfg.model_id = model.config().name() + "-int8";
  }
  const auto rep = bench::batch_sweep(model, cfg);
  for (const auto& r : rep.rows) {
    err << "batch " << r.batch << ": " << (r.status == "ok" ? std::to_string(r.mean_symbols_per_sec) + " symbols/s"
                                                              : std::string("out of memory"))
        << '\n';
  }
  const auto fmt = bench::parse_report_format(a.format);
  if (g.out.empty()) {
    out << (fmt == bench::ReportFormat::json ? bench::report_to_json(rep).dump(2) + "\n" : bench::report_to_csv(rep));
  } else {
    bench::emit_report(rep, g.out, fmt);
  }
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Co-channel interference cancellation toolkit", "ccic"};
  app.fallthrough();
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Seed for every random stream (printed when omitted)");
  app.add_option("--config", g.config, "JSON file of flag values; command-line flags win");
  app.add_option("--out", g.out, "Output path (corpus, checkpoint or report, per subcommand)");

  SynthArgs sa;
  auto* synth = app.add_subcommand("synth", "Write a synthetic interference corpus (SIGF + manifest.json)");
  synth->add_option("--kind", sa.kinds, "Interference families to generate")
      ->check(CLI::IsMember({"emi_tone", "ofdm_like", "filtered_psk"}));
  synth->add_option("--count", sa.count, "Superframes per family")->check(CLI::PositiveNumber);
  synth->add_option("--length", sa.length, "Samples per superframe")->check(CLI::PositiveNumber);
  synth->add_option("--test-count", sa.test_count, "Superframes per family reserved for testing");
  synth->add_option("--train-ratio", sa.train_ratio, "Train share of the non-test superframes")
      ->check(CLI::Range(0.0, 1.0));

  ConvertArgs ca;
  auto* convert = app.add_subcommand("convert", "Append a raw interleaved I/Q recording to a corpus");
  convert->add_option("--input", ca.input, "Raw little-endian interleaved I/Q file")->required();
  convert->add_option("--format", ca.format, "Sample type of --input")->check(CLI::IsMember({"f32", "f64"}));
  convert->add_option("--id", ca.id, "Superframe id (default: input file stem)");
  convert->add_option("--kind", ca.kind, "Interference family tag");
  convert->add_flag("--test", ca.test, "Reserve the superframe for testing");

  TrainArgs ta;
  auto* train = app.add_subcommand("train", "Train a model and write a checkpoint");
  train->add_option("--data", ta.data, "Corpus directory")->required();
  train->add_option("--preset", ta.preset, "Architecture")->check(CLI::IsMember({"m1", "m2", "m1-mini"}));
  train->add_flag("--dw", ta.dw, "Depthwise-separable blocks");
  train->add_option("--init", ta.init, "Start from this checkpoint instead of a fresh model");
  train->add_option("--steps", ta.steps, "Optimizer steps")->check(CLI::NonNegativeNumber);
  train->add_option("--batch", ta.batch, "Windows per step")->check(CLI::PositiveNumber);
  train->add_option("--lr", ta.lr, "Initial learning rate (cosine decay to 0)")->check(CLI::PositiveNumber);
  train->add_option("--length", ta.length, "Window length in samples")->check(CLI::PositiveNumber);
  train->add_option("--tau", ta.tau, "Smoothing width of the score cap")->check(CLI::PositiveNumber);
  train->add_option("--sinr", ta.sinr, "Fixed SINR in dB instead of U[-30, 0]");
  train->add_option("--log-every", ta.log_every, "Loss log interval (0 disables)");

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "Mean MSE score of a checkpoint over a SINR grid");
  eval->add_option("--data", ea.data, "Corpus directory")->required();
  eval->add_option("--checkpoint", ea.checkpoint, "Checkpoint directory")->required();
  eval->add_option("--split", ea.split, "Split to draw windows from")->check(CLI::IsMember({"train", "val", "test"}));
  eval->add_option("--windows", ea.windows, "Windows per SINR point")->check(CLI::PositiveNumber);
  eval->add_option("--batch", ea.batch, "Windows per forward")->check(CLI::PositiveNumber);
  eval->add_option("--length", ea.length, "Window length in samples")->check(CLI::PositiveNumber);
  eval->add_option("--sinr", ea.sinr, "SINR grid in dB");
  eval->add_flag("--int8", ea.int8, "Run quantized convs on the integer kernel");

  CountArgs co;
  auto* count = app.add_subcommand("count", "MAC, parameter and size report");
  count->add_option("--preset", co.preset, "Architecture")->check(CLI::IsMember({"m1", "m2", "m1-mini"}));
  count->add_flag("--dw", co.dw, "Depthwise-separable blocks");
  count->add_option("--checkpoint", co.checkpoint, "Count this checkpoint instead of a preset");
  count->add_option("--length", co.length, "Input length in samples")->check(CLI::PositiveNumber);
  count->add_flag("--include-recurrent", co.include_recurrent, "Add LSTM MACs to the totals");
  count->add_flag("--quantized", co.quantized, "Account conv weights as int8");
  count->add_option("--format", co.format, "Output format")->check(CLI::IsMember({"json", "text"}));

  QuantizeArgs qa;
  auto* quantize = app.add_subcommand("quantize", "Quantize conv weights to int8 (optionally after QAT)");
  quantize->add_option("--checkpoint", qa.checkpoint, "Float checkpoint directory")->required();
  quantize->add_option("--data", qa.data, "Corpus directory for fine-tuning");
  quantize->add_option("--qat-steps", qa.qat_steps, "Fake-quantized fine-tuning steps (0: post-training)")
      ->check(CLI::NonNegativeNumber);
  quantize->add_option("--batch", qa.batch, "Windows per fine-tuning step")->check(CLI::PositiveNumber);
  quantize->add_option("--lr", qa.lr, "Fine-tuning learning rate")->check(CLI::PositiveNumber);

  PruneArgs pa;
  auto* prune = app.add_subcommand("prune", "Magnitude-prune conv weights");
  prune->add_option("--checkpoint", pa.checkpoint, "Checkpoint directory")->required();
  prune->add_option("--ratio", pa.ratio, "Fraction of each conv weight tensor to zero")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
  prune->add_option("--mode", pa.mode, "Granularity")->check(CLI::IsMember({"unstructured", "structured"}));

  BenchArgs ba;
  auto* benchc = app.add_subcommand("bench", "Inference throughput sweep in symbols per second");
  benchc->add_option("--preset", ba.preset, "Architecture")->check(CLI::IsMember({"m1", "m2", "m1-mini"}));
  benchc->add_flag("--dw", ba.dw, "Depthwise-separable blocks");
  benchc->add_option("--checkpoint", ba.checkpoint, "Benchmark this checkpoint instead of a preset");
  benchc->add_option("--batches", ba.batches, "Ascending batch sizes")->check(CLI::PositiveNumber);
  benchc->add_option("--length", ba.length, "Window length L")->check(CLI::PositiveNumber);
  benchc->add_option("--sps", ba.sps, "Samples per symbol F")->check(CLI::PositiveNumber);
  benchc->add_option("--warmup", ba.warmup, "Untimed forwards per batch")->check(CLI::Range(1, 1000000));
  benchc->add_option("--iters", ba.iters, "Timed forwards per batch")->check(CLI::Range(5, 1000000));
  benchc->add_option("--threads", ba.threads, "Kernel threads (0: all cores)")->check(CLI::NonNegativeNumber);
  benchc->add_option("--memory-limit", ba.memory_limit, "Simulated memory budget in bytes (0: none)");
  benchc->add_option("--format", ba.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  benchc->add_flag("--int8", ba.int8, "Quantize and run convs on the integer kernel");

  std::vector<std::string> args;
  try {
    args = expand_config(raw_args);
  } catch (const Error& e) {
    err << "ccic: " << e.what() << '\n';
    return kExitUsage;
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "ccic: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*synth) cmd_synth(sa, g, out, err);
    else if (*convert) cmd_convert(ca, g, out, err);
    else if (*train) cmd_train(ta, g, out, err);
    else if (*eval) cmd_eval(ea, g, out, err);
    else if (*count) cmd_count(co, g, out);
    else if (*quantize) cmd_quantize(qa, g, out, err);
    else if (*prune) cmd_prune(pa, g, out);
    else if (*benchc) cmd_bench(ba, g, out, err);
  } catch (const std::exception& e) {
    err << "ccic: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace ccic::cli
