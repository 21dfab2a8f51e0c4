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

#include "ccic/bench/report.hpp"

#include <cstdio>
#include <fstream>

#include "ccic/error.hpp"

namespace ccic::bench {

using nlohmann::json;

ReportFormat parse_report_format(const std::string& s) {
  if (s == "json") return ReportFormat::json;
  if (s == "csv") return ReportFormat::csv;
  throw InvalidInput("unknown report format '" + s + "' (expected json or csv)");
}

json report_to_json(const BenchReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"model", row.model},
                    {"batch", row.batch},
                    {"status", row.status},
                    {"runs", row.runs},
                    {"symbols_per_window", row.symbols_per_window},
                    {"mean_latency_s", row.mean_latency_s},
                    {"std_latency_s", row.std_latency_s},
                    {"median_latency_s", row.median_latency_s},
                    {"mean_symbols_per_sec", row.mean_symbols_per_sec},
                    {"std_symbols_per_sec", row.std_symbols_per_sec},
                    {"latencies_s", row.latencies_s}});
  }
  const auto& e = r.environment;
  return {{"schema_version", r.schema_version},
          {"environment",
           {{"cpu_model", e.cpu_model},
            {"threads", e.threads},
            {"build_flags", e.build_flags},
            {"timestamp", e.timestamp},
            {"clock", e.clock},
            {"warmup_iters", e.warmup_iters},
            {"measured_iters", e.measured_iters}}},
          {"rows", rows}};
}

BenchReport report_from_json(const json& j) {
  if (!j.is_object() || !j.contains("schema_version") || !j["schema_version"].is_number_integer()) {
    throw LoadError("bench report: missing schema_version");
  }
  const int v = j["schema_version"].get<int>();
  if (v != kReportSchemaVersion) {
    throw LoadError("bench report: schema_version " + std::to_string(v) + " is not supported (this build reads " +
                    std::to_string(kReportSchemaVersion) + ")");
  }
  try {
    BenchReport r;
    const auto& e = j.at("environment");
    r.environment.cpu_model = e.at("cpu_model").get<std::string>();
    r.environment.threads = e.at("threads").get<int>();
    r.environment.build_flags = e.at("build_flags").get<std::string>();
    r.environment.timestamp = e.at("timestamp").get<std::string>();
    r.environment.clock = e.at("clock").get<std::string>();
    r.environment.warmup_iters = e.at("warmup_iters").get<int>();
    r.environment.measured_iters = e.at("measured_iters").get<int>();
    for (const auto& jr : j.at("rows")) {
      BenchRow row;
      row.model = jr.at("model").get<std::string>();
      row.batch = jr.at("batch").get<std::size_t>();
      row.status = jr.at("status").get<std::string>();
      row.runs = jr.at("runs").get<int>();
      row.symbols_per_window = jr.at("symbols_per_window").get<double>();
      row.mean_latency_s = jr.at("mean_latency_s").get<double>();
      row.std_latency_s = jr.at("std_latency_s").get<double>();
      row.median_latency_s = jr.at("median_latency_s").get<double>();
      row.mean_symbols_per_sec = jr.at("mean_symbols_per_sec").get<double>();
      row.std_symbols_per_sec = jr.at("std_symbols_per_sec").get<double>();
      row.latencies_s = jr.at("latencies_s").get<std::vector<double>>();
      r.rows.push_back(std::move(row));
    }
    return r;
  } catch (const json::exception& ex) {
    throw LoadError(std::string("bench report: malformed: ") + ex.what());
  }
}

std::string report_to_csv(const BenchReport& r) {
  std::string out = std::string(kCsvHeader) + "\n";
  char buf[512];
  for (const auto& row : r.rows) {
    std::snprintf(buf, sizeof buf, ",%zu,%s,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", row.batch, row.status.c_str(),
                  row.runs, row.symbols_per_window, row.mean_latency_s, row.std_latency_s, row.median_latency_s,
                  row.mean_symbols_per_sec, row.std_symbols_per_sec);
    out += row.model + buf;
  }
  return out;
}

void emit_report(const BenchReport& r, const std::filesystem::path& path, ReportFormat format) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("bench report: cannot open '" + path.string() + "' for writing");
  if (format == ReportFormat::json) {
    out << report_to_json(r).dump(2) << '\n';
  } else {
    out << report_to_csv(r);
  }
  if (!out) throw IoError("bench report: write failed for '" + path.string() + "'");
}

BenchReport read_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("bench report: cannot open '" + path.string() + "'");
  try {
    return report_from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw LoadError("bench report: '" + path.string() + "' is not valid JSON: " + e.what());
  }
}

}  // namespace ccic::bench
