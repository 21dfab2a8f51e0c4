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

#pragma once

#include <filesystem>
#include <json.hpp>
#include <string>

#include "ccic/bench/bench.hpp"

namespace ccic::bench {

enum class ReportFormat { json, csv };

ReportFormat parse_report_format(const std::string& s);

nlohmann::json report_to_json(const BenchReport& r);
/// Throws LoadError on schema_version mismatch or missing fields.
BenchReport report_from_json(const nlohmann::json& j);

std::string report_to_csv(const BenchReport& r);
inline constexpr const char* kCsvHeader =
    "model,batch,status,runs,symbols_per_window,mean_latency_s,std_latency_s,median_latency_s,"
    "mean_symbols_per_sec,std_symbols_per_sec";

void emit_report(const BenchReport& r, const std::filesystem::path& path, ReportFormat format);
BenchReport read_report(const std::filesystem::path& path);

}  // namespace ccic::bench
