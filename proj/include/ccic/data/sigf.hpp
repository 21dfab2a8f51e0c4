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

#include <cstdint>
#include <filesystem>
#include <vector>

#include "ccic/dsp/signal.hpp"

namespace ccic::data {

/// SIGF: 16-byte header ("SIGF", u32 version, u64 sample count) followed by
/// interleaved little-endian float32 I,Q pairs.
inline constexpr char kSigfMagic[4] = {'S', 'I', 'G', 'F'};
inline constexpr std::uint32_t kSigfVersion = 1;
inline constexpr std::size_t kSigfHeaderBytes = 16;

/// Writes interleaved I,Q float32 values verbatim (bit-exact, including -0 and NaN payloads).
void write_sigf_raw(const std::filesystem::path& path, const std::vector<float>& interleaved_iq);
std::vector<float> read_sigf_raw(const std::filesystem::path& path);

/// Convenience wrappers converting to and from double-precision signals.
void write_sigf(const std::filesystem::path& path, const dsp::ComplexSignal& signal);
dsp::ComplexSignal read_sigf(const std::filesystem::path& path);

/// Sample count from the header only; validates magic, version and file size.
std::uint64_t sigf_sample_count(const std::filesystem::path& path);

}  // namespace ccic::data
