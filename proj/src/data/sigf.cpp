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

#include "ccic/data/sigf.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "ccic/error.hpp"

namespace ccic::data {
namespace {

template <typename U>
U to_le(U v) {
  if constexpr (std::endian::native == std::endian::big) {
    U out{};
    auto* src = reinterpret_cast<const unsigned char*>(&v);
    auto* dst = reinterpret_cast<unsigned char*>(&out);
    for (std::size_t i = 0; i < sizeof(U); ++i) dst[i] = src[sizeof(U) - 1 - i];
    return out;
  }
  return v;
}

std::string where(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

}  // namespace

void write_sigf_raw(const std::filesystem::path& path, const std::vector<float>& iq) {
  if (iq.size() % 2 != 0) throw InvalidInput("write_sigf: odd number of interleaved values for " + where(path));
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("write_sigf: cannot open " + where(path) + " for writing");
  const std::uint32_t version = to_le(kSigfVersion);
  const std::uint64_t count = to_le<std::uint64_t>(iq.size() / 2);
  out.write(kSigfMagic, 4);
  out.write(reinterpret_cast<const char*>(&version), 4);
  out.write(reinterpret_cast<const char*>(&count), 8);
  for (float v : iq) {
    std::uint32_t bits = to_le(std::bit_cast<std::uint32_t>(v));
    out.write(reinterpret_cast<const char*>(&bits), 4);
  }
  if (!out) throw IoError("write_sigf: write failed for " + where(path));
}

std::uint64_t sigf_sample_count(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("read_sigf: cannot open " + where(path));
  char header[kSigfHeaderBytes];
  in.read(header, kSigfHeaderBytes);
  if (in.gcount() != static_cast<std::streamsize>(kSigfHeaderBytes)) {
    throw LoadError("read_sigf: " + where(path) + " is shorter than the 16-byte header");
  }
  if (std::memcmp(header, kSigfMagic, 4) != 0) throw LoadError("read_sigf: bad magic in " + where(path));
  std::uint32_t version;
  std::uint64_t count;
  std::memcpy(&version, header + 4, 4);
  std::memcpy(&count, header + 8, 8);
  version = to_le(version);
  count = to_le(count);
  if (version != kSigfVersion) {
    throw LoadError("read_sigf: unsupported version " + std::to_string(version) + " in " + where(path));
  }
  const auto size = std::filesystem::file_size(path);
  const std::uint64_t payload = size - kSigfHeaderBytes;
  if (count > payload / 8 || payload != count * 8) {
    throw LoadError("read_sigf: " + where(path) + " header declares " + std::to_string(count) +
                    " samples but payload holds " + std::to_string(payload) + " bytes");
  }
  return count;
}

std::vector<float> read_sigf_raw(const std::filesystem::path& path) {
  const std::uint64_t count = sigf_sample_count(path);
  std::ifstream in(path, std::ios::binary);
  in.seekg(kSigfHeaderBytes);
  std::vector<std::uint32_t> raw(count * 2);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size() * 4));
  if (!in) throw LoadError("read_sigf: truncated payload in " + where(path));
  std::vector<float> out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) out[i] = std::bit_cast<float>(to_le(raw[i]));
  return out;
}

void write_sigf(const std::filesystem::path& path, const dsp::ComplexSignal& signal) {
  signal.validate();
  std::vector<float> iq(signal.size() * 2);
  for (std::size_t n = 0; n < signal.size(); ++n) {
    iq[2 * n] = static_cast<float>(signal.i[n]);
    iq[2 * n + 1] = static_cast<float>(signal.q[n]);
  }
  write_sigf_raw(path, iq);
}

dsp::ComplexSignal read_sigf(const std::filesystem::path& path) {
  const auto iq = read_sigf_raw(path);
  dsp::ComplexSignal s(iq.size() / 2);
  for (std::size_t n = 0; n < s.size(); ++n) {
    s.i[n] = iq[2 * n];
    s.q[n] = iq[2 * n + 1];
  }
  return s;
}

}  // namespace ccic::data
