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
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#include "ccic/dsp/signal.hpp"

namespace ccic::data {

/// One contiguous interference recording.
struct Superframe {
  std::string id;
  std::string kind;
  dsp::ComplexSignal signal;
};

enum class Split { unassigned, train, val, test };

const char* split_name(Split s);
Split parse_split(const std::string& name);

struct ManifestEntry {
  std::string id;
  std::string kind;
  std::filesystem::path path;  // relative to the corpus directory; empty for in-memory frames
  std::uint64_t length = 0;
  bool reserved_test = false;  // excluded from train/val before splitting
  Split split = Split::unassigned;
};

inline constexpr int kManifestVersion = 1;

/// Superframe collection with lazily loaded, cached signals. Signal access
/// is thread-safe; the manifest is immutable once constructed.
class Dataset {
 public:
  Dataset() = default;

  /// Reads `dir/manifest.json` and validates every SIGF header against it.
  /// A directory without a manifest and without SIGF files is an empty dataset.
  static Dataset load(const std::filesystem::path& dir);

  /// Wraps frames held in memory.
  static Dataset from_frames(std::vector<Superframe> frames);

  /// Writes every frame as SIGF plus manifest.json into `dir`.
  void save(const std::filesystem::path& dir) const;

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const std::vector<ManifestEntry>& entries() const noexcept { return entries_; }

  /// Marks `ids` as reserved for testing.
  void reserve_test(const std::vector<std::string>& ids);

  /// Deterministic 80:20 (by default) assignment of the non-test frames.
  /// Train count is floor(ratio * n); the remainder goes to validation.
  void assign_splits(std::uint64_t seed, double train_ratio = 0.8);

  std::vector<std::size_t> indices(Split s) const;

  /// Signal of frame `index`, loaded from disk on first use.
  std::shared_ptr<const dsp::ComplexSignal> signal(std::size_t index) const;

 private:
  std::filesystem::path root_;
  std::vector<ManifestEntry> entries_;
  struct Cache {
    std::mutex mu;
    std::vector<std::shared_ptr<const dsp::ComplexSignal>> signals;
  };
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

/// Contiguous slice [start, start + length) with start uniform on [0, size - length].
dsp::ComplexSignal sample_window(const dsp::ComplexSignal& frame, std::size_t length, std::mt19937_64& rng);

}  // namespace ccic::data
