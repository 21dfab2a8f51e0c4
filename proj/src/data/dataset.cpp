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

#include "ccic/data/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <set>

#include "ccic/data/sigf.hpp"
#include "ccic/error.hpp"

namespace ccic::data {

namespace fs = std::filesystem;
using nlohmann::json;

const char* split_name(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::val: return "val";
    case Split::test: return "test";
    default: return "unassigned";
  }
}

Split parse_split(const std::string& name) {
  if (name == "train") return Split::train;
  if (name == "val") return Split::val;
  if (name == "test") return Split::test;
  if (name == "unassigned") return Split::unassigned;
  throw InvalidInput("unknown split '" + name + "' (expected train, val or test)");
}

Dataset Dataset::load(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw LoadError("dataset: '" + dir.string() + "' is not a directory");
  Dataset ds;
  ds.root_ = dir;
  const fs::path manifest = dir / "manifest.json";
  if (!fs::exists(manifest)) {
    for (const auto& e : fs::directory_iterator(dir)) {
      if (e.path().extension() == ".sigf") {
        throw LoadError("dataset: '" + dir.string() + "' holds SIGF files but no manifest.json");
      }
    }
    return ds;
  }
  json j;
  try {
    std::ifstream in(manifest);
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw LoadError("dataset: cannot parse '" + manifest.string() + "': " + e.what());
  }
  try {
    const int version = j.at("format_version").get<int>();
    if (version != kManifestVersion) {
      throw LoadError("dataset: '" + manifest.string() + "' has unsupported format_version " +
                      std::to_string(version));
    }
    std::set<std::string> ids;
    for (const auto& f : j.at("superframes")) {
      ManifestEntry e;
      e.id = f.at("id").get<std::string>();
      e.kind = f.value("kind", std::string("unknown"));
      e.path = f.at("path").get<std::string>();
      e.length = f.at("length").get<std::uint64_t>();
      e.reserved_test = f.value("reserved_test", false);
      e.split = parse_split(f.value("split", std::string("unassigned")));
      if (!ids.insert(e.id).second) throw LoadError("dataset: duplicate superframe id '" + e.id + "'");
      if (e.path.is_absolute() || e.path.string().find("..") != std::string::npos) {
        throw LoadError("dataset: superframe '" + e.id + "' path must stay inside the corpus directory");
      }
      const auto count = sigf_sample_count(dir / e.path);
      if (count != e.length) {
        throw LoadError("dataset: superframe '" + e.id + "' manifest length " + std::to_string(e.length) +
                        " disagrees with header count " + std::to_string(count) + " in '" +
                        (dir / e.path).string() + "'");
      }
      ds.entries_.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    throw LoadError("dataset: malformed manifest '" + manifest.string() + "': " + e.what());
  }
  ds.cache_->signals.resize(ds.entries_.size());
  return ds;
}

Dataset Dataset::from_frames(std::vector<Superframe> frames) {
  Dataset ds;
  std::set<std::string> ids;
  for (auto& f : frames) {
    f.signal.validate();
    if (!ids.insert(f.id).second) throw InvalidInput("dataset: duplicate superframe id '" + f.id + "'");
    ManifestEntry e;
    e.id = f.id;
    e.kind = f.kind;
    e.length = f.signal.size();
    ds.entries_.push_back(e);
    ds.cache_->signals.push_back(std::make_shared<const dsp::ComplexSignal>(std::move(f.signal)));
  }
  return ds;
}

void Dataset::save(const fs::path& dir) const {
  fs::create_directories(dir);
  json frames = json::array();
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    const fs::path rel = e.id + ".sigf";
    write_sigf(dir / rel, *signal(i));
    json f = {{"id", e.id}, {"kind", e.kind}, {"path", rel.string()}, {"length", e.length}};
    if (e.reserved_test) f["reserved_test"] = true;
    if (e.split != Split::unassigned) f["split"] = split_name(e.split);
    frames.push_back(std::move(f));
  }
  json j = {{"format_version", kManifestVersion}, {"superframes", frames}};
  std::ofstream out(dir / "manifest.json");
  if (!out) throw IoError("dataset: cannot write '" + (dir / "manifest.json").string() + "'");
  out << j.dump(2) << '\n';
}

void Dataset::reserve_test(const std::vector<std::string>& ids) {
  for (const auto& id : ids) {
    auto it = std::find_if(entries_.begin(), entries_.end(), [&](const auto& e) { return e.id == id; });
    if (it == entries_.end()) throw InvalidInput("reserve_test: unknown superframe id '" + id + "'");
    it->reserved_test = true;
    it->split = Split::test;
  }
}

void Dataset::assign_splits(std::uint64_t seed, double train_ratio) {
  if (!(train_ratio > 0.0 && train_ratio < 1.0)) {
    throw InvalidInput("split: train ratio must lie in (0, 1), got " + std::to_string(train_ratio));
  }
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].reserved_test) {
      entries_[i].split = Split::test;
    } else {
      pool.push_back(i);
    }
  }
  if (pool.size() < 2) {
    throw InvalidInput("split: need at least 2 non-test superframes for train/val, got " +
                       std::to_string(pool.size()));
  }
  std::mt19937_64 rng(seed);
  std::shuffle(pool.begin(), pool.end(), rng);
  // The epsilon keeps products such as 0.8 * 5 = 3.9999999999999996 at 4.
  auto n_train = static_cast<std::size_t>(std::floor(train_ratio * static_cast<double>(pool.size()) + 1e-9));
  n_train = std::clamp<std::size_t>(n_train, 1, pool.size() - 1);
  for (std::size_t k = 0; k < pool.size(); ++k) entries_[pool[k]].split = k < n_train ? Split::train : Split::val;
}

std::vector<std::size_t> Dataset::indices(Split s) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < entries_.size(); ++i)
    if (entries_[i].split == s) out.push_back(i);
  return out;
}

std::shared_ptr<const dsp::ComplexSignal> Dataset::signal(std::size_t index) const {
  if (index >= entries_.size()) {
    throw InvalidInput("dataset: frame index " + std::to_string(index) + " out of range (" +
                       std::to_string(entries_.size()) + " frames)");
  }
  std::lock_guard lock(cache_->mu);
  auto& slot = cache_->signals[index];
  if (!slot) {
    auto sig = read_sigf(root_ / entries_[index].path);
    if (sig.size() != entries_[index].length) {
      throw LoadError("dataset: '" + (root_ / entries_[index].path).string() + "' changed length on disk");
    }
    slot = std::make_shared<const dsp::ComplexSignal>(std::move(sig));
  }
  return slot;
}

dsp::ComplexSignal sample_window(const dsp::ComplexSignal& frame, std::size_t length, std::mt19937_64& rng) {
  if (length == 0 || length > frame.size()) {
    throw InvalidInput("sample_window: window of " + std::to_string(length) + " samples does not fit a " +
                       std::to_string(frame.size()) + "-sample superframe");
  }
  std::uniform_int_distribution<std::size_t> start_dist(0, frame.size() - length);
  const std::size_t start = start_dist(rng);
  dsp::ComplexSignal out(length);
  std::copy_n(frame.i.begin() + static_cast<std::ptrdiff_t>(start), length, out.i.begin());
  std::copy_n(frame.q.begin() + static_cast<std::ptrdiff_t>(start), length, out.q.begin());
  return out;
}

}  // namespace ccic::data
