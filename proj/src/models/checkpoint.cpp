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

#include "ccic/models/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <map>

#include "ccic/error.hpp"

namespace ccic::models {

namespace fs = std::filesystem;
using nlohmann::json;

static_assert(std::endian::native == std::endian::little, "checkpoint blobs are written in host order");

nn::Tensor dequantize_weight(const ConvLayer& layer, const QuantizedWeight& q) {
  nn::Tensor w(layer.p.weight.shape());
  if (q.values.size() != w.numel()) throw InvalidInput("dequantize: " + layer.name + " value count mismatch");
  auto out = w.data();
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::size_t c = layer.out_channel_of(i);
    out[i] = static_cast<float>(static_cast<std::int32_t>(q.values[i]) - q.zero_point[c]) * q.scale[c];
  }
  return w;
}

void save_checkpoint(const Model& model, const fs::path& dir) {
  fs::create_directories(dir);
  Model& m = const_cast<Model&>(model);  // visit() hands out handles only; nothing is modified
  std::vector<char> blob;
  json tensors = json::array();
  auto append = [&](const void* data, std::size_t nbytes) {
    const std::size_t offset = (blob.size() + kBlobAlignment - 1) / kBlobAlignment * kBlobAlignment;
    blob.resize(offset + nbytes, 0);
    if (nbytes) std::memcpy(blob.data() + offset, data, nbytes);
    return offset;
  };
  m.visit([&](const std::string& name, nn::Tensor& t, ParamKind kind, ConvLayer* layer) {
    json e = {{"name", name}, {"shape", t.shape()}};
    if (kind == ParamKind::conv_weight && layer && layer->quant) {
      const auto& q = *layer->quant;
      e["dtype"] = "i8";
      e["offset"] = append(q.values.data(), q.values.size());
      e["nbytes"] = q.values.size();
      e["scale"] = q.scale;
      e["zero_point"] = q.zero_point;
    } else {
      e["dtype"] = "f32";
      e["offset"] = append(t.ptr(), t.numel() * sizeof(float));
      e["nbytes"] = t.numel() * sizeof(float);
    }
    tensors.push_back(std::move(e));
    if (kind == ParamKind::conv_weight && layer && layer->mask.defined()) {
      std::vector<std::int8_t> mask(layer->mask.numel());
      const auto mv = std::as_const(layer->mask).data();
      for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = mv[i] != 0.0f ? 1 : 0;
      json me = {{"name", layer->name + ".mask"}, {"shape", layer->mask.shape()}, {"dtype", "i8"},
                 {"role", "mask"}};
      me["offset"] = append(mask.data(), mask.size());
      me["nbytes"] = mask.size();
      tensors.push_back(std::move(me));
    }
  });
  const json manifest = {{"format_version", kCheckpointVersion},
                         {"config", model.config().to_json()},
                         {"blob", "weights.bin"},
                         {"blob_bytes", blob.size()},
                         {"tensors", tensors}};
  {
    std::ofstream out(dir / "weights.bin", std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("checkpoint: cannot write '" + (dir / "weights.bin").string() + "'");
    out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
    if (!out) throw IoError("checkpoint: write failed for '" + (dir / "weights.bin").string() + "'");
  }
  std::ofstream out(dir / "manifest.json", std::ios::trunc);
  if (!out) throw IoError("checkpoint: cannot write '" + (dir / "manifest.json").string() + "'");
  out << manifest.dump(1) << '\n';
}

namespace {

json read_manifest(const fs::path& dir) {
  const fs::path path = dir / "manifest.json";
  std::ifstream in(path);
  if (!in) throw LoadError("checkpoint: missing '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw LoadError("checkpoint: corrupt manifest '" + path.string() + "': " + e.what());
  }
  if (!j.is_object() || !j.contains("format_version")) {
    throw LoadError("checkpoint: '" + path.string() + "' has no format_version");
  }
  const auto& v = j["format_version"];
  if (!v.is_number_integer() || v.get<int>() != kCheckpointVersion) {
    throw LoadError("checkpoint: unsupported format_version " + v.dump() + " in '" + path.string() +
                    "' (this build reads version " + std::to_string(kCheckpointVersion) + ")");
  }
  return j;
}

}  // namespace

std::uint64_t checkpoint_payload_bytes(const fs::path& dir) {
  const json j = read_manifest(dir);
  std::uint64_t total = 0;
  for (const auto& t : j.at("tensors")) total += t.at("nbytes").get<std::uint64_t>();
  return total;
}

Model load_checkpoint(const fs::path& dir) {
  const json j = read_manifest(dir);
  try {
    Model model(ModelConfig::from_json(j.at("config")));
    std::vector<char> blob;
    {
      const fs::path bpath = dir / j.value("blob", std::string("weights.bin"));
      std::ifstream in(bpath, std::ios::binary);
      if (!in) throw LoadError("checkpoint: missing blob '" + bpath.string() + "'");
      blob.assign(std::istreambuf_iterator<char>(in), {});
      if (j.contains("blob_bytes") && j["blob_bytes"].get<std::uint64_t>() != blob.size()) {
        throw LoadError("checkpoint: blob '" + bpath.string() + "' holds " + std::to_string(blob.size()) +
                        " bytes, manifest expects " + std::to_string(j["blob_bytes"].get<std::uint64_t>()) +
                        " (truncated or corrupt)");
      }
    }
    std::map<std::string, const json*> by_name;
    for (const auto& t : j.at("tensors")) {
      const auto name = t.at("name").get<std::string>();
      if (!by_name.emplace(name, &t).second) throw LoadError("checkpoint: duplicate tensor '" + name + "'");
    }
    auto fetch = [&](const json& e, std::size_t elem_bytes, std::size_t count) -> const char* {
      const auto offset = e.at("offset").get<std::uint64_t>();
      const auto nbytes = e.at("nbytes").get<std::uint64_t>();
      const auto name = e.at("name").get<std::string>();
      if (nbytes != elem_bytes * count) {
        throw LoadError("checkpoint: tensor '" + name + "' nbytes " + std::to_string(nbytes) + " does not match shape");
      }
      if (offset % kBlobAlignment != 0) throw LoadError("checkpoint: tensor '" + name + "' is misaligned");
      if (offset > blob.size() || nbytes > blob.size() - offset) {
        throw LoadError("checkpoint: tensor '" + name + "' extends past the end of the blob (truncated file?)");
      }
      return blob.data() + offset;
    };
    std::size_t consumed = 0;
    model.visit([&](const std::string& name, nn::Tensor& t, ParamKind kind, ConvLayer* layer) {
      auto it = by_name.find(name);
      if (it == by_name.end()) throw LoadError("checkpoint: tensor '" + name + "' is missing");
      const json& e = *it->second;
      ++consumed;
      if (e.at("shape").get<nn::Shape>() != t.shape()) {
        throw LoadError("checkpoint: tensor '" + name + "' has shape " + e.at("shape").dump() + ", model expects " +
                        nn::shape_string(t.shape()));
      }
      const auto dtype = e.at("dtype").get<std::string>();
      if (dtype == "f32") {
        std::memcpy(t.ptr(), fetch(e, 4, t.numel()), t.numel() * 4);
      } else if (dtype == "i8" && kind == ParamKind::conv_weight) {
        QuantizedWeight q;
        q.values.resize(t.numel());
        std::memcpy(q.values.data(), fetch(e, 1, t.numel()), t.numel());
        q.scale = e.at("scale").get<std::vector<float>>();
        q.zero_point = e.at("zero_point").get<std::vector<std::int32_t>>();
        if (q.scale.size() != layer->out_channels() || q.zero_point.size() != layer->out_channels()) {
          throw LoadError("checkpoint: tensor '" + name + "' needs one scale/zero_point per output channel");
        }
        for (std::size_t c = 0; c < q.scale.size(); ++c) {
          if (!(q.scale[c] > 0.0f) || q.zero_point[c] < -128 || q.zero_point[c] > 127) {
            throw LoadError("checkpoint: tensor '" + name + "' has invalid quantization parameters");
          }
        }
        const auto w = dequantize_weight(*layer, q);
        std::copy(w.data().begin(), w.data().end(), t.data().begin());
        layer->quant = std::move(q);
      } else {
        throw LoadError("checkpoint: tensor '" + name + "' has unsupported dtype '" + dtype + "'");
      }
      if (kind == ParamKind::conv_weight) {
        auto mit = by_name.find(layer->name + ".mask");
        if (mit != by_name.end()) {
          ++consumed;
          const json& me = *mit->second;
          if (me.at("shape").get<nn::Shape>() != t.shape()) throw LoadError("checkpoint: mask shape mismatch for " + name);
          const char* src = fetch(me, 1, t.numel());
          layer->mask = nn::Tensor(t.shape());
          auto mv = layer->mask.data();
          for (std::size_t i = 0; i < mv.size(); ++i) mv[i] = src[i] ? 1.0f : 0.0f;
        }
      }
    });
    if (consumed != by_name.size()) {
      throw LoadError("checkpoint: manifest lists " + std::to_string(by_name.size() - consumed) +
                      " tensor(s) unknown to a '" + model.config().name() + "' model");
    }
    for (const auto& p : model.parameters()) nn::detail::check_finite(p.tensor, "checkpoint");
    return model;
  } catch (const json::exception& e) {
    throw LoadError(std::string("checkpoint: malformed manifest in '") + dir.string() + "': " + e.what());
  } catch (const NumericError& e) {
    throw LoadError(std::string("checkpoint: '") + dir.string() + "' holds non-finite weights");
  } catch (const InvalidInput& e) {
    throw LoadError(std::string("checkpoint: '") + dir.string() + "': " + e.what());
  }
}

}  // namespace ccic::models
