// Copyright 2026 The simprune Authors. All Rights Reserved.
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

#include "simprune/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "simprune/error.hpp"

namespace simprune {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::uint32_t to_little_endian(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    return ((v & 0xffu) << 24) | ((v & 0xff00u) << 8) | ((v >> 8) & 0xff00u) |
           (v >> 24);
  }
}

// Wraps json accessors so type and key errors name the field.
template <typename T>
T field(const json& node, const char* key, const std::string& where) {
  if (!node.contains(key)) {
    throw ValidationError(where + "." + key + " is missing");
  }
  try {
    return node.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(where + "." + key + " has the wrong type: " + e.what());
  }
}

template <typename T>
T field_or(const json& node, const char* key, const std::string& where,
           T fallback) {
  return node.contains(key) ? field<T>(node, key, where) : fallback;
}

std::vector<float> load_blob(const fs::path& dir, const std::string& name,
                             std::size_t expected, const std::string& where) {
  const fs::path path = dir / name;
  if (!fs::exists(path)) {
    throw IoError(where + ": blob \"" + name + "\" not found at " +
                  path.string());
  }
  std::vector<float> values = read_f32_blob(path);
  if (values.size() != expected) {
    throw ValidationError(where + ": blob \"" + name + "\" holds " +
                          std::to_string(values.size() * 4) +
                          " bytes, expected 4 * " + std::to_string(expected));
  }
  return values;
}

}  // namespace

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const fs::path& path, std::string_view contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
}

std::vector<float> read_f32_blob(const fs::path& path) {
  const std::string bytes = read_file(path);
  if (bytes.size() % 4 != 0) {
    throw ValidationError(path.string() + ": length " +
                          std::to_string(bytes.size()) +
                          " is not a multiple of 4");
  }
  std::vector<float> values(bytes.size() / 4);
  for (std::size_t k = 0; k < values.size(); ++k) {
    std::uint32_t raw;
    std::memcpy(&raw, bytes.data() + 4 * k, 4);
    values[k] = std::bit_cast<float>(to_little_endian(raw));
  }
  return values;
}

std::string encode_f32_blob(std::span<const float> values) {
  std::string bytes(values.size() * 4, '\0');
  for (std::size_t k = 0; k < values.size(); ++k) {
    const std::uint32_t raw =
        to_little_endian(std::bit_cast<std::uint32_t>(values[k]));
    std::memcpy(bytes.data() + 4 * k, &raw, 4);
  }
  return bytes;
}

ModelGraph load_model(const fs::path& manifest_path) {
  const std::string where = manifest_path.string();
  json doc;
  try {
    doc = json::parse(read_file(manifest_path));
  } catch (const json::parse_error& e) {
    throw ValidationError(where + ": invalid JSON: " + e.what());
  }
  const fs::path dir = manifest_path.parent_path();
  try {
    const auto version = field<std::string>(doc, "version", "manifest");
    if (version != kManifestVersion) {
      throw ValidationError("manifest.version \"" + version +
                            "\" is not supported");
    }
    if (!doc.contains("blocks") || !doc.at("blocks").is_array()) {
      throw ValidationError("manifest.blocks must be an array");
    }
    ModelGraph model;
    const json& blocks = doc.at("blocks");
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      const json& b = blocks[i];
      const std::string name = "blocks[" + std::to_string(i) + "]";
      const auto kind = field<std::string>(b, "kind", name);
      if (kind != "conv_bn_act") {
        throw ValidationError(name + ".kind \"" + kind + "\" is not supported");
      }
      LayerBlock block;
      ConvKernel& conv = block.conv;
      conv.in_channels = field<std::size_t>(b, "in_channels", name);
      conv.out_channels = field<std::size_t>(b, "out_channels", name);
      conv.kernel_size = field<std::size_t>(b, "kernel_size", name);
      conv.stride = field_or<std::size_t>(b, "stride", name, 1);
      conv.padding = field_or<std::size_t>(b, "padding", name, conv.kernel_size / 2);
      try {
        block.act = parse_activation(field<std::string>(b, "activation", name));
      } catch (const ValidationError& e) {
        throw ValidationError(name + ".activation: " + e.what());
      }
      block.bn.gamma = field<std::vector<float>>(b, "gamma", name);
      block.bn.beta = field<std::vector<float>>(b, "beta", name);
      block.bn.eps = field<float>(b, "eps", name);
      if (block.bn.gamma.size() != conv.out_channels) {
        throw ValidationError(name + ".gamma has length " +
                              std::to_string(block.bn.gamma.size()) +
                              ", expected out_channels " +
                              std::to_string(conv.out_channels));
      }
      if (block.bn.beta.size() != conv.out_channels) {
        throw ValidationError(name + ".beta has length " +
                              std::to_string(block.bn.beta.size()) +
                              ", expected out_channels " +
                              std::to_string(conv.out_channels));
      }
      if (b.contains("pool")) {
        const json& p = b.at("pool");
        const std::string pname = name + ".pool";
        PoolSpec pool;
        pool.kind = parse_pool(field<std::string>(p, "kind", pname));
        pool.size = field<std::size_t>(p, "size", pname);
        pool.stride = field_or<std::size_t>(p, "stride", pname, pool.size);
        block.pool = pool;
      }
      conv.weights = load_blob(
          dir, field<std::string>(b, "weight_blob", name),
          conv.out_channels * conv.in_channels * conv.slice_size(),
          name + ".weight_blob");
      model.blocks.push_back(std::move(block));
    }
    if (model.blocks.empty()) throw ValidationError("manifest.blocks is empty");
    model.input.channels = model.blocks.front().conv.in_channels;
    if (doc.contains("input")) {
      const json& in = doc.at("input");
      model.input.channels = field<std::size_t>(in, "channels", "input");
      model.input.height = field<std::size_t>(in, "height", "input");
      model.input.width = field<std::size_t>(in, "width", "input");
    }
    if (doc.contains("head") && !doc.at("head").is_null()) {
      const json& h = doc.at("head");
      DenseHead head;
      head.in_features = field<std::size_t>(h, "in_features", "head");
      head.out_features = field<std::size_t>(h, "out_features", "head");
      head.weights = load_blob(dir, field<std::string>(h, "weight_blob", "head"),
                               head.in_features * head.out_features,
                               "head.weight_blob");
      head.bias = load_blob(dir, field<std::string>(h, "bias_blob", "head"),
                            head.out_features, "head.bias_blob");
      model.head = std::move(head);
    }
    model.validate();
    return model;
  } catch (const ValidationError& e) {
    throw ValidationError(where + ": " + e.what());
  } catch (const IoError& e) {
    throw IoError(where + ": " + e.what());
  }
}

void save_model(const ModelGraph& model, const fs::path& manifest_path) {
  model.validate();
  const fs::path dir = manifest_path.parent_path();
  const std::string stem = manifest_path.stem().string();
  json doc;
  doc["version"] = kManifestVersion;
  doc["input"] = {{"channels", model.input.channels},
                  {"height", model.input.height},
                  {"width", model.input.width}};
  json blocks = json::array();
  for (std::size_t i = 0; i < model.blocks.size(); ++i) {
    const LayerBlock& block = model.blocks[i];
    const std::string blob = stem + ".block" + std::to_string(i) + ".bin";
    write_file_atomic(dir / blob, encode_f32_blob(block.conv.weights));
    json b = {{"kind", "conv_bn_act"},
              {"in_channels", block.conv.in_channels},
              {"out_channels", block.conv.out_channels},
              {"kernel_size", block.conv.kernel_size},
              {"stride", block.conv.stride},
              {"padding", block.conv.padding},
              {"activation", std::string(to_string(block.act))},
              {"weight_blob", blob},
              {"gamma", block.bn.gamma},
              {"beta", block.bn.beta},
              {"eps", block.bn.eps}};
    if (block.pool) {
      b["pool"] = {{"kind", std::string(to_string(block.pool->kind))},
                   {"size", block.pool->size},
                   {"stride", block.pool->stride}};
    }
    blocks.push_back(std::move(b));
  }
  doc["blocks"] = std::move(blocks);
  if (model.head) {
    const std::string weight_blob = stem + ".head.weight.bin";
    const std::string bias_blob = stem + ".head.bias.bin";
    write_file_atomic(dir / weight_blob, encode_f32_blob(model.head->weights));
    write_file_atomic(dir / bias_blob, encode_f32_blob(model.head->bias));
    doc["head"] = {{"in_features", model.head->in_features},
                   {"out_features", model.head->out_features},
                   {"weight_blob", weight_blob},
                   {"bias_blob", bias_blob}};
  }
  write_file_atomic(manifest_path, doc.dump(2) + "\n");
}

}  // namespace simprune
