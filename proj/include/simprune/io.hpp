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

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "simprune/model.hpp"

namespace simprune {

inline constexpr const char* kManifestVersion = "1";

// Reads a JSON manifest plus its little-endian float32 blobs (resolved
// relative to the manifest's directory) and validates the result. Errors
// are ValidationError or IoError prefixed with the manifest path and the
// offending field.
ModelGraph load_model(const std::filesystem::path& manifest_path);

// Writes the manifest and one blob per weight array next to it, each file
// atomically. Blob names derive from the manifest's stem.
void save_model(const ModelGraph& model,
                const std::filesystem::path& manifest_path);

// Writes to a temporary sibling, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view contents);

std::string read_file(const std::filesystem::path& path);

std::vector<float> read_f32_blob(const std::filesystem::path& path);
std::string encode_f32_blob(std::span<const float> values);

}  // namespace simprune
