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

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "simprune/tensor.hpp"

namespace simprune {

// Square convolution kernel, weights laid out (out, in, kh, kw) row-major.
// There is no bias: batch normalization follows every convolution.
struct ConvKernel {
  std::size_t out_channels = 0;
  std::size_t in_channels = 0;
  std::size_t kernel_size = 1;
  std::size_t stride = 1;
  std::size_t padding = 0;
  std::vector<float> weights;

  std::size_t slice_size() const { return kernel_size * kernel_size; }
  std::size_t weight_index(std::size_t o, std::size_t i, std::size_t kh,
                           std::size_t kw) const {
    return ((o * in_channels + i) * kernel_size + kh) * kernel_size + kw;
  }
  // The K x K slice connecting input channel `in` to output channel `out`.
  std::span<const float> slice(std::size_t out, std::size_t in) const {
    return std::span<const float>(weights).subspan(weight_index(out, in, 0, 0),
                                                   slice_size());
  }
  std::span<float> slice(std::size_t out, std::size_t in) {
    return std::span<float>(weights).subspan(weight_index(out, in, 0, 0),
                                             slice_size());
  }
  std::size_t output_extent(std::size_t input_extent) const;

  void validate() const;

  friend bool operator==(const ConvKernel&, const ConvKernel&) = default;
};

struct BnParams {
  std::vector<float> gamma;
  std::vector<float> beta;
  float eps = 1e-5f;

  friend bool operator==(const BnParams&, const BnParams&) = default;
};

enum class ActivationKind { ReLU, Sigmoid, Identity };

std::string_view to_string(ActivationKind kind);
ActivationKind parse_activation(std::string_view name);

enum class PoolKind { Max, Average };

std::string_view to_string(PoolKind kind);
PoolKind parse_pool(std::string_view name);

// Optional pooling stage after a block's activation.
struct PoolSpec {
  PoolKind kind = PoolKind::Max;
  std::size_t size = 2;
  std::size_t stride = 2;

  std::size_t output_extent(std::size_t input_extent) const;

  friend bool operator==(const PoolSpec&, const PoolSpec&) = default;
};

struct LayerBlock {
  ConvKernel conv;
  BnParams bn;
  ActivationKind act = ActivationKind::ReLU;
  std::optional<PoolSpec> pool;

  friend bool operator==(const LayerBlock&, const LayerBlock&) = default;
};

// Fully connected classifier on the flattened (c, h, w) output of the last
// block. weights are laid out (out, in) row-major.
struct DenseHead {
  std::size_t in_features = 0;
  std::size_t out_features = 0;
  std::vector<float> weights;
  std::vector<float> bias;

  friend bool operator==(const DenseHead&, const DenseHead&) = default;
};

struct InputGeometry {
  std::size_t channels = 0;
  std::size_t height = 32;
  std::size_t width = 32;

  friend bool operator==(const InputGeometry&, const InputGeometry&) = default;
};

// Single-branch chain of Conv -> BN -> activation blocks.
struct ModelGraph {
  InputGeometry input;
  std::vector<LayerBlock> blocks;
  std::optional<DenseHead> head;

  // Throws ValidationError naming the first broken invariant.
  void validate() const;

  // Spatial extent of the activations entering block `index`; index ==
  // blocks.size() yields the extent seen by the head.
  std::pair<std::size_t, std::size_t> spatial_at(std::size_t index) const;

  std::size_t parameter_count() const;

  friend bool operator==(const ModelGraph&, const ModelGraph&) = default;
};

}  // namespace simprune
