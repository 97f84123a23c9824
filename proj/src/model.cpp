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

#include "simprune/model.hpp"

#include <string>

#include "simprune/error.hpp"

namespace simprune {

namespace {

std::string block_name(std::size_t i) {
  return "blocks[" + std::to_string(i) + "]";
}

}  // namespace

std::size_t ConvKernel::output_extent(std::size_t input_extent) const {
  const std::size_t padded = input_extent + 2 * padding;
  if (padded < kernel_size) {
    throw ShapeError("kernel_size " + std::to_string(kernel_size) +
                     " exceeds padded input extent " + std::to_string(padded));
  }
  return (padded - kernel_size) / stride + 1;
}

void ConvKernel::validate() const {
  if (out_channels == 0) throw ValidationError("conv out_channels must be >= 1");
  if (in_channels == 0) throw ValidationError("conv in_channels must be >= 1");
  if (kernel_size == 0) throw ValidationError("conv kernel_size must be >= 1");
  if (stride == 0) throw ValidationError("conv stride must be >= 1");
  const std::size_t expected = out_channels * in_channels * slice_size();
  if (weights.size() != expected) {
    throw ValidationError("conv weights length " +
                          std::to_string(weights.size()) + " != out*in*K*K = " +
                          std::to_string(expected));
  }
}

std::string_view to_string(ActivationKind kind) {
  switch (kind) {
    case ActivationKind::ReLU:
      return "relu";
    case ActivationKind::Sigmoid:
      return "sigmoid";
    case ActivationKind::Identity:
      return "identity";
  }
  return "unknown";
}

ActivationKind parse_activation(std::string_view name) {
  if (name == "relu") return ActivationKind::ReLU;
  if (name == "sigmoid") return ActivationKind::Sigmoid;
  if (name == "identity") return ActivationKind::Identity;
  throw ValidationError("unknown activation \"" + std::string(name) + "\"");
}

std::string_view to_string(PoolKind kind) {
  return kind == PoolKind::Max ? "max" : "avg";
}

PoolKind parse_pool(std::string_view name) {
  if (name == "max") return PoolKind::Max;
  if (name == "avg") return PoolKind::Average;
  throw ValidationError("unknown pool kind \"" + std::string(name) + "\"");
}

std::size_t PoolSpec::output_extent(std::size_t input_extent) const {
  if (input_extent < size) {
    throw ShapeError("pool size " + std::to_string(size) +
                     " exceeds input extent " + std::to_string(input_extent));
  }
  return (input_extent - size) / stride + 1;
}

void ModelGraph::validate() const {
  if (blocks.empty()) throw ValidationError("model has no blocks");
  if (input.channels != blocks.front().conv.in_channels) {
    throw ValidationError("input.channels " + std::to_string(input.channels) +
                          " != blocks[0].in_channels " +
                          std::to_string(blocks.front().conv.in_channels));
  }
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const LayerBlock& block = blocks[i];
    const std::string name = block_name(i);
    try {
      block.conv.validate();
    } catch (const ValidationError& e) {
      throw ValidationError(name + ": " + e.what());
    }
    const std::size_t c = block.conv.out_channels;
    if (block.bn.gamma.size() != c) {
      throw ValidationError(name + ".gamma has length " +
                            std::to_string(block.bn.gamma.size()) +
                            ", expected out_channels " + std::to_string(c));
    }
    if (block.bn.beta.size() != c) {
      throw ValidationError(name + ".beta has length " +
                            std::to_string(block.bn.beta.size()) +
                            ", expected out_channels " + std::to_string(c));
    }
    if (!(block.bn.eps > 0.0f)) throw ValidationError(name + ".eps must be > 0");
    if (block.pool && (block.pool->size == 0 || block.pool->stride == 0)) {
      throw ValidationError(name + ".pool size and stride must be >= 1");
    }
    if (i + 1 < blocks.size() &&
        blocks[i + 1].conv.in_channels != block.conv.out_channels) {
      throw ValidationError(block_name(i + 1) + ".in_channels " +
                            std::to_string(blocks[i + 1].conv.in_channels) +
                            " != " + name + ".out_channels " +
                            std::to_string(c));
    }
  }
  if (head) {
    const std::size_t last = blocks.back().conv.out_channels;
    if (head->in_features == 0 || head->in_features % last != 0) {
      throw ValidationError("head.in_features " +
                            std::to_string(head->in_features) +
                            " is not a positive multiple of the last block's "
                            "out_channels " +
                            std::to_string(last));
    }
    if (head->weights.size() != head->in_features * head->out_features) {
      throw ValidationError("head.weights length mismatch");
    }
    if (head->bias.size() != head->out_features) {
      throw ValidationError("head.bias length mismatch");
    }
  }
}

std::pair<std::size_t, std::size_t> ModelGraph::spatial_at(
    std::size_t index) const {
  std::size_t h = input.height;
  std::size_t w = input.width;
  for (std::size_t i = 0; i < index && i < blocks.size(); ++i) {
    h = blocks[i].conv.output_extent(h);
    w = blocks[i].conv.output_extent(w);
    if (blocks[i].pool) {
      h = blocks[i].pool->output_extent(h);
      w = blocks[i].pool->output_extent(w);
    }
  }
  return {h, w};
}

std::size_t ModelGraph::parameter_count() const {
  std::size_t total = 0;
  for (const LayerBlock& block : blocks) {
    total += block.conv.weights.size() + block.bn.gamma.size() +
             block.bn.beta.size();
  }
  if (head) total += head->weights.size() + head->bias.size();
  return total;
}

}  // namespace simprune
