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

#include "simprune/fixtures.hpp"

#include <algorithm>
#include <cmath>

#include "simprune/error.hpp"

namespace simprune::fixtures {

namespace {

LayerBlock random_block(std::size_t in, std::size_t out, std::size_t k,
                        double bound, const RandomModelSpec& spec, Rng& rng) {
  LayerBlock block;
  block.conv.in_channels = in;
  block.conv.out_channels = out;
  block.conv.kernel_size = k;
  block.conv.stride = 1;
  block.conv.padding = k / 2;
  block.conv.weights.resize(out * in * k * k);
  std::uniform_real_distribution<float> weight(static_cast<float>(-bound),
                                               static_cast<float>(bound));
  for (float& w : block.conv.weights) w = weight(rng);
  std::uniform_real_distribution<float> gamma(
      static_cast<float>(spec.gamma_min), static_cast<float>(spec.gamma_max));
  std::uniform_real_distribution<float> beta(static_cast<float>(spec.beta_min),
                                             static_cast<float>(spec.beta_max));
  for (std::size_t c = 0; c < out; ++c) {
    block.bn.gamma.push_back(gamma(rng));
    block.bn.beta.push_back(beta(rng));
  }
  block.bn.eps = 1e-5f;
  block.act = spec.act;
  return block;
}

}  // namespace

ModelGraph random_model(const RandomModelSpec& spec, Rng& rng) {
  if (spec.channels.empty()) throw ValidationError("random_model needs blocks");
  ModelGraph model;
  model.input = spec.input;
  const double k2 = static_cast<double>(spec.kernel_size * spec.kernel_size);
  std::uniform_real_distribution<double> norm(spec.slice_norm_min,
                                              spec.slice_norm_max);
  // E||slice||^2 = K^2 * a^2 / 3 for uniform [-a, a] entries.
  const double bound = norm(rng) / std::sqrt(k2 / 3.0);
  std::size_t in = spec.input.channels;
  for (std::size_t out : spec.channels) {
    model.blocks.push_back(
        random_block(in, out, spec.kernel_size, bound, spec, rng));
    in = out;
  }
  if (spec.head_outputs > 0) {
    DenseHead head;
    head.in_features = in * spec.input.height * spec.input.width;
    head.out_features = spec.head_outputs;
    std::uniform_real_distribution<float> weight(-0.1f, 0.1f);
    head.weights.resize(head.in_features * head.out_features);
    for (float& w : head.weights) w = weight(rng);
    head.bias.resize(head.out_features);
    for (float& b : head.bias) b = weight(rng);
    model.head = std::move(head);
  }
  model.validate();
  return model;
}

Tensor4 random_input(const Shape4& shape, Rng& rng) {
  Tensor4 t(shape);
  std::normal_distribution<float> normal(0.0f, 1.0f);
  for (float& v : t.data()) v = normal(rng);
  return t;
}

Tensor4 random_input(const ModelGraph& model, std::size_t batch, Rng& rng) {
  return random_input(
      Shape4{model.input.channels, model.input.height, model.input.width, batch},
      rng);
}

ModelGraph distance_report_model(std::uint64_t seed) {
  RandomModelSpec spec;
  spec.input = {16, 32, 32};
  spec.channels = {32, 32, 32, 32};
  spec.gamma_min = 0.25;
  spec.gamma_max = 0.75;
  spec.beta_min = -1.5;
  spec.beta_max = 1.5;
  Rng rng = make_stream(seed, {0x6469});
  return random_model(spec, rng);
}

ModelGraph vgg16_cifar(std::size_t num_classes, std::uint64_t seed) {
  constexpr std::size_t kPool = 0;
  const std::size_t plan[] = {64,  64,  kPool, 128, 128, kPool, 256,
                              256, 256, kPool, 512, 512, 512,   kPool,
                              512, 512, 512};
  Rng rng = make_stream(seed, {0x766767});
  RandomModelSpec spec;
  ModelGraph model;
  model.input = InputGeometry{3, 32, 32};
  std::size_t in = 3;
  for (std::size_t entry : plan) {
    if (entry == kPool) {
      model.blocks.back().pool = PoolSpec{PoolKind::Max, 2, 2};
      continue;
    }
    // He-style scale keeps activations bounded through 13 layers.
    const double bound = std::sqrt(6.0 / static_cast<double>(9 * in));
    model.blocks.push_back(random_block(in, entry, 3, bound, spec, rng));
    in = entry;
  }
  model.blocks.back().pool = PoolSpec{PoolKind::Average, 2, 2};
  DenseHead head;
  head.in_features = in;
  head.out_features = num_classes;
  std::uniform_real_distribution<float> weight(-0.05f, 0.05f);
  head.weights.resize(head.in_features * head.out_features);
  for (float& w : head.weights) w = weight(rng);
  head.bias.assign(num_classes, 0.0f);
  model.head = std::move(head);
  model.validate();
  return model;
}

ModelGraph duplicate_channel_model(const RandomModelSpec& spec,
                                   std::size_t first, std::size_t second,
                                   Rng& rng) {
  ModelGraph model = random_model(spec, rng);
  LayerBlock& block = model.blocks.front();
  if (first == second || first >= block.conv.out_channels ||
      second >= block.conv.out_channels) {
    throw ValidationError("duplicate_channel_model: invalid channel pair");
  }
  for (std::size_t i = 0; i < block.conv.in_channels; ++i) {
    auto src = block.conv.slice(first, i);
    auto dst = block.conv.slice(second, i);
    std::copy(src.begin(), src.end(), dst.begin());
  }
  // 2 (g_min/2)^2 is below g_i^2 + g_j^2 for every other pair.
  const float gamma = static_cast<float>(spec.gamma_min / 2);
  block.bn.gamma[first] = block.bn.gamma[second] = gamma;
  block.bn.beta[second] = block.bn.beta[first];
  return model;
}

}  // namespace simprune::fixtures
