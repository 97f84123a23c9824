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
#include <cstdint>
#include <vector>

#include "simprune/model.hpp"
#include "simprune/rng.hpp"
#include "simprune/tensor.hpp"

// Model and input generators used by the verification harness, the CLI and
// the tests.
namespace simprune::fixtures {

struct RandomModelSpec {
  InputGeometry input{3, 8, 8};
  std::vector<std::size_t> channels{8, 8};  // out_channels per block
  std::size_t kernel_size = 3;
  ActivationKind act = ActivationKind::ReLU;
  // Weights are uniform in [-a, a]; a is drawn once per model so that the
  // expected K x K slice norm lies in [slice_norm_min, slice_norm_max].
  double slice_norm_min = 0.1;
  double slice_norm_max = 1.0;
  double gamma_min = 0.5;
  double gamma_max = 1.5;
  double beta_min = -1.0;
  double beta_max = 1.0;
  // Adds a dense head with this many outputs when non-zero.
  std::size_t head_outputs = 0;
};

// Size-preserving geometry: stride 1, padding K / 2.
ModelGraph random_model(const RandomModelSpec& spec, Rng& rng);

// Standard normal entries.
Tensor4 random_input(const Shape4& shape, Rng& rng);

// Input tensor shaped for `model` with the given batch size.
Tensor4 random_input(const ModelGraph& model, std::size_t batch, Rng& rng);

// The 13-conv VGG-16 variant used for CIFAR (channel plan 64, 64, M, 128,
// 128, M, 256 x3, M, 512 x3, M, 512 x3, then 2x2 average pooling and a
// 512 -> num_classes dense head) on 32 x 32 x 3 inputs.
ModelGraph vgg16_cifar(std::size_t num_classes, std::uint64_t seed);

// Four 32-channel ReLU blocks on 32 x 32 x 16 inputs with gamma in
// [0.25, 0.75] and beta in [-1.5, 1.5]. Used for the empirical versus
// BN-statistics distance comparison.
ModelGraph distance_report_model(std::uint64_t seed);

// Random model whose block 0 has channels `first` and `second` with
// identical conv filters and BN parameters, so their post-BN activations
// coincide exactly on every input. Their gamma is set to gamma_min / 2,
// which makes them the unique closest pair under the BN-statistics distance.
ModelGraph duplicate_channel_model(const RandomModelSpec& spec,
                                   std::size_t first, std::size_t second,
                                   Rng& rng);

}  // namespace simprune::fixtures
