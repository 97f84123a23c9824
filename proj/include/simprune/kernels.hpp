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

#include <span>
#include <vector>

#include "simprune/model.hpp"
#include "simprune/tensor.hpp"

// Compute kernels in two flavours. `serial` is the single-threaded reference
// kept for testing and benchmarking; `omp` parallelizes the outer loops with
// OpenMP and produces bit-identical results, since each output element is
// accumulated in the same order by exactly one thread.
namespace simprune::kernels {

// Row-major C x C matrix of mean squared differences between channels.
using PairwiseMatrix = std::vector<double>;

namespace serial {
void conv2d(const Tensor4& input, const ConvKernel& kernel, Tensor4& output);
PairwiseMatrix channel_distances(const Tensor4& activations);
}  // namespace serial

namespace omp {
void conv2d(const Tensor4& input, const ConvKernel& kernel, Tensor4& output);
PairwiseMatrix channel_distances(const Tensor4& activations);
}  // namespace omp

// ||a - b||^2 / n accumulated in double.
double mean_squared_difference(std::span<const float> a,
                               std::span<const float> b);

}  // namespace simprune::kernels
