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

#include <vector>

#include "simprune/model.hpp"
#include "simprune/tensor.hpp"

namespace simprune {

// Bias-free 2-D convolution. Throws ShapeError when input.channels() does
// not match kernel.in_channels.
Tensor4 conv2d(const Tensor4& input, const ConvKernel& kernel);

// Batch normalization with statistics of this mini-batch: every channel is
// standardized over its H * W * B values, then scaled by gamma and shifted
// by beta. No running statistics are kept.
Tensor4 bn_forward(const Tensor4& input, const BnParams& bn);

double activate(ActivationKind kind, double x);
Tensor4 activation(const Tensor4& input, ActivationKind kind);

Tensor4 pool_forward(const Tensor4& input, const PoolSpec& pool);

struct BlockOutput {
  Tensor4 pre_bn;    // A: convolution output
  Tensor4 post_bn;   // N: batch-normalized
  Tensor4 post_act;  // h(N)
};

BlockOutput block_forward(const Tensor4& input, const LayerBlock& block);

// Runs every block (and its pooling stage). Element i of the result is the
// output of block i; pooling is applied to post_act before it is passed on.
std::vector<BlockOutput> model_forward(const ModelGraph& model,
                                       const Tensor4& input);

}  // namespace simprune
