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

#include "simprune/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "simprune/error.hpp"
#include "simprune/kernels.hpp"
#include "simprune/parallel.hpp"

namespace simprune {

Tensor4 conv2d(const Tensor4& input, const ConvKernel& kernel) {
  if (input.channels() != kernel.in_channels) {
    throw ShapeError("conv2d: input channels " +
                     std::to_string(input.channels()) +
                     " != kernel in_channels " +
                     std::to_string(kernel.in_channels));
  }
  if (kernel.weights.size() !=
      kernel.out_channels * kernel.in_channels * kernel.slice_size()) {
    throw ShapeError("conv2d: kernel weights length does not match out*in*K*K");
  }
  if (kernel.stride == 0) throw ShapeError("conv2d: stride must be >= 1");
  const Shape4 out_shape{kernel.out_channels,
                         kernel.output_extent(input.height()),
                         kernel.output_extent(input.width()), input.batch()};
  Tensor4 output(out_shape);
  kernels::omp::conv2d(input, kernel, output);
  return output;
}

Tensor4 bn_forward(const Tensor4& input, const BnParams& bn) {
  const std::size_t channels = input.channels();
  if (bn.gamma.size() != channels || bn.beta.size() != channels) {
    throw ShapeError("bn_forward: gamma/beta length does not match channels " +
                     std::to_string(channels));
  }
  Tensor4 output(input.shape());
  const std::size_t n = input.shape().channel_size();
  if (n == 0) return output;
  bool finite = true;
  const std::ptrdiff_t count = static_cast<std::ptrdiff_t>(channels);
#pragma omp parallel for schedule(static) num_threads(worker_count()) \
    reduction(&& : finite)
  for (std::ptrdiff_t sc = 0; sc < count; ++sc) {
    const auto c = static_cast<std::size_t>(sc);
    const auto x = input.channel(c);
    double mean = 0.0;
    for (float v : x) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (float v : x) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n);
    const double scale =
        static_cast<double>(bn.gamma[c]) / std::sqrt(var + bn.eps);
    const double shift = bn.beta[c];
    auto y = output.channel(c);
    for (std::size_t k = 0; k < n; ++k) {
      const double v = scale * (x[k] - mean) + shift;
      y[k] = static_cast<float>(v);
      finite = finite && std::isfinite(y[k]);
    }
  }
  if (!finite) {
    throw InternalError("bn_forward produced a non-finite value");
  }
  return output;
}

double activate(ActivationKind kind, double x) {
  switch (kind) {
    case ActivationKind::ReLU:
      return x > 0.0 ? x : 0.0;
    case ActivationKind::Sigmoid:
      return 1.0 / (1.0 + std::exp(-x));
    case ActivationKind::Identity:
      return x;
  }
  return x;
}

Tensor4 activation(const Tensor4& input, ActivationKind kind) {
  if (kind == ActivationKind::Identity) return input;
  Tensor4 output(input.shape());
  const auto in = input.data();
  auto out = output.data();
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(in.size());
#pragma omp parallel for schedule(static) num_threads(worker_count())
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    out[k] = static_cast<float>(activate(kind, in[k]));
  }
  return output;
}

Tensor4 pool_forward(const Tensor4& input, const PoolSpec& pool) {
  if (pool.size == 0 || pool.stride == 0) {
    throw ShapeError("pool_forward: size and stride must be >= 1");
  }
  const Shape4 out_shape{input.channels(), pool.output_extent(input.height()),
                         pool.output_extent(input.width()), input.batch()};
  Tensor4 output(out_shape);
  const double window = static_cast<double>(pool.size * pool.size);
  for (std::size_t c = 0; c < out_shape.channels; ++c) {
    for (std::size_t y = 0; y < out_shape.height; ++y) {
      for (std::size_t x = 0; x < out_shape.width; ++x) {
        for (std::size_t b = 0; b < out_shape.batch; ++b) {
          double acc = pool.kind == PoolKind::Max
                           ? -std::numeric_limits<double>::infinity()
                           : 0.0;
          for (std::size_t ky = 0; ky < pool.size; ++ky) {
            for (std::size_t kx = 0; kx < pool.size; ++kx) {
              const double v = input.at(c, y * pool.stride + ky,
                                        x * pool.stride + kx, b);
              acc = pool.kind == PoolKind::Max ? std::max(acc, v) : acc + v;
            }
          }
          if (pool.kind == PoolKind::Average) acc /= window;
          output.at(c, y, x, b) = static_cast<float>(acc);
        }
      }
    }
  }
  return output;
}

BlockOutput block_forward(const Tensor4& input, const LayerBlock& block) {
  BlockOutput out;
  out.pre_bn = conv2d(input, block.conv);
  out.post_bn = bn_forward(out.pre_bn, block.bn);
  out.post_act = activation(out.post_bn, block.act);
  return out;
}

std::vector<BlockOutput> model_forward(const ModelGraph& model,
                                       const Tensor4& input) {
  std::vector<BlockOutput> outputs;
  outputs.reserve(model.blocks.size());
  const Tensor4* current = &input;
  Tensor4 pooled;
  for (const LayerBlock& block : model.blocks) {
    outputs.push_back(block_forward(*current, block));
    if (block.pool) {
      pooled = pool_forward(outputs.back().post_act, *block.pool);
      current = &pooled;
    } else {
      current = &outputs.back().post_act;
    }
  }
  return outputs;
}

}  // namespace simprune
