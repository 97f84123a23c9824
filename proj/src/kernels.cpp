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

#include "simprune/kernels.hpp"

#include <algorithm>
#include <cstddef>

#include "simprune/parallel.hpp"

namespace simprune::kernels {

namespace {

// Computes every batch entry of output[o][y][x]. Shared by both flavours so
// the accumulation order is identical.
void conv_output_row(const Tensor4& input, const ConvKernel& kernel,
                     Tensor4& output, std::size_t o, std::size_t y,
                     std::vector<double>& acc) {
  const std::size_t batch = input.batch();
  const std::size_t in_h = input.height();
  const std::size_t in_w = input.width();
  const std::size_t k = kernel.kernel_size;
  const auto in = input.data();
  for (std::size_t x = 0; x < output.width(); ++x) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t i = 0; i < kernel.in_channels; ++i) {
      for (std::size_t ky = 0; ky < k; ++ky) {
        const std::ptrdiff_t iy =
            static_cast<std::ptrdiff_t>(y * kernel.stride + ky) -
            static_cast<std::ptrdiff_t>(kernel.padding);
        if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(in_h)) continue;
        for (std::size_t kx = 0; kx < k; ++kx) {
          const std::ptrdiff_t ix =
              static_cast<std::ptrdiff_t>(x * kernel.stride + kx) -
              static_cast<std::ptrdiff_t>(kernel.padding);
          if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(in_w)) continue;
          const double w = kernel.weights[kernel.weight_index(o, i, ky, kx)];
          if (w == 0.0) continue;
          const float* src =
              in.data() + input.index(i, static_cast<std::size_t>(iy),
                                      static_cast<std::size_t>(ix), 0);
          for (std::size_t b = 0; b < batch; ++b) acc[b] += w * src[b];
        }
      }
    }
    float* dst = output.data().data() + output.index(o, y, x, 0);
    for (std::size_t b = 0; b < batch; ++b) dst[b] = static_cast<float>(acc[b]);
  }
}

}  // namespace

double mean_squared_difference(std::span<const float> a,
                               std::span<const float> b) {
  if (a.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = static_cast<double>(a[k]) - static_cast<double>(b[k]);
    sum += d * d;
  }
  return sum / static_cast<double>(a.size());
}

namespace serial {

void conv2d(const Tensor4& input, const ConvKernel& kernel, Tensor4& output) {
  std::vector<double> acc(input.batch());
  for (std::size_t o = 0; o < kernel.out_channels; ++o) {
    for (std::size_t y = 0; y < output.height(); ++y) {
      conv_output_row(input, kernel, output, o, y, acc);
    }
  }
}

PairwiseMatrix channel_distances(const Tensor4& activations) {
  const std::size_t c = activations.channels();
  PairwiseMatrix d(c * c, 0.0);
  for (std::size_t i = 0; i < c; ++i) {
    for (std::size_t j = i + 1; j < c; ++j) {
      d[i * c + j] = d[j * c + i] = mean_squared_difference(
          activations.channel(i), activations.channel(j));
    }
  }
  return d;
}

}  // namespace serial

namespace omp {

void conv2d(const Tensor4& input, const ConvKernel& kernel, Tensor4& output) {
  const std::ptrdiff_t rows =
      static_cast<std::ptrdiff_t>(kernel.out_channels * output.height());
#pragma omp parallel num_threads(worker_count())
  {
    std::vector<double> acc(input.batch());
#pragma omp for schedule(static)
    for (std::ptrdiff_t r = 0; r < rows; ++r) {
      const auto row = static_cast<std::size_t>(r);
      conv_output_row(input, kernel, output, row / output.height(),
                      row % output.height(), acc);
    }
  }
}

PairwiseMatrix channel_distances(const Tensor4& activations) {
  const std::size_t c = activations.channels();
  PairwiseMatrix d(c * c, 0.0);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(c);
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
  for (std::ptrdiff_t si = 0; si < n; ++si) {
    const auto i = static_cast<std::size_t>(si);
    for (std::size_t j = i + 1; j < c; ++j) {
      d[i * c + j] = d[j * c + i] = mean_squared_difference(
          activations.channel(i), activations.channel(j));
    }
  }
  return d;
}

}  // namespace omp

}  // namespace simprune::kernels
