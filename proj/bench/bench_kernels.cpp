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

// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "simprune/fixtures.hpp"
#include "simprune/kernels.hpp"
#include "simprune/rng.hpp"

namespace {

using namespace simprune;

struct ConvCase {
  Tensor4 input;
  ConvKernel kernel;
  Tensor4 output;
};

ConvCase make_conv_case(std::size_t channels, std::size_t extent,
                        std::size_t batch) {
  Rng rng = make_stream(7);
  ConvCase c;
  c.input = fixtures::random_input(Shape4{channels, extent, extent, batch}, rng);
  c.kernel.in_channels = channels;
  c.kernel.out_channels = channels;
  c.kernel.kernel_size = 3;
  c.kernel.padding = 1;
  std::uniform_real_distribution<float> w(-0.1f, 0.1f);
  c.kernel.weights.resize(channels * channels * 9);
  for (float& v : c.kernel.weights) v = w(rng);
  c.output = Tensor4(Shape4{channels, extent, extent, batch});
  return c;
}

void BM_Conv2dSerial(benchmark::State& state) {
  auto c = make_conv_case(state.range(0), 16, 8);
  for (auto _ : state) {
    kernels::serial::conv2d(c.input, c.kernel, c.output);
    benchmark::DoNotOptimize(c.output.data().data());
  }
}

void BM_Conv2dOmp(benchmark::State& state) {
  auto c = make_conv_case(state.range(0), 16, 8);
  for (auto _ : state) {
    kernels::omp::conv2d(c.input, c.kernel, c.output);
    benchmark::DoNotOptimize(c.output.data().data());
  }
}

Tensor4 distance_input(std::size_t channels) {
  Rng rng = make_stream(11);
  return fixtures::random_input(Shape4{channels, 8, 8, 256}, rng);
}

void BM_ChannelDistancesSerial(benchmark::State& state) {
  const Tensor4 t = distance_input(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::serial::channel_distances(t));
  }
}

void BM_ChannelDistancesOmp(benchmark::State& state) {
  const Tensor4 t = distance_input(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::omp::channel_distances(t));
  }
}

}  // namespace

BENCHMARK(BM_Conv2dSerial)->Arg(16)->Arg(64);
BENCHMARK(BM_Conv2dOmp)->Arg(16)->Arg(64);
BENCHMARK(BM_ChannelDistancesSerial)->Arg(32)->Arg(128);
BENCHMARK(BM_ChannelDistancesOmp)->Arg(32)->Arg(128);

BENCHMARK_MAIN();
