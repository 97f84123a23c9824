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
#include <span>
#include <vector>

#include "simprune/distance.hpp"
#include "simprune/model.hpp"
#include "simprune/tensor.hpp"

namespace simprune {

// ---------------------------------------------------------------------------
// Convergence of the empirical channel distance to its closed-form limit.

struct ConvergencePoint {
  std::size_t n = 0;
  double empirical = 0.0;       // mean over trials
  double probabilistic = 0.0;   // closed-form limit
  double relative_error = 0.0;  // mean over trials of |emp - prob| / prob
};

struct ConvergenceReport {
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  ChannelStats first;
  ChannelStats second;
  std::vector<ConvergencePoint> points;  // strictly increasing n

  // True when relative_error never grows along the series, tolerating at
  // most `allowed_inversions` increases.
  bool error_non_increasing(std::size_t allowed_inversions = 0) const;
};

// Draws two independent Gaussian channels of each size in `sizes` and
// compares their empirical distance to the probabilistic one. When the
// limit is 0 the absolute error is reported instead of the relative one.
ConvergenceReport verify_prop1(const ChannelStats& first,
                               const ChannelStats& second,
                               std::span<const std::size_t> sizes,
                               std::size_t trials, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Activation shift caused by pruning one channel.

struct ShiftMeasurement {
  // Distance between the next layer's pre-BN activations of the original and
  // the compensated pruned model, per output channel.
  std::vector<double> forward_difference;
  // ||(h(N_i) - h(N_j)) * W^(i, c)||^2 / n_{l+1}, per output channel.
  std::vector<double> closed_form;
};

// `input` feeds the model's first block. Pruning channel `pruned` of block
// `layer` and folding its kernels into `representative` is done through
// apply_plan. Requires a block after `layer` and no pooling between them.
ShiftMeasurement measure_shift(const ModelGraph& model, std::size_t layer,
                               std::size_t pruned, std::size_t representative,
                               const Tensor4& input);

struct BoundEntry {
  std::size_t trial = 0;
  std::size_t layer = 0;
  std::size_t pruned = 0;
  std::size_t representative = 0;  // argmin of the empirical distance
  std::size_t out_channel = 0;
  double shift = 0.0;        // forward difference
  double closed_form = 0.0;  // direct evaluation of the same shift
  double lambda = 0.0;
  double min_distance = 0.0;
  double bound = 0.0;
  bool satisfied = false;
};

inline constexpr double kBoundSlack = 1e-9;
inline constexpr double kLooseLambda = 10.0;

struct BoundReport {
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::vector<BoundEntry> entries;
  std::size_t violations = 0;
  std::size_t loose_entries = 0;  // lambda > kLooseLambda
  double max_lambda = 0.0;
  // Largest |forward_difference - closed_form| seen.
  double max_path_disagreement = 0.0;

  bool all_satisfied() const { return violations == 0; }
  void append(const BoundReport& other);
};

struct Prop2Options {
  std::size_t batch = 4;
  // Identity also has 0 <= h' <= 1 but is excluded unless asked for.
  bool allow_identity = false;
};

// For `trials` random inputs, every adjacent block pair without pooling in
// between, every channel i of the lower block and every output channel c of
// the upper block: checks shift <= lambda * min_j Dist(N_i, N_j), where the
// minimum runs over empirical post-BN distances with j != i and j is also
// the channel that absorbs i's kernels.
BoundReport verify_prop2(const ModelGraph& model, std::size_t trials,
                         std::uint64_t seed, const Prop2Options& options = {});

// Runs verify_prop2 once on each of `networks` random small models: 2-3
// blocks with 1-8 channels, K = 3, 8 x 8 inputs, batch 4. Entry.trial is
// the network index.
BoundReport verify_prop2_random(std::size_t networks, ActivationKind kind,
                                std::uint64_t seed);

// ---------------------------------------------------------------------------

struct ActivationCheck {
  ActivationKind kind = ActivationKind::ReLU;
  std::size_t samples = 0;
  std::size_t violations = 0;
  // Largest (h(x1) - h(x2))^2 / (x1 - x2)^2 observed.
  double max_ratio = 0.0;

  bool passed() const { return violations == 0; }
};

// Samples pairs uniformly from [-100, 100]^2 and counts pairs with
// (h(x1) - h(x2))^2 > (x1 - x2)^2.
ActivationCheck verify_activation_inequality(ActivationKind kind,
                                             std::size_t samples,
                                             std::uint64_t seed);

// ---------------------------------------------------------------------------

struct LayerDistanceReport {
  DistanceMatrix empirical;      // mean over trials of post-BN distances
  DistanceMatrix probabilistic;  // from BN statistics
  DistanceMatrix difference;     // element-wise absolute difference

  // max(difference) / max(probabilistic)
  double relative_max_difference() const;
};

std::vector<LayerDistanceReport> distance_matrix_report(
    const ModelGraph& model, std::size_t trials, std::size_t batch,
    std::uint64_t seed);

}  // namespace simprune
