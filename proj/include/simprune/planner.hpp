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

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "simprune/clustering.hpp"
#include "simprune/model.hpp"

namespace simprune {

struct PruneConfig {
  // Global clustering threshold on normalized distances.
  double threshold = 0.0;
  Linkage linkage = Linkage::Complete;
  // Floor on the number of channels a layer keeps.
  std::size_t min_channels = 1;
  // Fold removed channels' next-layer kernels into their representative.
  bool compensate = true;
  // Leave the last block (the one feeding the head) untouched.
  bool freeze_last = false;
};

struct LayerPlan {
  std::size_t channels = 0;
  ClusterAssignment clusters;
  // representatives[m] is the retained member of cluster m.
  std::vector<std::size_t> representatives;
  std::vector<std::size_t> removed;
  // removed channel -> representative of its cluster
  std::map<std::size_t, std::size_t> compensation;
  // Distance range collapsed; the layer was left unpruned.
  bool degenerate = false;

  std::size_t retained() const { return channels - removed.size(); }

  friend bool operator==(const LayerPlan&, const LayerPlan&) = default;
};

struct PruningPlan {
  double threshold = 0.0;
  Linkage linkage = Linkage::Complete;
  bool compensate = true;
  std::vector<LayerPlan> layers;

  std::size_t removed_count() const;

  friend bool operator==(const PruningPlan&, const PruningPlan&) = default;
};

// Member with the largest |gamma|; ties go to the smallest index.
std::size_t select_representatives(std::span<const std::size_t> cluster,
                                   std::span<const float> gammas);

// Turns an assignment into a layer plan (representatives, removals and the
// compensation map).
LayerPlan make_layer_plan(const ClusterAssignment& clusters,
                          std::span<const float> gammas);

// Per block: BN-statistics distance matrix, normalization, clustering with
// the global threshold, representative selection.
PruningPlan build_pruning_plan(const ModelGraph& model,
                               const PruneConfig& config);

// Checks that `plan` is structurally valid for `model`; throws
// ValidationError otherwise.
void check_plan(const ModelGraph& model, const PruningPlan& plan);

// Returns a pruned copy of `model`. Removed output channels are dropped from
// each block's conv and BN; in the consuming layer (next conv, or the head
// for the last block) the removed channel's input slice is first added onto
// its representative's slice when the plan compensates, then dropped.
ModelGraph apply_plan(const ModelGraph& model, const PruningPlan& plan);

// Floating point operation counting conventions.
struct FlopsConventions {
  static constexpr std::uint64_t kMultiplyAdd = 2;
  static constexpr std::uint64_t kBatchNorm = 2;
  static constexpr std::uint64_t kReLU = 1;
  static constexpr std::uint64_t kSigmoid = 4;
  static constexpr std::uint64_t kIdentity = 0;
  static constexpr std::uint64_t kPoolPerWindowInput = 1;
  static const char* const kDescription;
};

struct LayerFlops {
  std::string name;
  std::uint64_t conv = 0;
  std::uint64_t bn = 0;
  std::uint64_t activation = 0;
  std::uint64_t pool = 0;
  std::uint64_t dense = 0;
  std::uint64_t total = 0;
};

struct FlopsReport {
  std::uint64_t batch = 1;
  std::vector<LayerFlops> layers;  // blocks, then "head" if present
  std::uint64_t total = 0;
  std::uint64_t baseline_total = 0;
  double pruned_ratio = 0.0;
};

std::uint64_t activation_flops_per_element(ActivationKind kind);

// FLOPs of one inference over `batch` samples. baseline_total == total.
FlopsReport flops_count(const ModelGraph& model, std::uint64_t batch = 1);

// FLOPs of `pruned` with `baseline` as reference for pruned_ratio.
FlopsReport flops_compare(const ModelGraph& baseline, const ModelGraph& pruned,
                          std::uint64_t batch = 1);

// lambda = (n_l / n_l1) * K^2 * ||W||^2 where the slice holds K^2 weights.
double compute_lambda(std::span<const float> kernel_slice, std::size_t n_l,
                      std::size_t n_l1);

}  // namespace simprune
