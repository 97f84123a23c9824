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
#include <string_view>
#include <vector>

#include "simprune/distance.hpp"

namespace simprune {

// Inter-cluster distance rule. Complete = max pairwise, Single = min
// pairwise, Average = mean pairwise.
enum class Linkage { Complete, Single, Average };

std::string_view to_string(Linkage linkage);
Linkage parse_linkage(std::string_view name);

// Flat clustering of C channels into M clusters. Labels are canonical:
// clusters are numbered in order of their smallest member.
struct ClusterAssignment {
  std::vector<std::size_t> labels;
  std::size_t num_clusters = 0;

  // Members of every cluster, each sorted ascending, indexed by label.
  std::vector<std::vector<std::size_t>> clusters() const;

  friend bool operator==(const ClusterAssignment&,
                         const ClusterAssignment&) = default;
};

// Relabels so that cluster ids appear in order of first occurrence.
ClusterAssignment canonicalize(const std::vector<std::size_t>& labels);

struct ClusterOptions {
  // Merging stops once this many clusters remain.
  std::size_t min_clusters = 1;
  // Reject matrices whose off-diagonal entries leave [0, 1].
  bool require_normalized = true;
};

// Agglomerative clustering: start from singletons and repeatedly merge the
// pair of clusters with the smallest linkage distance while that distance is
// strictly below `threshold`. Equal distances are broken by the smaller
// first cluster id, then the smaller second id, where a cluster's id is its
// smallest member. Uses Lance-Williams updates on a working matrix.
ClusterAssignment hierarchical_cluster(const DistanceMatrix& matrix,
                                       double threshold,
                                       Linkage linkage = Linkage::Complete,
                                       const ClusterOptions& options = {});

inline constexpr std::size_t kBruteForceMaxChannels = 8;

// Test oracle with the same semantics. Every step rescans all cluster pairs
// and recomputes linkage from the original pairwise distances. Throws
// ValidationError for matrices larger than kBruteForceMaxChannels.
ClusterAssignment brute_force_cluster(const DistanceMatrix& matrix,
                                      double threshold,
                                      Linkage linkage = Linkage::Complete,
                                      const ClusterOptions& options = {});

}  // namespace simprune
