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

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "simprune/clustering.hpp"
#include "simprune/error.hpp"
#include "test_util.hpp"

namespace simprune {
namespace {

constexpr Linkage kLinkages[] = {Linkage::Complete, Linkage::Single,
                                 Linkage::Average};

TEST(Cluster, ThreeChannelExamples) {
  const DistanceMatrix m = testing::matrix_from_upper(3, {0.1, 0.9, 0.8});
  const ClusterAssignment half = hierarchical_cluster(m, 0.5);
  EXPECT_EQ(half.labels, (std::vector<std::size_t>{0, 0, 1}));
  EXPECT_EQ(half.num_clusters, 2u);

  const ClusterAssignment none = hierarchical_cluster(m, 0.0);
  EXPECT_EQ(none.labels, (std::vector<std::size_t>{0, 1, 2}));

  const ClusterAssignment all = hierarchical_cluster(m, 1.0);
  EXPECT_EQ(all.labels, (std::vector<std::size_t>{0, 0, 0}));
  EXPECT_EQ(all, brute_force_cluster(m, 1.0));
  // 0.9 is not strictly below 0.9.
  EXPECT_EQ(hierarchical_cluster(m, 0.9).num_clusters, 2u);
}

TEST(Cluster, SingleChannelAndAllEqual) {
  EXPECT_EQ(hierarchical_cluster(DistanceMatrix(1), 0.7).num_clusters, 1u);
  const DistanceMatrix ones = testing::matrix_from_upper(4, {1, 1, 1, 1, 1, 1});
  EXPECT_EQ(hierarchical_cluster(ones, 0.5).num_clusters, 4u);
  EXPECT_EQ(brute_force_cluster(ones, 0.5).num_clusters, 4u);
}

TEST(Cluster, TiesBreakOnSmallestIds) {
  // Every pair is at 0.2; the first merge must be {0,1}, then {0,1} absorbs
  // 2 before 3 joins, leaving one cluster under Complete linkage.
  const DistanceMatrix m = testing::matrix_from_upper(4, {0.2, 0.2, 0.2, 0.2, 0.2, 0.2});
  ClusterOptions opts;
  opts.min_clusters = 3;
  EXPECT_EQ(hierarchical_cluster(m, 0.5, Linkage::Complete, opts).labels,
            (std::vector<std::size_t>{0, 0, 1, 2}));
  opts.min_clusters = 2;
  EXPECT_EQ(hierarchical_cluster(m, 0.5, Linkage::Complete, opts).labels,
            (std::vector<std::size_t>{0, 0, 0, 1}));
}

TEST(Cluster, RejectsBadInput) {
  const DistanceMatrix m = testing::matrix_from_upper(3, {0.1, 0.9, 0.8});
  EXPECT_THROW(hierarchical_cluster(m, -0.1), ValidationError);
  EXPECT_THROW(hierarchical_cluster(m, NAN), ValidationError);
  const DistanceMatrix big = testing::matrix_from_upper(3, {0.1, 3.0, 0.8});
  EXPECT_THROW(hierarchical_cluster(big, 0.5), ValidationError);
  ClusterOptions lax;
  lax.require_normalized = false;
  EXPECT_NO_THROW(hierarchical_cluster(big, 0.5, Linkage::Complete, lax));
  Rng rng = make_stream(40);
  EXPECT_THROW(brute_force_cluster(testing::random_unit_matrix(9, rng), 0.5),
               ValidationError);
}

TEST(Cluster, LinkageNamesRoundTrip) {
  for (Linkage l : kLinkages) EXPECT_EQ(parse_linkage(to_string(l)), l);
  EXPECT_THROW(parse_linkage("ward"), ValidationError);
}

TEST(Cluster, MatchesBruteForceOracle) {
  Rng rng = make_stream(41);
  std::uniform_int_distribution<std::size_t> cs(1, 6);
  std::uniform_real_distribution<double> ts(0.0, 1.1);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t c = cs(rng);
    const DistanceMatrix m = testing::random_unit_matrix(c, rng);
    const double t = ts(rng);
    for (Linkage l : kLinkages)
      ASSERT_EQ(hierarchical_cluster(m, t, l), brute_force_cluster(m, t, l))
          << "trial " << trial << " linkage " << to_string(l);
  }
}

TEST(Cluster, MatchesBruteForceOracleWithTiesAndFloors) {
  // Coarse grid values produce many exactly equal linkage distances.
  Rng rng = make_stream(42);
  std::uniform_int_distribution<int> grid(0, 4);
  std::uniform_int_distribution<std::size_t> cs(2, 8), floor(1, 4);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t c = cs(rng);
    DistanceMatrix m(c);
    for (std::size_t i = 0; i < c; ++i)
      for (std::size_t j = i + 1; j < c; ++j) m.set(i, j, grid(rng) / 4.0);
    ClusterOptions opts;
    opts.min_clusters = floor(rng);
    for (Linkage l : kLinkages)
      ASSERT_EQ(hierarchical_cluster(m, 0.6, l, opts),
                brute_force_cluster(m, 0.6, l, opts))
          << "trial " << trial << " linkage " << to_string(l);
  }
}

TEST(Cluster, AssignmentIsCanonicalPartition) {
  Rng rng = make_stream(43);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t c = 1 + trial % 20;
    const ClusterAssignment a =
        hierarchical_cluster(testing::random_unit_matrix(c, rng), 0.4);
    ASSERT_EQ(a.labels.size(), c);
    EXPECT_GE(a.num_clusters, 1u);
    EXPECT_LE(a.num_clusters, c);
    std::size_t next = 0;
    for (std::size_t lab : a.labels) {
      ASSERT_LE(lab, next);
      if (lab == next) ++next;
    }
    EXPECT_EQ(next, a.num_clusters);
  }
}

TEST(Cluster, CompleteLinkageDiameterBelowThreshold) {
  Rng rng = make_stream(44);
  std::uniform_real_distribution<double> ts(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const DistanceMatrix m = testing::random_unit_matrix(12, rng);
    const double t = ts(rng);
    for (const auto& members : hierarchical_cluster(m, t).clusters())
      for (std::size_t a : members)
        for (std::size_t b : members)
          if (a != b) {
            EXPECT_LT(m.at(a, b), t);
          }
  }
}

TEST(Cluster, ClusterCountNonIncreasingInThreshold) {
  Rng rng = make_stream(45);
  for (int trial = 0; trial < 200; ++trial) {
    const DistanceMatrix m = testing::random_unit_matrix(10, rng);
    for (Linkage l : kLinkages) {
      std::size_t prev = 11;
      for (int step = 0; step <= 22; ++step) {
        const std::size_t count = hierarchical_cluster(m, step * 0.05, l).num_clusters;
        EXPECT_LE(count, prev);
        prev = count;
      }
    }
  }
}

TEST(Cluster, PermutationEquivariance) {
  Rng rng = make_stream(46);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t c = 2 + trial % 10;
    const DistanceMatrix m = testing::random_unit_matrix(c, rng);
    std::vector<std::size_t> perm(c);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    DistanceMatrix pm(c);
    for (std::size_t i = 0; i < c; ++i)
      for (std::size_t j = i + 1; j < c; ++j) pm.set(perm[i], perm[j], m.at(i, j));
    for (Linkage l : kLinkages) {
      const ClusterAssignment a = hierarchical_cluster(m, 0.5, l);
      const ClusterAssignment b = hierarchical_cluster(pm, 0.5, l);
      std::vector<std::size_t> mapped(c);
      for (std::size_t i = 0; i < c; ++i) mapped[i] = b.labels[perm[i]];
      EXPECT_EQ(canonicalize(mapped), a);
    }
  }
}

}  // namespace
}  // namespace simprune
