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
#include <iosfwd>
#include <span>
#include <vector>

#include "simprune/model.hpp"
#include "simprune/tensor.hpp"

namespace simprune {

// First two moments of a channel's activations. For a batch-normalized
// channel mu = beta and sigma2 = gamma^2.
struct ChannelStats {
  double mu = 0.0;
  double sigma2 = 0.0;

  static ChannelStats from_bn(double gamma, double beta) {
    return {beta, gamma * gamma};
  }
};

// Symmetric C x C matrix of channel distances with a zero diagonal.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t size);
  // Takes ownership of a row-major size x size buffer. Throws
  // ValidationError if it is not symmetric, finite, non-negative and
  // zero on the diagonal.
  DistanceMatrix(std::size_t size, std::vector<double> values);

  std::size_t size() const { return size_; }
  double at(std::size_t i, std::size_t j) const { return values_[i * size_ + j]; }
  // Writes both (i, j) and (j, i).
  void set(std::size_t i, std::size_t j, double value);
  std::span<const double> values() const { return values_; }

  // Set by normalize() when the off-diagonal range was (near) zero.
  bool degenerate() const { return degenerate_; }

  double max_off_diagonal() const;
  double min_off_diagonal() const;

  // Full square, row-major, 9 significant digits, one row per line.
  void write_csv(std::ostream& os) const;

  friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

 private:
  friend DistanceMatrix normalize(const DistanceMatrix& matrix);

  std::size_t size_ = 0;
  std::vector<double> values_;
  bool degenerate_ = false;
};

// Mean squared difference ||a - b||^2 / n of two channel slices.
double empirical_channel_distance(std::span<const float> a,
                                  std::span<const float> b);

// Closed-form limit of the empirical distance for independent channels:
// (mu_i - mu_j)^2 + sigma2_i + sigma2_j.
double probabilistic_channel_distance(const ChannelStats& si,
                                      const ChannelStats& sj);

std::vector<ChannelStats> bn_channel_stats(const BnParams& bn);

// Pairwise probabilistic distances. The diagonal is 0 by convention even
// though the closed form evaluated at i == j gives 2 * sigma2.
DistanceMatrix build_distance_matrix(std::span<const ChannelStats> layer_stats);

// Pairwise empirical distances over the channels of a post-BN tensor.
DistanceMatrix empirical_distance_matrix(const Tensor4& activations);

// Affine map of the off-diagonal entries onto [0, 1] using the off-diagonal
// min and max. When max - min < 1e-12 the input is returned unchanged with
// degenerate() set. Identity for C <= 1.
DistanceMatrix normalize(const DistanceMatrix& matrix);

inline constexpr double kDegenerateRange = 1e-12;

}  // namespace simprune
