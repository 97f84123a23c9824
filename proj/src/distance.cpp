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

#include "simprune/distance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

#include "simprune/error.hpp"
#include "simprune/kernels.hpp"

namespace simprune {

DistanceMatrix::DistanceMatrix(std::size_t size)
    : size_(size), values_(size * size, 0.0) {}

DistanceMatrix::DistanceMatrix(std::size_t size, std::vector<double> values)
    : size_(size), values_(std::move(values)) {
  if (values_.size() != size_ * size_) {
    throw ValidationError("distance matrix needs " +
                          std::to_string(size_ * size_) + " values, got " +
                          std::to_string(values_.size()));
  }
  for (std::size_t i = 0; i < size_; ++i) {
    if (at(i, i) != 0.0) {
      throw ValidationError("distance matrix diagonal must be 0");
    }
    for (std::size_t j = i + 1; j < size_; ++j) {
      const double v = at(i, j);
      if (!std::isfinite(v) || v < 0.0) {
        throw ValidationError("distance matrix entry (" + std::to_string(i) +
                              "," + std::to_string(j) +
                              ") is negative or non-finite");
      }
      if (v != at(j, i)) {
        throw ValidationError("distance matrix is not symmetric");
      }
    }
  }
}

void DistanceMatrix::set(std::size_t i, std::size_t j, double value) {
  values_[i * size_ + j] = value;
  values_[j * size_ + i] = value;
}

double DistanceMatrix::max_off_diagonal() const {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < size_; ++i)
    for (std::size_t j = i + 1; j < size_; ++j) m = std::max(m, at(i, j));
  return m;
}

double DistanceMatrix::min_off_diagonal() const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < size_; ++i)
    for (std::size_t j = i + 1; j < size_; ++j) m = std::min(m, at(i, j));
  return m;
}

void DistanceMatrix::write_csv(std::ostream& os) const {
  char buf[32];
  for (std::size_t i = 0; i < size_; ++i) {
    for (std::size_t j = 0; j < size_; ++j) {
      std::snprintf(buf, sizeof buf, "%.9g", at(i, j));
      if (j) os << ',';
      os << buf;
    }
    os << '\n';
  }
}

double empirical_channel_distance(std::span<const float> a,
                                  std::span<const float> b) {
  if (a.size() != b.size()) {
    throw ShapeError("channel slices differ in length: " +
                     std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()));
  }
  return kernels::mean_squared_difference(a, b);
}

double probabilistic_channel_distance(const ChannelStats& si,
                                      const ChannelStats& sj) {
  const double dmu = si.mu - sj.mu;
  return dmu * dmu + (si.sigma2 + sj.sigma2);
}

std::vector<ChannelStats> bn_channel_stats(const BnParams& bn) {
  std::vector<ChannelStats> stats;
  stats.reserve(bn.gamma.size());
  for (std::size_t c = 0; c < bn.gamma.size(); ++c) {
    stats.push_back(ChannelStats::from_bn(bn.gamma[c], bn.beta[c]));
  }
  return stats;
}

DistanceMatrix build_distance_matrix(std::span<const ChannelStats> layer_stats) {
  if (layer_stats.empty()) {
    throw ValidationError("build_distance_matrix needs at least one channel");
  }
  DistanceMatrix d(layer_stats.size());
  for (std::size_t i = 0; i < layer_stats.size(); ++i) {
    for (std::size_t j = i + 1; j < layer_stats.size(); ++j) {
      d.set(i, j, probabilistic_channel_distance(layer_stats[i], layer_stats[j]));
    }
  }
  return d;
}

DistanceMatrix empirical_distance_matrix(const Tensor4& activations) {
  if (activations.channels() == 0) {
    throw ValidationError("empirical_distance_matrix needs at least one channel");
  }
  return DistanceMatrix(activations.channels(),
                        kernels::omp::channel_distances(activations));
}

DistanceMatrix normalize(const DistanceMatrix& matrix) {
  DistanceMatrix out = matrix;
  const std::size_t c = matrix.size();
  if (c <= 1) return out;
  const double lo = matrix.min_off_diagonal();
  const double hi = matrix.max_off_diagonal();
  if (hi - lo < kDegenerateRange) {
    out.degenerate_ = true;
    return out;
  }
  const double inv = 1.0 / (hi - lo);
  for (std::size_t i = 0; i < c; ++i) {
    for (std::size_t j = i + 1; j < c; ++j) {
      // Clamp guards the endpoints against rounding in (v - lo) * inv.
      out.set(i, j, std::clamp((matrix.at(i, j) - lo) * inv, 0.0, 1.0));
    }
  }
  out.degenerate_ = false;
  return out;
}

}  // namespace simprune
