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

#include "simprune/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "simprune/error.hpp"

namespace simprune {

namespace {

void check_inputs(const DistanceMatrix& matrix, double threshold,
                  const ClusterOptions& options) {
  if (!std::isfinite(threshold) || threshold < 0.0) {
    throw ValidationError("clustering threshold must be finite and >= 0");
  }
  if (options.min_clusters == 0) {
    throw ValidationError("min_clusters must be >= 1");
  }
  const std::size_t c = matrix.size();
  for (std::size_t i = 0; i < c; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      const double v = matrix.at(i, j);
      if (!std::isfinite(v)) {
        throw ValidationError("distance matrix entry (" + std::to_string(i) +
                              "," + std::to_string(j) + ") is not finite");
      }
      if (options.require_normalized && i != j && (v < 0.0 || v > 1.0)) {
        throw ValidationError(
            "distance matrix is not normalized: entry (" + std::to_string(i) +
            "," + std::to_string(j) + ") = " + std::to_string(v));
      }
    }
  }
}

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

}  // namespace

std::string_view to_string(Linkage linkage) {
  switch (linkage) {
    case Linkage::Complete:
      return "complete";
    case Linkage::Single:
      return "single";
    case Linkage::Average:
      return "average";
  }
  return "unknown";
}

Linkage parse_linkage(std::string_view name) {
  if (name == "complete") return Linkage::Complete;
  if (name == "single") return Linkage::Single;
  if (name == "average") return Linkage::Average;
  throw ValidationError("unknown linkage \"" + std::string(name) + "\"");
}

std::vector<std::vector<std::size_t>> ClusterAssignment::clusters() const {
  std::vector<std::vector<std::size_t>> out(num_clusters);
  for (std::size_t c = 0; c < labels.size(); ++c) out[labels[c]].push_back(c);
  return out;
}

ClusterAssignment canonicalize(const std::vector<std::size_t>& labels) {
  ClusterAssignment out;
  out.labels.resize(labels.size());
  std::vector<std::pair<std::size_t, std::size_t>> seen;  // raw -> canonical
  for (std::size_t c = 0; c < labels.size(); ++c) {
    auto it = std::find_if(seen.begin(), seen.end(),
                           [&](const auto& p) { return p.first == labels[c]; });
    if (it == seen.end()) {
      seen.emplace_back(labels[c], seen.size());
      out.labels[c] = seen.back().second;
    } else {
      out.labels[c] = it->second;
    }
  }
  out.num_clusters = seen.size();
  return out;
}

ClusterAssignment hierarchical_cluster(const DistanceMatrix& matrix,
                                       double threshold, Linkage linkage,
                                       const ClusterOptions& options) {
  check_inputs(matrix, threshold, options);
  const std::size_t c = matrix.size();

  // Working copy of inter-cluster distances. Slot a holds the cluster whose
  // smallest member is a; only active slots are meaningful.
  std::vector<double> d(matrix.values().begin(), matrix.values().end());
  std::vector<std::size_t> parent(c);
  std::vector<std::size_t> sizes(c, 1);
  std::vector<bool> active(c, true);
  for (std::size_t i = 0; i < c; ++i) parent[i] = i;

  // nn[a]: nearest active slot b > a (ties to the smallest b).
  std::vector<std::size_t> nn(c, kNone);
  std::vector<double> nnd(c, kInf);
  auto refresh = [&](std::size_t a) {
    nn[a] = kNone;
    nnd[a] = kInf;
    for (std::size_t b = a + 1; b < c; ++b) {
      if (active[b] && d[a * c + b] < nnd[a]) {
        nnd[a] = d[a * c + b];
        nn[a] = b;
      }
    }
  };
  for (std::size_t a = 0; a < c; ++a) refresh(a);

  std::size_t remaining = c;
  while (remaining > options.min_clusters) {
    std::size_t a = kNone;
    double best = kInf;
    for (std::size_t k = 0; k < c; ++k) {
      if (active[k] && nn[k] != kNone && nnd[k] < best) {
        best = nnd[k];
        a = k;
      }
    }
    if (a == kNone || !(best < threshold)) break;
    const std::size_t b = nn[a];

    const double na = static_cast<double>(sizes[a]);
    const double nb = static_cast<double>(sizes[b]);
    for (std::size_t k = 0; k < c; ++k) {
      if (!active[k] || k == a || k == b) continue;
      const double da = d[a * c + k];
      const double db = d[b * c + k];
      double merged = 0.0;
      switch (linkage) {
        case Linkage::Complete:
          merged = std::max(da, db);
          break;
        case Linkage::Single:
          merged = std::min(da, db);
          break;
        case Linkage::Average:
          merged = (na * da + nb * db) / (na + nb);
          break;
      }
      d[a * c + k] = d[k * c + a] = merged;
    }
    active[b] = false;
    parent[b] = a;
    sizes[a] += sizes[b];
    --remaining;

    refresh(a);
    for (std::size_t k = 0; k < c; ++k) {
      if (!active[k] || k == a) continue;
      if (nn[k] == a || nn[k] == b) {
        refresh(k);
      } else if (k < a) {
        const double v = d[k * c + a];
        if (v < nnd[k] || (v == nnd[k] && a < nn[k])) {
          nnd[k] = v;
          nn[k] = a;
        }
      }
    }
  }

  std::vector<std::size_t> raw(c);
  for (std::size_t i = 0; i < c; ++i) {
    std::size_t r = i;
    while (parent[r] != r) r = parent[r];
    raw[i] = r;
  }
  return canonicalize(raw);
}

ClusterAssignment brute_force_cluster(const DistanceMatrix& matrix,
                                      double threshold, Linkage linkage,
                                      const ClusterOptions& options) {
  const std::size_t c = matrix.size();
  if (c > kBruteForceMaxChannels) {
    throw ValidationError("brute_force_cluster supports at most " +
                          std::to_string(kBruteForceMaxChannels) +
                          " channels, got " + std::to_string(c));
  }
  check_inputs(matrix, threshold, options);

  std::vector<std::vector<std::size_t>> clusters;
  for (std::size_t i = 0; i < c; ++i) clusters.push_back({i});

  auto linkage_distance = [&](const std::vector<std::size_t>& x,
                              const std::vector<std::size_t>& y) {
    double acc = linkage == Linkage::Complete ? -kInf
                 : linkage == Linkage::Single ? kInf
                                              : 0.0;
    for (std::size_t p : x) {
      for (std::size_t q : y) {
        const double v = matrix.at(p, q);
        if (linkage == Linkage::Complete) acc = std::max(acc, v);
        else if (linkage == Linkage::Single) acc = std::min(acc, v);
        else acc += v;
      }
    }
    if (linkage == Linkage::Average) {
      acc /= static_cast<double>(x.size() * y.size());
    }
    return acc;
  };

  while (clusters.size() > options.min_clusters) {
    // clusters stay ordered by smallest member, so (x, y) with x < y is
    // lexicographic in cluster ids.
    std::size_t bx = 0;
    std::size_t by = 0;
    double best = kInf;
    for (std::size_t x = 0; x < clusters.size(); ++x) {
      for (std::size_t y = x + 1; y < clusters.size(); ++y) {
        const double v = linkage_distance(clusters[x], clusters[y]);
        if (v < best) {
          best = v;
          bx = x;
          by = y;
        }
      }
    }
    if (!(best < threshold)) break;
    clusters[bx].insert(clusters[bx].end(), clusters[by].begin(),
                        clusters[by].end());
    std::sort(clusters[bx].begin(), clusters[bx].end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(by));
  }

  std::vector<std::size_t> raw(c);
  for (std::size_t k = 0; k < clusters.size(); ++k) {
    for (std::size_t m : clusters[k]) raw[m] = k;
  }
  return canonicalize(raw);
}

}  // namespace simprune
