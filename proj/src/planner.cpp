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

#include "simprune/planner.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

#include "simprune/distance.hpp"
#include "simprune/error.hpp"
#include "simprune/parallel.hpp"

namespace simprune {

const char* const FlopsConventions::kDescription =
    "Per-sample counts multiplied by batch. convolution: 2*K*K*C_in*C_out*"
    "H_out*W_out (a multiply-add counts as two FLOPs, no bias); batch norm: "
    "2 per activation; relu: 1 per activation; sigmoid: 4 per activation; "
    "identity: 0; pooling: 1 per input element of each window "
    "(K*K*C*H_out*W_out); dense head: 2*in*out.";

std::size_t PruningPlan::removed_count() const {
  std::size_t n = 0;
  for (const LayerPlan& layer : layers) n += layer.removed.size();
  return n;
}

std::size_t select_representatives(std::span<const std::size_t> cluster,
                                   std::span<const float> gammas) {
  if (cluster.empty()) {
    throw ValidationError("select_representatives: empty cluster");
  }
  std::size_t best = cluster.front();
  for (std::size_t c : cluster) {
    if (c >= gammas.size()) {
      throw ValidationError("select_representatives: channel " +
                            std::to_string(c) + " has no gamma");
    }
    const float g = std::fabs(gammas[c]);
    const float b = std::fabs(gammas[best]);
    if (g > b || (g == b && c < best)) best = c;
  }
  return best;
}

LayerPlan make_layer_plan(const ClusterAssignment& clusters,
                          std::span<const float> gammas) {
  LayerPlan plan;
  plan.channels = clusters.labels.size();
  plan.clusters = clusters;
  for (const auto& members : clusters.clusters()) {
    const std::size_t rep = select_representatives(members, gammas);
    plan.representatives.push_back(rep);
    for (std::size_t m : members) {
      if (m != rep) plan.compensation.emplace(m, rep);
    }
  }
  for (const auto& [removed, rep] : plan.compensation) {
    plan.removed.push_back(removed);
  }
  return plan;
}

namespace {

LayerPlan unpruned_layer(std::size_t channels) {
  std::vector<std::size_t> labels(channels);
  for (std::size_t c = 0; c < channels; ++c) labels[c] = c;
  LayerPlan plan;
  plan.channels = channels;
  plan.clusters = canonicalize(labels);
  plan.representatives = labels;
  return plan;
}

LayerPlan plan_layer(const LayerBlock& block, const PruneConfig& config) {
  const std::vector<ChannelStats> stats = bn_channel_stats(block.bn);
  const DistanceMatrix normalized = normalize(build_distance_matrix(stats));
  if (normalized.degenerate()) {
    LayerPlan plan = unpruned_layer(stats.size());
    plan.degenerate = true;
    return plan;
  }
  ClusterOptions options;
  options.min_clusters = config.min_channels;
  const ClusterAssignment clusters = hierarchical_cluster(
      normalized, config.threshold, config.linkage, options);
  return make_layer_plan(clusters, block.bn.gamma);
}

}  // namespace

PruningPlan build_pruning_plan(const ModelGraph& model,
                               const PruneConfig& config) {
  model.validate();
  if (!std::isfinite(config.threshold) || config.threshold < 0.0) {
    throw ValidationError("threshold must be finite and >= 0");
  }
  if (config.min_channels == 0) {
    throw ValidationError("min_channels must be >= 1");
  }
  PruningPlan plan;
  plan.threshold = config.threshold;
  plan.linkage = config.linkage;
  plan.compensate = config.compensate;
  plan.layers.resize(model.blocks.size());

  const std::size_t last = model.blocks.size() - 1;
  const std::ptrdiff_t count = static_cast<std::ptrdiff_t>(model.blocks.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
  for (std::ptrdiff_t sl = 0; sl < count; ++sl) {
    const auto l = static_cast<std::size_t>(sl);
    try {
      if (config.freeze_last && l == last) {
        plan.layers[l] = unpruned_layer(model.blocks[l].conv.out_channels);
      } else {
        plan.layers[l] = plan_layer(model.blocks[l], config);
      }
    } catch (...) {
#pragma omp critical(simprune_plan_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return plan;
}

void check_plan(const ModelGraph& model, const PruningPlan& plan) {
  if (plan.layers.size() != model.blocks.size()) {
    throw ValidationError("plan has " + std::to_string(plan.layers.size()) +
                          " layers, model has " +
                          std::to_string(model.blocks.size()) + " blocks");
  }
  for (std::size_t l = 0; l < plan.layers.size(); ++l) {
    const LayerPlan& layer = plan.layers[l];
    const std::string name = "plan.layers[" + std::to_string(l) + "]";
    const std::size_t c = model.blocks[l].conv.out_channels;
    if (layer.channels != c || layer.clusters.labels.size() != c) {
      throw ValidationError(name + " covers " + std::to_string(layer.channels) +
                            " channels, block has " + std::to_string(c));
    }
    if (layer.representatives.size() != layer.clusters.num_clusters) {
      throw ValidationError(name + ": one representative per cluster expected");
    }
    std::vector<int> role(c, 0);  // 1 = representative, 2 = removed
    for (std::size_t m = 0; m < layer.representatives.size(); ++m) {
      const std::size_t r = layer.representatives[m];
      if (r >= c || layer.clusters.labels[r] != m || role[r] != 0) {
        throw ValidationError(name + ": representative " + std::to_string(r) +
                              " is not a member of cluster " +
                              std::to_string(m));
      }
      role[r] = 1;
    }
    if (!std::is_sorted(layer.removed.begin(), layer.removed.end())) {
      throw ValidationError(name + ".removed must be sorted");
    }
    for (std::size_t r : layer.removed) {
      if (r >= c || role[r] != 0) {
        throw ValidationError(name + ": removed channel " + std::to_string(r) +
                              " is out of range or also retained");
      }
      role[r] = 2;
      auto it = layer.compensation.find(r);
      if (it == layer.compensation.end() || it->second >= c ||
          role[it->second] != 1 ||
          layer.clusters.labels[it->second] != layer.clusters.labels[r]) {
        throw ValidationError(name + ": removed channel " + std::to_string(r) +
                              " lacks a representative in its cluster");
      }
    }
    if (layer.compensation.size() != layer.removed.size()) {
      throw ValidationError(name + ": compensation map does not match removed");
    }
    if (std::count(role.begin(), role.end(), 0) != 0) {
      throw ValidationError(name + ": some channels are neither kept nor removed");
    }
  }
}

namespace {

std::vector<std::size_t> kept_channels(const LayerPlan& layer) {
  std::vector<std::size_t> kept;
  std::size_t r = 0;
  for (std::size_t c = 0; c < layer.channels; ++c) {
    if (r < layer.removed.size() && layer.removed[r] == c) {
      ++r;
    } else {
      kept.push_back(c);
    }
  }
  return kept;
}

// Drops output channels of a block's conv and BN.
void prune_outputs(LayerBlock& block, const std::vector<std::size_t>& kept) {
  const ConvKernel& conv = block.conv;
  const std::size_t row = conv.in_channels * conv.slice_size();
  std::vector<float> weights;
  weights.reserve(kept.size() * row);
  BnParams bn;
  bn.eps = block.bn.eps;
  for (std::size_t c : kept) {
    auto begin = conv.weights.begin() + static_cast<std::ptrdiff_t>(c * row);
    weights.insert(weights.end(), begin, begin + static_cast<std::ptrdiff_t>(row));
    bn.gamma.push_back(block.bn.gamma[c]);
    bn.beta.push_back(block.bn.beta[c]);
  }
  block.conv.weights = std::move(weights);
  block.conv.out_channels = kept.size();
  block.bn = std::move(bn);
}

void prune_inputs(ConvKernel& conv, const LayerPlan& layer,
                  const std::vector<std::size_t>& kept, bool compensate) {
  const std::size_t k2 = conv.slice_size();
  if (compensate) {
    for (std::size_t o = 0; o < conv.out_channels; ++o) {
      for (const auto& [removed, rep] : layer.compensation) {
        auto src = conv.slice(o, removed);
        auto dst = conv.slice(o, rep);
        for (std::size_t k = 0; k < k2; ++k) dst[k] += src[k];
      }
    }
  }
  std::vector<float> weights;
  weights.reserve(conv.out_channels * kept.size() * k2);
  for (std::size_t o = 0; o < conv.out_channels; ++o) {
    for (std::size_t i : kept) {
      auto s = conv.slice(o, i);
      weights.insert(weights.end(), s.begin(), s.end());
    }
  }
  conv.weights = std::move(weights);
  conv.in_channels = kept.size();
}

void prune_head_inputs(DenseHead& head, const LayerPlan& layer,
                       const std::vector<std::size_t>& kept, bool compensate) {
  const std::size_t spatial = head.in_features / layer.channels;
  auto column = [&](std::size_t o, std::size_t c, std::size_t s) -> float& {
    return head.weights[o * head.in_features + c * spatial + s];
  };
  if (compensate) {
    for (std::size_t o = 0; o < head.out_features; ++o) {
      for (const auto& [removed, rep] : layer.compensation) {
        for (std::size_t s = 0; s < spatial; ++s) {
          column(o, rep, s) += column(o, removed, s);
        }
      }
    }
  }
  const std::size_t in_features = kept.size() * spatial;
  std::vector<float> weights;
  weights.reserve(head.out_features * in_features);
  for (std::size_t o = 0; o < head.out_features; ++o) {
    for (std::size_t c : kept) {
      for (std::size_t s = 0; s < spatial; ++s) weights.push_back(column(o, c, s));
    }
  }
  head.weights = std::move(weights);
  head.in_features = in_features;
}

}  // namespace

ModelGraph apply_plan(const ModelGraph& model, const PruningPlan& plan) {
  model.validate();
  check_plan(model, plan);
  ModelGraph out = model;
  for (std::size_t l = 0; l < out.blocks.size(); ++l) {
    const LayerPlan& layer = plan.layers[l];
    if (layer.removed.empty()) continue;
    const std::vector<std::size_t> kept = kept_channels(layer);
    prune_outputs(out.blocks[l], kept);
    if (l + 1 < out.blocks.size()) {
      prune_inputs(out.blocks[l + 1].conv, layer, kept, plan.compensate);
    } else if (out.head) {
      prune_head_inputs(*out.head, layer, kept, plan.compensate);
    }
  }
  out.validate();
  return out;
}

std::uint64_t activation_flops_per_element(ActivationKind kind) {
  switch (kind) {
    case ActivationKind::ReLU:
      return FlopsConventions::kReLU;
    case ActivationKind::Sigmoid:
      return FlopsConventions::kSigmoid;
    case ActivationKind::Identity:
      return FlopsConventions::kIdentity;
  }
  return 0;
}

FlopsReport flops_count(const ModelGraph& model, std::uint64_t batch) {
  model.validate();
  FlopsReport report;
  report.batch = batch;
  std::size_t h = model.input.height;
  std::size_t w = model.input.width;
  for (std::size_t l = 0; l < model.blocks.size(); ++l) {
    const LayerBlock& block = model.blocks[l];
    const ConvKernel& conv = block.conv;
    const std::uint64_t ho = conv.output_extent(h);
    const std::uint64_t wo = conv.output_extent(w);
    const std::uint64_t activations = conv.out_channels * ho * wo;
    LayerFlops f;
    f.name = "block" + std::to_string(l);
    f.conv = FlopsConventions::kMultiplyAdd * conv.slice_size() *
             conv.in_channels * activations;
    f.bn = FlopsConventions::kBatchNorm * activations;
    f.activation = activation_flops_per_element(block.act) * activations;
    h = ho;
    w = wo;
    if (block.pool) {
      const std::uint64_t ph = block.pool->output_extent(h);
      const std::uint64_t pw = block.pool->output_extent(w);
      f.pool = FlopsConventions::kPoolPerWindowInput * block.pool->size *
               block.pool->size * conv.out_channels * ph * pw;
      h = ph;
      w = pw;
    }
    f.conv *= batch;
    f.bn *= batch;
    f.activation *= batch;
    f.pool *= batch;
    f.total = f.conv + f.bn + f.activation + f.pool;
    report.total += f.total;
    report.layers.push_back(std::move(f));
  }
  if (model.head) {
    LayerFlops f;
    f.name = "head";
    f.dense = FlopsConventions::kMultiplyAdd * model.head->in_features *
              model.head->out_features * batch;
    f.total = f.dense;
    report.total += f.total;
    report.layers.push_back(std::move(f));
  }
  report.baseline_total = report.total;
  report.pruned_ratio = 0.0;
  return report;
}

FlopsReport flops_compare(const ModelGraph& baseline, const ModelGraph& pruned,
                          std::uint64_t batch) {
  FlopsReport report = flops_count(pruned, batch);
  report.baseline_total = flops_count(baseline, batch).total;
  report.pruned_ratio =
      report.baseline_total == 0
          ? 0.0
          : 1.0 - static_cast<double>(report.total) /
                      static_cast<double>(report.baseline_total);
  return report;
}

double compute_lambda(std::span<const float> kernel_slice, std::size_t n_l,
                      std::size_t n_l1) {
  if (n_l1 == 0) throw ValidationError("compute_lambda: n_l1 must be > 0");
  double norm2 = 0.0;
  for (float w : kernel_slice) norm2 += static_cast<double>(w) * w;
  return static_cast<double>(n_l) / static_cast<double>(n_l1) *
         static_cast<double>(kernel_slice.size()) * norm2;
}

}  // namespace simprune
