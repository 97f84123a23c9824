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

#include "simprune/verify.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <string>

#include "simprune/error.hpp"
#include "simprune/fixtures.hpp"
#include "simprune/ops.hpp"
#include "simprune/parallel.hpp"
#include "simprune/planner.hpp"
#include "simprune/rng.hpp"

namespace simprune {

bool ConvergenceReport::error_non_increasing(
    std::size_t allowed_inversions) const {
  std::size_t inversions = 0;
  for (std::size_t k = 1; k < points.size(); ++k) {
    if (points[k].relative_error > points[k - 1].relative_error) ++inversions;
  }
  return inversions <= allowed_inversions;
}

ConvergenceReport verify_prop1(const ChannelStats& first,
                               const ChannelStats& second,
                               std::span<const std::size_t> sizes,
                               std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw ValidationError("verify_prop1: trials must be >= 1");
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    if (sizes[k] == 0 || (k > 0 && sizes[k] <= sizes[k - 1])) {
      throw ValidationError("verify_prop1: sizes must be positive and ascending");
    }
  }
  if (first.sigma2 < 0.0 || second.sigma2 < 0.0) {
    throw ValidationError("verify_prop1: variances must be >= 0");
  }
  ConvergenceReport report;
  report.seed = seed;
  report.trials = trials;
  report.first = first;
  report.second = second;
  const double limit = probabilistic_channel_distance(first, second);
  const double sd_first = std::sqrt(first.sigma2);
  const double sd_second = std::sqrt(second.sigma2);

  for (std::size_t k = 0; k < sizes.size(); ++k) {
    const std::size_t n = sizes[k];
    std::vector<double> empirical(trials);
    const std::ptrdiff_t count = static_cast<std::ptrdiff_t>(trials);
#pragma omp parallel num_threads(worker_count())
    {
      std::vector<float> a(n);
      std::vector<float> b(n);
#pragma omp for schedule(static)
      for (std::ptrdiff_t t = 0; t < count; ++t) {
        Rng rng = make_stream(seed, {k, static_cast<std::uint64_t>(t)});
        std::normal_distribution<double> z(0.0, 1.0);
        for (std::size_t m = 0; m < n; ++m) {
          a[m] = static_cast<float>(first.mu + sd_first * z(rng));
          b[m] = static_cast<float>(second.mu + sd_second * z(rng));
        }
        empirical[static_cast<std::size_t>(t)] =
            empirical_channel_distance(a, b);
      }
    }
    ConvergencePoint point;
    point.n = n;
    point.probabilistic = limit;
    for (double e : empirical) {
      point.empirical += e;
      const double err = std::fabs(e - limit);
      point.relative_error += limit > 0.0 ? err / limit : err;
    }
    point.empirical /= static_cast<double>(trials);
    point.relative_error /= static_cast<double>(trials);
    report.points.push_back(point);
  }
  return report;
}

namespace {

LayerPlan identity_layer(std::size_t channels) {
  std::vector<std::size_t> raw(channels);
  for (std::size_t c = 0; c < channels; ++c) raw[c] = c;
  LayerPlan plan;
  plan.channels = channels;
  plan.clusters = canonicalize(raw);
  plan.representatives = raw;
  return plan;
}

LayerPlan single_removal(std::size_t channels, std::size_t pruned,
                         std::size_t representative) {
  std::vector<std::size_t> raw(channels);
  for (std::size_t c = 0; c < channels; ++c) raw[c] = c;
  raw[pruned] = representative;
  LayerPlan plan;
  plan.channels = channels;
  plan.clusters = canonicalize(raw);
  for (const auto& members : plan.clusters.clusters()) {
    const bool merged = members.size() == 2;
    plan.representatives.push_back(merged ? representative : members.front());
  }
  plan.removed = {pruned};
  plan.compensation = {{pruned, representative}};
  return plan;
}

// Shift on the pre-BN activations of block layer + 1, given the tensor that
// enters block `layer`.
ShiftMeasurement shift_from_layer_input(const ModelGraph& model,
                                        std::size_t layer, std::size_t pruned,
                                        std::size_t representative,
                                        const Tensor4& layer_input) {
  ModelGraph pair;
  pair.input = {layer_input.channels(), layer_input.height(),
                layer_input.width()};
  pair.blocks = {model.blocks[layer], model.blocks[layer + 1]};

  PruningPlan plan;
  plan.compensate = true;
  plan.layers = {single_removal(pair.blocks[0].conv.out_channels, pruned,
                                representative),
                 identity_layer(pair.blocks[1].conv.out_channels)};
  const ModelGraph pruned_pair = apply_plan(pair, plan);

  const auto original = model_forward(pair, layer_input);
  const auto after = model_forward(pruned_pair, layer_input);
  const Tensor4& a = original[1].pre_bn;
  const Tensor4& ap = after[1].pre_bn;

  ShiftMeasurement out;
  for (std::size_t c = 0; c < a.channels(); ++c) {
    out.forward_difference.push_back(
        empirical_channel_distance(a.channel(c), ap.channel(c)));
  }

  // (h(N_i) - h(N_j)) convolved with the removed channel's kernels alone.
  const Tensor4& h = original[0].post_act;
  Tensor4 delta(Shape4{1, h.height(), h.width(), h.batch()});
  const auto hi = h.channel(pruned);
  const auto hj = h.channel(representative);
  auto d = delta.channel(0);
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = hi[k] - hj[k];
  const ConvKernel& next = pair.blocks[1].conv;
  ConvKernel removed = next;
  removed.in_channels = 1;
  removed.weights.clear();
  for (std::size_t c = 0; c < next.out_channels; ++c) {
    auto s = next.slice(c, pruned);
    removed.weights.insert(removed.weights.end(), s.begin(), s.end());
  }
  const Tensor4 shifted = conv2d(delta, removed);
  const Tensor4 zero(shifted.shape());
  for (std::size_t c = 0; c < shifted.channels(); ++c) {
    out.closed_form.push_back(
        empirical_channel_distance(shifted.channel(c), zero.channel(c)));
  }
  return out;
}

void check_shift_args(const ModelGraph& model, std::size_t layer,
                      std::size_t pruned, std::size_t representative) {
  if (layer + 1 >= model.blocks.size()) {
    throw ValidationError("measure_shift: block " + std::to_string(layer) +
                          " has no successor");
  }
  if (model.blocks[layer].pool) {
    throw ValidationError("measure_shift: block " + std::to_string(layer) +
                          " is followed by pooling");
  }
  const std::size_t c = model.blocks[layer].conv.out_channels;
  if (pruned >= c || representative >= c) {
    throw ValidationError("measure_shift: channel index out of range (" +
                          std::to_string(c) + " channels)");
  }
  if (pruned == representative) {
    throw ValidationError("measure_shift: pruned and representative coincide");
  }
}

}  // namespace

ShiftMeasurement measure_shift(const ModelGraph& model, std::size_t layer,
                               std::size_t pruned, std::size_t representative,
                               const Tensor4& input) {
  model.validate();
  check_shift_args(model, layer, pruned, representative);
  Tensor4 x = input;
  for (std::size_t b = 0; b < layer; ++b) {
    BlockOutput out = block_forward(x, model.blocks[b]);
    x = model.blocks[b].pool ? pool_forward(out.post_act, *model.blocks[b].pool)
                             : std::move(out.post_act);
  }
  return shift_from_layer_input(model, layer, pruned, representative, x);
}

void BoundReport::append(const BoundReport& other) {
  entries.insert(entries.end(), other.entries.begin(), other.entries.end());
  violations += other.violations;
  loose_entries += other.loose_entries;
  max_lambda = std::max(max_lambda, other.max_lambda);
  max_path_disagreement =
      std::max(max_path_disagreement, other.max_path_disagreement);
}

BoundReport verify_prop2(const ModelGraph& model, std::size_t trials,
                         std::uint64_t seed, const Prop2Options& options) {
  model.validate();
  if (trials == 0) throw ValidationError("verify_prop2: trials must be >= 1");
  for (std::size_t l = 0; l + 1 < model.blocks.size(); ++l) {
    if (model.blocks[l].act == ActivationKind::Identity &&
        !options.allow_identity) {
      throw ValidationError(
          "verify_prop2: block " + std::to_string(l) +
          " uses the identity activation; pass allow_identity to check it");
    }
  }
  BoundReport report;
  report.seed = seed;
  report.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = make_stream(seed, {t});
    const Tensor4 x = fixtures::random_input(model, options.batch, rng);
    const auto outputs = model_forward(model, x);
    for (std::size_t l = 0; l + 1 < model.blocks.size(); ++l) {
      const LayerBlock& block = model.blocks[l];
      if (block.pool || block.conv.out_channels < 2) continue;
      Tensor4 layer_input;
      if (l == 0) {
        layer_input = x;
      } else {
        const LayerBlock& prev = model.blocks[l - 1];
        layer_input = prev.pool ? pool_forward(outputs[l - 1].post_act, *prev.pool)
                                : outputs[l - 1].post_act;
      }
      const Tensor4& n = outputs[l].post_bn;
      const DistanceMatrix dist = empirical_distance_matrix(n);
      const std::size_t n_l = n.shape().channel_size();
      const std::size_t n_l1 = outputs[l + 1].pre_bn.shape().channel_size();
      const ConvKernel& next = model.blocks[l + 1].conv;
      for (std::size_t i = 0; i < block.conv.out_channels; ++i) {
        std::size_t j = i == 0 ? 1 : 0;
        for (std::size_t k = 0; k < block.conv.out_channels; ++k) {
          if (k != i && dist.at(i, k) < dist.at(i, j)) j = k;
        }
        const double min_distance = dist.at(i, j);
        const ShiftMeasurement shift =
            shift_from_layer_input(model, l, i, j, layer_input);
        for (std::size_t c = 0; c < next.out_channels; ++c) {
          BoundEntry e;
          e.trial = t;
          e.layer = l;
          e.pruned = i;
          e.representative = j;
          e.out_channel = c;
          e.shift = shift.forward_difference[c];
          e.closed_form = shift.closed_form[c];
          e.lambda = compute_lambda(next.slice(c, i), n_l, n_l1);
          e.min_distance = min_distance;
          e.bound = e.lambda * min_distance;
          e.satisfied = e.shift <= e.bound + kBoundSlack;
          if (!e.satisfied) ++report.violations;
          if (e.lambda > kLooseLambda) ++report.loose_entries;
          report.max_lambda = std::max(report.max_lambda, e.lambda);
          report.max_path_disagreement = std::max(
              report.max_path_disagreement, std::fabs(e.shift - e.closed_form));
          report.entries.push_back(e);
        }
      }
    }
  }
  return report;
}

BoundReport verify_prop2_random(std::size_t networks, ActivationKind kind,
                                std::uint64_t seed) {
  std::vector<BoundReport> parts(networks);
  std::exception_ptr failure;
  const std::ptrdiff_t count = static_cast<std::ptrdiff_t>(networks);
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
  for (std::ptrdiff_t sk = 0; sk < count; ++sk) {
    const auto k = static_cast<std::uint64_t>(sk);
    try {
      Rng rng = make_stream(seed, {static_cast<std::uint64_t>(kind), k});
      std::uniform_int_distribution<std::size_t> channels(1, 8);
      std::uniform_int_distribution<std::size_t> depth(2, 3);
      fixtures::RandomModelSpec spec;
      spec.input = InputGeometry{channels(rng), 8, 8};
      spec.channels.clear();
      const std::size_t blocks = depth(rng);
      for (std::size_t b = 0; b < blocks; ++b) {
        spec.channels.push_back(channels(rng));
      }
      spec.kernel_size = 3;
      spec.act = kind;
      const ModelGraph model = fixtures::random_model(spec, rng);
      Prop2Options options;
      options.batch = 4;
      options.allow_identity = true;
      BoundReport part = verify_prop2(model, 1, rng(), options);
      for (BoundEntry& e : part.entries) e.trial = k;
      parts[static_cast<std::size_t>(sk)] = std::move(part);
    } catch (...) {
#pragma omp critical(simprune_prop2_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  BoundReport report;
  report.seed = seed;
  report.trials = networks;
  for (const BoundReport& part : parts) report.append(part);
  return report;
}

ActivationCheck verify_activation_inequality(ActivationKind kind,
                                             std::size_t samples,
                                             std::uint64_t seed) {
  ActivationCheck check;
  check.kind = kind;
  check.samples = samples;
  Rng rng = make_stream(seed, {static_cast<std::uint64_t>(kind)});
  std::uniform_real_distribution<double> x(-100.0, 100.0);
  for (std::size_t s = 0; s < samples; ++s) {
    const double x1 = x(rng);
    const double x2 = x(rng);
    const double dh = activate(kind, x1) - activate(kind, x2);
    const double dx = x1 - x2;
    if (dh * dh > dx * dx) ++check.violations;
    if (dx != 0.0) check.max_ratio = std::max(check.max_ratio, dh * dh / (dx * dx));
  }
  return check;
}

double LayerDistanceReport::relative_max_difference() const {
  const double peak = probabilistic.max_off_diagonal();
  const double diff = difference.max_off_diagonal();
  if (probabilistic.size() < 2) return 0.0;
  return peak > 0.0 ? diff / peak : diff;
}

std::vector<LayerDistanceReport> distance_matrix_report(
    const ModelGraph& model, std::size_t trials, std::size_t batch,
    std::uint64_t seed) {
  model.validate();
  if (trials == 0) throw ValidationError("distance_matrix_report: trials must be >= 1");
  if (batch == 0) throw ValidationError("distance_matrix_report: batch must be >= 1");
  const std::size_t layers = model.blocks.size();
  std::vector<std::vector<double>> sums(layers);
  for (std::size_t l = 0; l < layers; ++l) {
    const std::size_t c = model.blocks[l].conv.out_channels;
    sums[l].assign(c * c, 0.0);
  }
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = make_stream(seed, {t});
    const auto outputs =
        model_forward(model, fixtures::random_input(model, batch, rng));
    for (std::size_t l = 0; l < layers; ++l) {
      const DistanceMatrix d = empirical_distance_matrix(outputs[l].post_bn);
      for (std::size_t k = 0; k < sums[l].size(); ++k) sums[l][k] += d.values()[k];
    }
  }
  std::vector<LayerDistanceReport> reports;
  for (std::size_t l = 0; l < layers; ++l) {
    const std::size_t c = model.blocks[l].conv.out_channels;
    for (double& v : sums[l]) v /= static_cast<double>(trials);
    LayerDistanceReport r;
    r.empirical = DistanceMatrix(c, sums[l]);
    const auto stats = bn_channel_stats(model.blocks[l].bn);
    r.probabilistic = build_distance_matrix(stats);
    r.difference = DistanceMatrix(c);
    for (std::size_t i = 0; i < c; ++i) {
      for (std::size_t j = i + 1; j < c; ++j) {
        r.difference.set(i, j,
                         std::fabs(r.empirical.at(i, j) - r.probabilistic.at(i, j)));
      }
    }
    reports.push_back(std::move(r));
  }
  return reports;
}

}  // namespace simprune
