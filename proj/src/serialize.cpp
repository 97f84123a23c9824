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

#include "simprune/serialize.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "simprune/error.hpp"

namespace simprune {

using nlohmann::json;

json plan_to_json(const PruningPlan& plan) {
  json layers = json::array();
  for (const LayerPlan& layer : plan.layers) {
    json compensation = json::object();
    for (const auto& [removed, rep] : layer.compensation) {
      compensation[std::to_string(removed)] = rep;
    }
    layers.push_back({{"clusters", layer.clusters.clusters()},
                      {"representatives", layer.representatives},
                      {"removed", layer.removed},
                      {"compensation", std::move(compensation)},
                      {"degenerate", layer.degenerate}});
  }
  return {{"version", kPlanVersion},
          {"threshold", plan.threshold},
          {"linkage", std::string(to_string(plan.linkage))},
          {"compensate", plan.compensate},
          {"layers", std::move(layers)}};
}

namespace {

void check_layer_consistency(const LayerPlan& layer) {
  const auto clusters = layer.clusters.clusters();
  if (layer.representatives.size() != clusters.size()) {
    throw ValidationError("plan needs one representative per cluster");
  }
  std::vector<std::size_t> removed;
  std::map<std::size_t, std::size_t> compensation;
  for (std::size_t m = 0; m < clusters.size(); ++m) {
    const std::size_t rep = layer.representatives[m];
    if (std::find(clusters[m].begin(), clusters[m].end(), rep) ==
        clusters[m].end()) {
      throw ValidationError("plan representative " + std::to_string(rep) +
                            " is not in its cluster");
    }
    for (std::size_t c : clusters[m]) {
      if (c == rep) continue;
      removed.push_back(c);
      compensation.emplace(c, rep);
    }
  }
  std::sort(removed.begin(), removed.end());
  if (removed != layer.removed) {
    throw ValidationError("plan removed list does not match its clusters");
  }
  if (compensation != layer.compensation) {
    throw ValidationError("plan compensation map does not match its clusters");
  }
}

}  // namespace

PruningPlan plan_from_json(const json& doc) {
  try {
    if (doc.at("version").get<std::string>() != kPlanVersion) {
      throw ValidationError("unsupported plan version");
    }
    PruningPlan plan;
    plan.threshold = doc.at("threshold").get<double>();
    plan.linkage = parse_linkage(doc.at("linkage").get<std::string>());
    plan.compensate = doc.value("compensate", true);
    for (const json& l : doc.at("layers")) {
      LayerPlan layer;
      const auto clusters =
          l.at("clusters").get<std::vector<std::vector<std::size_t>>>();
      std::size_t channels = 0;
      for (const auto& members : clusters) channels += members.size();
      std::vector<std::size_t> raw(channels, channels);
      for (std::size_t m = 0; m < clusters.size(); ++m) {
        for (std::size_t c : clusters[m]) {
          if (c >= channels || raw[c] != channels) {
            throw ValidationError("plan clusters are not a partition");
          }
          raw[c] = m;
        }
      }
      layer.channels = channels;
      layer.clusters = canonicalize(raw);
      if (layer.clusters.clusters() != clusters) {
        throw ValidationError("plan clusters are not in canonical order");
      }
      layer.representatives =
          l.at("representatives").get<std::vector<std::size_t>>();
      layer.removed = l.at("removed").get<std::vector<std::size_t>>();
      for (const auto& [key, value] : l.at("compensation").items()) {
        layer.compensation.emplace(std::stoul(key), value.get<std::size_t>());
      }
      layer.degenerate = l.value("degenerate", false);
      check_layer_consistency(layer);
      plan.layers.push_back(std::move(layer));
    }
    return plan;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed plan: ") + e.what());
  } catch (const std::logic_error& e) {
    // std::stoul on a bad compensation key
    throw ValidationError(std::string("malformed plan: ") + e.what());
  }
}

json flops_to_json(const FlopsReport& report) {
  json layers = json::array();
  for (const LayerFlops& f : report.layers) {
    layers.push_back({{"name", f.name},
                      {"conv", f.conv},
                      {"bn", f.bn},
                      {"activation", f.activation},
                      {"pool", f.pool},
                      {"dense", f.dense},
                      {"total", f.total}});
  }
  return {{"batch", report.batch},
          {"layers", std::move(layers)},
          {"total", report.total},
          {"baseline_total", report.baseline_total},
          {"pruned_ratio", report.pruned_ratio},
          {"conventions",
           {{"multiply_add", FlopsConventions::kMultiplyAdd},
            {"batch_norm_per_activation", FlopsConventions::kBatchNorm},
            {"relu_per_activation", FlopsConventions::kReLU},
            {"sigmoid_per_activation", FlopsConventions::kSigmoid},
            {"identity_per_activation", FlopsConventions::kIdentity},
            {"pool_per_window_input", FlopsConventions::kPoolPerWindowInput},
            {"description", FlopsConventions::kDescription}}}};
}

json convergence_to_json(const ConvergenceReport& report) {
  json points = json::array();
  for (const ConvergencePoint& p : report.points) {
    points.push_back({{"n", p.n},
                      {"empirical", p.empirical},
                      {"probabilistic", p.probabilistic},
                      {"relative_error", p.relative_error}});
  }
  return {{"seed", report.seed},
          {"trials", report.trials},
          {"first", {{"mu", report.first.mu}, {"sigma2", report.first.sigma2}}},
          {"second", {{"mu", report.second.mu}, {"sigma2", report.second.sigma2}}},
          {"points", std::move(points)},
          {"error_non_increasing", report.error_non_increasing()}};
}

json bound_to_json(const BoundReport& report) {
  json entries = json::array();
  for (const BoundEntry& e : report.entries) {
    entries.push_back({{"trial", e.trial},
                       {"layer", e.layer},
                       {"pruned", e.pruned},
                       {"representative", e.representative},
                       {"out_channel", e.out_channel},
                       {"shift", e.shift},
                       {"closed_form", e.closed_form},
                       {"lambda", e.lambda},
                       {"min_distance", e.min_distance},
                       {"bound", e.bound},
                       {"satisfied", e.satisfied}});
  }
  return {{"seed", report.seed},
          {"trials", report.trials},
          {"pairs", report.entries.size()},
          {"violations", report.violations},
          {"all_satisfied", report.all_satisfied()},
          {"slack", kBoundSlack},
          {"loose_bound_entries", report.loose_entries},
          {"loose_lambda_threshold", kLooseLambda},
          {"max_lambda", report.max_lambda},
          {"max_path_disagreement", report.max_path_disagreement},
          {"entries", std::move(entries)}};
}

json activation_check_to_json(const ActivationCheck& check) {
  return {{"activation", std::string(to_string(check.kind))},
          {"samples", check.samples},
          {"violations", check.violations},
          {"max_ratio", check.max_ratio},
          {"passed", check.passed()}};
}

}  // namespace simprune
