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

// Acceptance suite: one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "simprune/cli.hpp"
#include "simprune/clustering.hpp"
#include "simprune/fixtures.hpp"
#include "simprune/io.hpp"
#include "simprune/ops.hpp"
#include "simprune/planner.hpp"
#include "simprune/verify.hpp"

namespace fs = std::filesystem;
using namespace simprune;

namespace {

constexpr std::uint64_t kSeed = 20260419;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

Outcome convergence() {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<std::size_t> sizes{1000, 10000, 100000, 1000000};
  const ConvergenceReport r =
      verify_prop1(ChannelStats{0.0, 1.0}, ChannelStats{1.0, 4.0}, sizes, 20, kSeed);
  const double elapsed = seconds_since(start);
  const ConvergencePoint& last = r.points.back();
  std::string series;
  for (const auto& p : r.points) series += fmt(" %.2e", p.relative_error);
  const bool ok = last.relative_error <= 0.01 &&
                  std::fabs(last.empirical - 6.0) <= 0.06 &&
                  r.error_non_increasing(0) && elapsed < 30.0;
  return {ok, fmt("mean distance at n=1e6 %.5f vs 6.0, relative error series", last.empirical) +
                  series + fmt(", %.1f s", elapsed)};
}

Outcome shift_bound() {
  const auto start = std::chrono::steady_clock::now();
  BoundReport relu = verify_prop2_random(1000, ActivationKind::ReLU, kSeed);
  BoundReport sig = verify_prop2_random(1000, ActivationKind::Sigmoid, kSeed + 1);
  const double elapsed = seconds_since(start);
  const bool ok = relu.all_satisfied() && sig.all_satisfied() && !relu.entries.empty() &&
                  !sig.entries.empty() && elapsed < 120.0;
  return {ok, fmt("ReLU %zu/%zu, Sigmoid %zu/%zu pairs satisfied, max lambda %.2f, "
                  "%zu loose-regime pairs, %.1f s",
                  relu.entries.size() - relu.violations, relu.entries.size(),
                  sig.entries.size() - sig.violations, sig.entries.size(),
                  std::max(relu.max_lambda, sig.max_lambda),
                  relu.loose_entries + sig.loose_entries, elapsed)};
}

Outcome activation_inequality() {
  const ActivationCheck relu =
      verify_activation_inequality(ActivationKind::ReLU, 1000000, kSeed);
  const ActivationCheck sig =
      verify_activation_inequality(ActivationKind::Sigmoid, 1000000, kSeed);
  return {relu.passed() && sig.passed() && relu.samples == 1000000 && sig.samples == 1000000,
          fmt("ReLU %zu violations (max ratio %.4f), Sigmoid %zu violations (max ratio %.4f) "
              "in 1e6 pairs each",
              relu.violations, relu.max_ratio, sig.violations, sig.max_ratio)};
}

Outcome distance_fidelity() {
  const ModelGraph model = fixtures::distance_report_model(kSeed);
  const auto reports = distance_matrix_report(model, 20, 256, kSeed);
  bool ok = reports.size() == 4;
  std::string detail = "max |empirical - probabilistic| / max probabilistic per layer:";
  for (const auto& r : reports) {
    const double rel = r.relative_max_difference();
    ok = ok && rel <= 0.05;
    detail += fmt(" %.4f", rel);
  }
  return {ok, detail};
}

Outcome flops_anchor() {
  const FlopsReport r = flops_count(fixtures::vgg16_cifar(10, kSeed));
  const double rel = double(r.total) / 627.36e6 - 1.0;
  std::printf("  conventions: multiply-add %llu, batch norm %llu, ReLU %llu, sigmoid %llu, "
              "identity %llu, pooling %llu per window input\n  %s\n",
              (unsigned long long)FlopsConventions::kMultiplyAdd,
              (unsigned long long)FlopsConventions::kBatchNorm,
              (unsigned long long)FlopsConventions::kReLU,
              (unsigned long long)FlopsConventions::kSigmoid,
              (unsigned long long)FlopsConventions::kIdentity,
              (unsigned long long)FlopsConventions::kPoolPerWindowInput,
              FlopsConventions::kDescription);
  return {std::fabs(rel) <= 0.03,
          fmt("VGG-16 CIFAR %llu FLOPs per sample (%.2fM), %+.4f%% vs 627.36M",
              (unsigned long long)r.total, r.total / 1e6, 100.0 * rel)};
}

Outcome clustering_oracle() {
  Rng rng = make_stream(kSeed, {6});
  std::uniform_int_distribution<std::size_t> cs(1, 6);
  std::uniform_real_distribution<double> u(0.0, 1.0), ts(0.0, 1.1);
  std::size_t agree = 0, total = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t c = cs(rng);
    DistanceMatrix m(c);
    for (std::size_t i = 0; i < c; ++i)
      for (std::size_t j = i + 1; j < c; ++j) m.set(i, j, u(rng));
    const double t = ts(rng);
    for (Linkage l : {Linkage::Complete, Linkage::Single, Linkage::Average}) {
      ++total;
      if (hierarchical_cluster(m, t, l) == brute_force_cluster(m, t, l)) ++agree;
    }
  }
  return {agree == total, fmt("%zu/%zu (matrix, linkage) cases agree", agree, total)};
}

Outcome compensation_exactness() {
  Rng rng = make_stream(kSeed, {7});
  fixtures::RandomModelSpec spec;
  spec.input = {4, 8, 8};
  spec.channels = {8, 8};
  const ModelGraph model = fixtures::duplicate_channel_model(spec, 1, 5, rng);
  const DistanceMatrix d = normalize(build_distance_matrix(bn_channel_stats(model.blocks[0].bn)));
  double second = 1.0;
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = i + 1; j < 8; ++j)
      if (!(i == 1 && j == 5)) second = std::min(second, d.at(i, j));
  PruneConfig cfg;
  cfg.threshold = second / 2;
  cfg.freeze_last = true;
  const PruningPlan plan = build_pruning_plan(model, cfg);
  if (plan.removed_count() != 1 || plan.layers[0].removed.size() != 1) {
    return {false, fmt("plan removed %zu channels instead of one duplicate", plan.removed_count())};
  }
  const ModelGraph pruned = apply_plan(model, plan);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const Tensor4 x = fixtures::random_input(model, 4, rng);
    const Tensor4 a = model_forward(model, x)[1].pre_bn;
    const Tensor4 b = model_forward(pruned, x)[1].pre_bn;
    for (std::size_t e = 0; e < a.size(); ++e)
      worst = std::max(worst, double(std::fabs(a.data()[e] - b.data()[e])));
  }
  return {worst <= 1e-5, fmt("removed channel %zu, max |delta pre-BN| %.3e over 50 inputs",
                             plan.layers[0].removed[0], worst)};
}

Outcome pipeline_monotonicity() {
  Rng rng = make_stream(kSeed, {8});
  fixtures::RandomModelSpec spec;
  spec.input = {3, 16, 16};
  spec.channels = {16, 16, 16, 16};
  spec.head_outputs = 10;
  const ModelGraph model = fixtures::random_model(spec, rng);
  bool ok = true;
  bool identity = false;
  double prev = -1.0;
  std::string ratios;
  for (int step = 0; step <= 5; ++step) {
    PruneConfig cfg;
    cfg.threshold = step / 10.0;
    const ModelGraph pruned = apply_plan(model, build_pruning_plan(model, cfg));
    if (step == 0) identity = pruned == model;
    const double ratio = flops_compare(model, pruned).pruned_ratio;
    ok = ok && ratio >= prev;
    prev = ratio;
    ratios += fmt(" %.4f", ratio);
  }
  return {ok && identity, "pruned FLOPs ratio for t = 0.0..0.5:" + ratios +
                             ", t = 0 model unchanged: " + (identity ? "yes" : "no")};
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "simprune");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  return cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
}

Outcome cli_determinism() {
  const fs::path root = fs::temp_directory_path() / "simprune_acceptance_determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  Rng rng = make_stream(kSeed, {9});
  fixtures::RandomModelSpec spec;
  spec.channels = {8, 8, 8};
  spec.head_outputs = 4;
  save_model(fixtures::random_model(spec, rng), root / "net.json");
  const std::string model = (root / "net.json").string();
  const std::string seed = std::to_string(kSeed);
  int failures = 0;
  for (const char* run : {"a", "b"}) {
    const fs::path dir = root / run;
    fs::create_directories(dir);
    const std::string d = dir.string();
    failures += cli({"prune", "--model", model, "--threshold", "0.3", "--out",
                     (dir / "pruned.json").string(), "--plan", (dir / "plan.json").string()}) != 0;
    failures += cli({"distances", "--model", model, "--empirical", "--batch", "32", "--trials",
                     "3", "--seed", seed, "--out-dir", d}) != 0;
    failures += cli({"report", "--model", model, "--seed", seed, "--trials", "3", "--batch",
                     "32", "--out-dir", d}) != 0;
    failures += cli({"flops", "--model", model, "--out", (dir / "flops.json").string()}) != 0;
    failures += cli({"verify", "prop1", "--seed", seed, "--trials", "3", "--out-dir", d}) != 0;
    failures += cli({"verify", "prop2", "--seed", seed, "--trials", "20", "--out-dir", d}) != 0;
    failures += cli({"verify", "prop2", "--model", model, "--seed", seed, "--trials", "3",
                     "--out-dir", d}) != 0;
    failures += cli({"verify", "activation", "--seed", seed, "--samples", "100000",
                     "--out-dir", d}) != 0;
  }
  std::size_t files = 0, identical = 0;
  for (const auto& e : fs::directory_iterator(root / "a")) {
    ++files;
    const fs::path twin = root / "b" / e.path().filename();
    if (fs::exists(twin) && read_file(e.path()) == read_file(twin)) ++identical;
  }
  fs::remove_all(root);
  return {failures == 0 && files > 0 && identical == files,
          fmt("%zu/%zu files byte-identical across repeated runs, %d failed invocations",
              identical, files, failures)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"distance convergence to the closed-form limit", convergence},
      {"pruning shift bound on random networks", shift_bound},
      {"activation Lipschitz inequality", activation_inequality},
      {"empirical vs BN-statistics distance matrices", distance_fidelity},
      {"VGG-16 CIFAR FLOPs anchor", flops_anchor},
      {"clustering oracle equivalence", clustering_oracle},
      {"duplicate-channel compensation", compensation_exactness},
      {"threshold sweep monotonicity", pipeline_monotonicity},
      {"CLI determinism", cli_determinism},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("criterion %zu: %s  %s: %s\n", k + 1, o.pass ? "PASS" : "FAIL",
                criteria[k].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
