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

#include "simprune/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "simprune/distance.hpp"
#include "simprune/error.hpp"
#include "simprune/io.hpp"
#include "simprune/planner.hpp"
#include "simprune/serialize.hpp"
#include "simprune/verify.hpp"

namespace simprune {

namespace fs = std::filesystem;

namespace {

struct PruneArgs {
  std::string model;
  double threshold = 0.0;
  std::string linkage = "complete";
  std::size_t min_channels = 1;
  bool no_compensate = false;
  bool freeze_last = false;
  std::string out;
  std::string plan;
};

struct DistancesArgs {
  std::string model;
  bool empirical = false;
  std::size_t batch = 256;
  std::size_t trials = 20;
  std::uint64_t seed = 0;
  std::string out_dir;
};

struct FlopsArgs {
  std::string model;
  std::uint64_t batch = 1;
  std::string baseline;
  std::string out;
};

struct VerifyArgs {
  std::string check;
  std::uint64_t seed = 0;
  std::size_t trials = 0;  // 0 selects the per-check default
  std::string model;
  std::string out_dir;
  std::string activation = "both";
  std::size_t samples = 1000000;
  std::size_t batch = 4;
  double mu1 = 0.0, var1 = 1.0, mu2 = 1.0, var2 = 4.0;
};

struct ReportArgs {
  std::string model;
  std::uint64_t seed = 0;
  std::size_t trials = 20;
  std::size_t batch = 256;
  std::string out_dir;
};

std::string model_tag(const std::string& model_path) {
  return model_path.empty() ? "random" : fs::path(model_path).stem().string();
}

fs::path artifact(const std::string& dir, const std::string& model,
                  const std::string& check, std::uint64_t seed,
                  const char* ext) {
  return fs::path(dir) /
         (model + "_" + check + "_" + std::to_string(seed) + "." + ext);
}

std::string to_csv(const DistanceMatrix& m) {
  std::ostringstream ss;
  m.write_csv(ss);
  return ss.str();
}

int run_prune(const PruneArgs& args, std::ostream& out) {
  const ModelGraph model = load_model(args.model);
  PruneConfig config;
  config.threshold = args.threshold;
  config.linkage = parse_linkage(args.linkage);
  config.min_channels = args.min_channels;
  config.compensate = !args.no_compensate;
  config.freeze_last = args.freeze_last;
  const PruningPlan plan = build_pruning_plan(model, config);
  const ModelGraph pruned = apply_plan(model, plan);
  save_model(pruned, args.out);
  write_file_atomic(args.plan, plan_to_json(plan).dump(2) + "\n");

  const FlopsReport flops = flops_compare(model, pruned);
  out << "removed " << plan.removed_count() << " channels\n";
  for (std::size_t l = 0; l < plan.layers.size(); ++l) {
    const LayerPlan& layer = plan.layers[l];
    out << "  block" << l << ": " << layer.channels << " -> "
        << layer.retained() << (layer.degenerate ? " (degenerate)" : "")
        << "\n";
  }
  out << "flops " << flops.baseline_total << " -> " << flops.total
      << " (pruned ratio " << flops.pruned_ratio << ")\n";
  return kExitOk;
}

int run_distances(const DistancesArgs& args, std::ostream& out) {
  const ModelGraph model = load_model(args.model);
  const std::string tag = model_tag(args.model);
  if (args.empirical) {
    const auto reports =
        distance_matrix_report(model, args.trials, args.batch, args.seed);
    for (std::size_t l = 0; l < reports.size(); ++l) {
      const std::string prefix = "distances-l" + std::to_string(l);
      write_file_atomic(
          artifact(args.out_dir, tag, prefix + "-empirical", args.seed, "csv"),
          to_csv(reports[l].empirical));
    }
  }
  for (std::size_t l = 0; l < model.blocks.size(); ++l) {
    const auto stats = bn_channel_stats(model.blocks[l].bn);
    const DistanceMatrix d = build_distance_matrix(stats);
    const std::string prefix = "distances-l" + std::to_string(l);
    write_file_atomic(
        artifact(args.out_dir, tag, prefix + "-probabilistic", args.seed, "csv"),
        to_csv(d));
    write_file_atomic(
        artifact(args.out_dir, tag, prefix + "-normalized", args.seed, "csv"),
        to_csv(normalize(d)));
  }
  out << "wrote distance matrices for " << model.blocks.size() << " blocks to "
      << args.out_dir << "\n";
  return kExitOk;
}

int run_flops(const FlopsArgs& args, std::ostream& out) {
  const ModelGraph model = load_model(args.model);
  const FlopsReport report =
      args.baseline.empty()
          ? flops_count(model, args.batch)
          : flops_compare(load_model(args.baseline), model, args.batch);
  const std::string text = flops_to_json(report).dump(2) + "\n";
  if (!args.out.empty()) write_file_atomic(args.out, text);
  out << text;
  out << "total FLOPs: " << report.total << " ("
      << static_cast<double>(report.total) / 1e6 << "M)\n";
  return kExitOk;
}

void emit(const VerifyArgs& args, const std::string& check,
          const nlohmann::json& doc) {
  if (args.out_dir.empty()) return;
  write_file_atomic(
      artifact(args.out_dir, model_tag(args.model), check, args.seed, "json"),
      doc.dump(2) + "\n");
}

int run_verify(const VerifyArgs& args, std::ostream& out) {
  if (args.check == "prop1") {
    const std::vector<std::size_t> sizes{1000, 10000, 100000, 1000000};
    const ConvergenceReport report = verify_prop1(
        {args.mu1, args.var1}, {args.mu2, args.var2}, sizes,
        args.trials ? args.trials : 20, args.seed);
    emit(args, "prop1", convergence_to_json(report));
    for (const ConvergencePoint& p : report.points) {
      out << "n=" << p.n << " empirical=" << p.empirical
          << " probabilistic=" << p.probabilistic
          << " relative_error=" << p.relative_error << "\n";
    }
    // Allow one inversion for sampling noise.
    const bool ok = report.error_non_increasing(1);
    out << (ok ? "prop1: error decreases with n\n"
               : "prop1: error does not decrease with n\n");
    return ok ? kExitOk : kExitVerificationFailed;
  }
  if (args.check == "prop2") {
    BoundReport report;
    if (!args.model.empty()) {
      Prop2Options options;
      options.batch = args.batch;
      report = verify_prop2(load_model(args.model),
                            args.trials ? args.trials : 10, args.seed, options);
    } else {
      const std::size_t networks = args.trials ? args.trials : 100;
      report.seed = args.seed;
      report.trials = networks;
      if (args.activation == "relu" || args.activation == "both") {
        report.append(verify_prop2_random(networks, ActivationKind::ReLU, args.seed));
      }
      if (args.activation == "sigmoid" || args.activation == "both") {
        report.append(
            verify_prop2_random(networks, ActivationKind::Sigmoid, args.seed));
      }
    }
    emit(args, "prop2", bound_to_json(report));
    out << "prop2: " << report.entries.size() << " pairs, "
        << report.violations << " violations, max lambda "
        << report.max_lambda << ", " << report.loose_entries
        << " pairs in the loose-bound regime (lambda > " << kLooseLambda
        << ")\n";
    return report.all_satisfied() ? kExitOk : kExitVerificationFailed;
  }
  // activation
  nlohmann::json doc = nlohmann::json::array();
  bool ok = true;
  for (ActivationKind kind : {ActivationKind::ReLU, ActivationKind::Sigmoid}) {
    const ActivationCheck check =
        verify_activation_inequality(kind, args.samples, args.seed);
    doc.push_back(activation_check_to_json(check));
    out << to_string(kind) << ": " << check.violations << " violations in "
        << check.samples << " pairs\n";
    ok = ok && check.passed();
  }
  emit(args, "activation", doc);
  return ok ? kExitOk : kExitVerificationFailed;
}

int run_report(const ReportArgs& args, std::ostream& out) {
  const ModelGraph model = load_model(args.model);
  const std::string tag = model_tag(args.model);
  const auto reports =
      distance_matrix_report(model, args.trials, args.batch, args.seed);
  nlohmann::json summary = nlohmann::json::array();
  for (std::size_t l = 0; l < reports.size(); ++l) {
    const std::string prefix = "report-l" + std::to_string(l);
    write_file_atomic(
        artifact(args.out_dir, tag, prefix + "-empirical", args.seed, "csv"),
        to_csv(reports[l].empirical));
    write_file_atomic(
        artifact(args.out_dir, tag, prefix + "-probabilistic", args.seed, "csv"),
        to_csv(reports[l].probabilistic));
    write_file_atomic(
        artifact(args.out_dir, tag, prefix + "-absdiff", args.seed, "csv"),
        to_csv(reports[l].difference));
    summary.push_back(
        {{"layer", l},
         {"channels", reports[l].probabilistic.size()},
         {"probabilistic_max", reports[l].probabilistic.max_off_diagonal()},
         {"difference_max", reports[l].difference.max_off_diagonal()},
         {"relative_max_difference", reports[l].relative_max_difference()}});
    out << "block" << l << ": max |empirical - probabilistic| / max = "
        << reports[l].relative_max_difference() << "\n";
  }
  nlohmann::json doc = {{"seed", args.seed},
                        {"trials", args.trials},
                        {"batch", args.batch},
                        {"layers", std::move(summary)}};
  write_file_atomic(artifact(args.out_dir, tag, "report", args.seed, "json"),
                    doc.dump(2) + "\n");
  return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Channel pruning by BN-statistics similarity", "simprune"};
  app.require_subcommand(1);

  PruneArgs prune;
  auto* prune_cmd = app.add_subcommand("prune", "Cluster channels and prune a model");
  prune_cmd->add_option("--model", prune.model, "Input manifest")->required();
  prune_cmd->add_option("--threshold", prune.threshold, "Global distance threshold t")
      ->required()
      ->check(CLI::NonNegativeNumber);
  prune_cmd->add_option("--linkage", prune.linkage, "complete|single|average")
      ->check(CLI::IsMember({"complete", "single", "average"}));
  prune_cmd->add_option("--min-channels", prune.min_channels,
                        "Minimum channels kept per block")
      ->check(CLI::PositiveNumber);
  prune_cmd->add_flag("--no-compensate", prune.no_compensate,
                      "Do not fold removed kernels into representatives");
  prune_cmd->add_flag("--freeze-last", prune.freeze_last,
                      "Leave the block feeding the head unpruned");
  prune_cmd->add_option("--out", prune.out, "Output manifest")->required();
  prune_cmd->add_option("--plan", prune.plan, "Output plan JSON")->required();

  DistancesArgs distances;
  auto* dist_cmd = app.add_subcommand("distances", "Write per-block distance matrices");
  dist_cmd->add_option("--model", distances.model)->required();
  dist_cmd->add_flag("--empirical", distances.empirical,
                     "Also average activation-based matrices over random batches");
  dist_cmd->add_option("--batch", distances.batch)->check(CLI::PositiveNumber);
  dist_cmd->add_option("--trials", distances.trials)->check(CLI::PositiveNumber);
  dist_cmd->add_option("--seed", distances.seed);
  dist_cmd->add_option("--out-dir", distances.out_dir)->required();

  FlopsArgs flops;
  auto* flops_cmd = app.add_subcommand("flops", "Count inference FLOPs");
  flops_cmd->add_option("--model", flops.model)->required();
  flops_cmd->add_option("--batch", flops.batch)->check(CLI::PositiveNumber);
  flops_cmd->add_option("--baseline", flops.baseline,
                        "Unpruned manifest used for the pruned ratio");
  flops_cmd->add_option("--out", flops.out, "Also write the JSON report here");

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Run a numerical verification");
  verify_cmd->add_option("check", verify.check, "prop1|prop2|activation")
      ->required()
      ->check(CLI::IsMember({"prop1", "prop2", "activation"}));
  verify_cmd->add_option("--seed", verify.seed);
  verify_cmd->add_option("--trials", verify.trials,
                         "Trials (prop1), networks or input batches (prop2)");
  verify_cmd->add_option("--model", verify.model, "Manifest to check (prop2)");
  verify_cmd->add_option("--out-dir", verify.out_dir, "Directory for JSON reports");
  verify_cmd->add_option("--activation", verify.activation,
                         "Random-network activation for prop2")
      ->check(CLI::IsMember({"relu", "sigmoid", "both"}));
  verify_cmd->add_option("--samples", verify.samples, "Pairs for activation");
  verify_cmd->add_option("--batch", verify.batch, "Batch size for prop2 --model")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--mu1", verify.mu1);
  verify_cmd->add_option("--var1", verify.var1)->check(CLI::NonNegativeNumber);
  verify_cmd->add_option("--mu2", verify.mu2);
  verify_cmd->add_option("--var2", verify.var2)->check(CLI::NonNegativeNumber);

  ReportArgs report;
  auto* report_cmd = app.add_subcommand(
      "report", "Empirical vs probabilistic distance matrices and their difference");
  report_cmd->add_option("--model", report.model)->required();
  report_cmd->add_option("--seed", report.seed);
  report_cmd->add_option("--trials", report.trials)->check(CLI::PositiveNumber);
  report_cmd->add_option("--batch", report.batch)->check(CLI::PositiveNumber);
  report_cmd->add_option("--out-dir", report.out_dir)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitInvalid;
  }

  try {
    if (prune_cmd->parsed()) return run_prune(prune, out);
    if (dist_cmd->parsed()) return run_distances(distances, out);
    if (flops_cmd->parsed()) return run_flops(flops, out);
    if (verify_cmd->parsed()) return run_verify(verify, out);
    if (report_cmd->parsed()) return run_report(report, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  err << app.help();
  return kExitInvalid;
}

int cli_main(int argc, const char* const* argv) {
  return cli_main(argc, argv, std::cout, std::cerr);
}

}  // namespace simprune
