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

// Writes built-in model fixtures as manifests for the simprune CLI.

#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "simprune/error.hpp"
#include "simprune/fixtures.hpp"
#include "simprune/io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Write a fixture model manifest", "simprune-fixture"};
  std::string kind;
  std::string out;
  std::uint64_t seed = 0;
  std::size_t classes = 10;
  app.add_option("kind", kind, "vgg16-cifar|random|duplicate|distance-report")
      ->required()
      ->check(CLI::IsMember({"vgg16-cifar", "random", "duplicate", "distance-report"}));
  app.add_option("--out", out, "Output manifest path")->required();
  app.add_option("--seed", seed);
  app.add_option("--classes", classes, "Head outputs for vgg16-cifar");
  CLI11_PARSE(app, argc, argv);

  try {
    simprune::ModelGraph model;
    simprune::Rng rng = simprune::make_stream(seed);
    simprune::fixtures::RandomModelSpec spec;
    spec.input = {4, 8, 8};
    spec.channels = {8, 8, 8};
    if (kind == "vgg16-cifar") {
      model = simprune::fixtures::vgg16_cifar(classes, seed);
    } else if (kind == "distance-report") {
      model = simprune::fixtures::distance_report_model(seed);
    } else if (kind == "random") {
      model = simprune::fixtures::random_model(spec, rng);
    } else {
      spec.channels = {8, 8};
      model = simprune::fixtures::duplicate_channel_model(spec, 1, 5, rng);
    }
    simprune::save_model(model, out);
  } catch (const simprune::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
