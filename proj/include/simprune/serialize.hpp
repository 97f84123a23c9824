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

#include <json.hpp>

#include "simprune/planner.hpp"
#include "simprune/verify.hpp"

namespace simprune {

inline constexpr const char* kPlanVersion = "1";

// {version, threshold, linkage, compensate, layers: [{clusters, representatives,
// removed, compensation: {"removed": representative}, degenerate}]}
nlohmann::json plan_to_json(const PruningPlan& plan);
PruningPlan plan_from_json(const nlohmann::json& doc);

nlohmann::json flops_to_json(const FlopsReport& report);
nlohmann::json convergence_to_json(const ConvergenceReport& report);
nlohmann::json bound_to_json(const BoundReport& report);
nlohmann::json activation_check_to_json(const ActivationCheck& check);

}  // namespace simprune
