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

#include <cstdint>
#include <initializer_list>
#include <random>

namespace simprune {

using Rng = std::mt19937_64;

// Independent generator for (seed, path...). Parallel workers derive their
// stream from the seed and their work index, so results do not depend on
// scheduling.
Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path = {});

}  // namespace simprune
