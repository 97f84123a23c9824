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

#include "simprune/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "simprune/error.hpp"

namespace simprune {

Tensor4::Tensor4(Shape4 shape, float fill)
    : shape_(shape), data_(shape.size(), fill) {}

Tensor4::Tensor4(Shape4 shape, std::vector<float> data)
    : shape_(shape), data_(std::move(data)) {
  if (data_.size() != shape_.size()) {
    throw ShapeError("tensor data length " + std::to_string(data_.size()) +
                     " does not match shape volume " +
                     std::to_string(shape_.size()));
  }
}

std::span<float> Tensor4::channel(std::size_t c) {
  return std::span<float>(data_).subspan(c * shape_.channel_size(),
                                         shape_.channel_size());
}

std::span<const float> Tensor4::channel(std::size_t c) const {
  return std::span<const float>(data_).subspan(c * shape_.channel_size(),
                                               shape_.channel_size());
}

bool Tensor4::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](float v) { return std::isfinite(v); });
}

}  // namespace simprune
