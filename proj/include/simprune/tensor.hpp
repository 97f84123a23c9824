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

#include <cstddef>
#include <span>
#include <vector>

namespace simprune {

struct Shape4 {
  std::size_t channels = 0;
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t batch = 0;

  std::size_t size() const { return channels * height * width * batch; }
  // Elements per channel, n = H * W * B.
  std::size_t channel_size() const { return height * width * batch; }

  friend bool operator==(const Shape4&, const Shape4&) = default;
};

// Dense activation container laid out (c, h, w, b) row-major, so the batch
// index is contiguous and each channel occupies one contiguous block.
class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(Shape4 shape, float fill = 0.0f);
  Tensor4(Shape4 shape, std::vector<float> data);

  const Shape4& shape() const { return shape_; }
  std::size_t channels() const { return shape_.channels; }
  std::size_t height() const { return shape_.height; }
  std::size_t width() const { return shape_.width; }
  std::size_t batch() const { return shape_.batch; }
  std::size_t size() const { return data_.size(); }

  std::size_t index(std::size_t c, std::size_t h, std::size_t w,
                    std::size_t b) const {
    return ((c * shape_.height + h) * shape_.width + w) * shape_.batch + b;
  }
  float& at(std::size_t c, std::size_t h, std::size_t w, std::size_t b) {
    return data_[index(c, h, w, b)];
  }
  float at(std::size_t c, std::size_t h, std::size_t w, std::size_t b) const {
    return data_[index(c, h, w, b)];
  }

  std::span<float> data() { return data_; }
  std::span<const float> data() const { return data_; }

  std::span<float> channel(std::size_t c);
  std::span<const float> channel(std::size_t c) const;

  bool all_finite() const;

  friend bool operator==(const Tensor4&, const Tensor4&) = default;

 private:
  Shape4 shape_;
  std::vector<float> data_;
};

}  // namespace simprune
