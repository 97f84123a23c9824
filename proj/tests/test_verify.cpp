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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "simprune/error.hpp"
#include "simprune/fixtures.hpp"
#include "simprune/ops.hpp"
#include "simprune/planner.hpp"
#include "simprune/serialize.hpp"
#include "simprune/verify.hpp"
#include "test_util.hpp"

namespace simprune {
namespace {

const std::vector<std::size_t> kSizes{1000, 10000, 100000, 1000000};

fixtures::RandomModelSpec small_spec(ActivationKind act) {
  fixtures::RandomModelSpec spec;
  spec.input = {3, 8, 8};
  spec.channels = {6, 5};
  spec.act = act;
  return spec;
}

bool close(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * std::max(1.0, std::max(std::fabs(a), std::fabs(b)));
}

TEST(Convergence, ExampleWithinOnePercent) {
  const std::vector<std::size_t> n{1000000};
  const ConvergenceReport r =
      verify_prop1(ChannelStats{0, 1}, ChannelStats{1, 4}, n, 3, 7);
  ASSERT_EQ(r.points.size(), 1u);
  EXPECT_DOUBLE_EQ(r.points[0].probabilistic, 6.0);
  EXPECT_LE(r.points[0].relative_error, 0.01);
}

TEST(Convergence, DegenerateStatsAreExactlyZero) {
  const ConvergenceReport r =
      verify_prop1(ChannelStats{0, 0}, ChannelStats{0, 0}, kSizes, 2, 7);
  for (const auto& p : r.points) {
    EXPECT_EQ(p.empirical, 0.0);
    EXPECT_EQ(p.probabilistic, 0.0);
    EXPECT_EQ(p.relative_error, 0.0);
  }
}

TEST(Convergence, ErrorDecaysWithSampleSize) {
  const ConvergenceReport r =
      verify_prop1(ChannelStats{0, 1}, ChannelStats{1, 4}, kSizes, 20, 11);
  EXPECT_TRUE(r.error_non_increasing(1));
  EXPECT_LT(r.points.back().relative_error, r.points.front().relative_error);
}

TEST(Convergence, ReportIsDeterministic) {
  const std::vector<std::size_t> n{1000, 5000};
  const auto a = convergence_to_json(
      verify_prop1(ChannelStats{0.5, 2}, ChannelStats{-1, 0.25}, n, 8, 3));
  const auto b = convergence_to_json(
      verify_prop1(ChannelStats{0.5, 2}, ChannelStats{-1, 0.25}, n, 8, 3));
  EXPECT_EQ(a.dump(), b.dump());
}

TEST(Convergence, RejectsUnorderedSizes) {
  const std::vector<std::size_t> n{1000, 100};
  EXPECT_THROW(verify_prop1(ChannelStats{}, ChannelStats{}, n, 1, 0), ValidationError);
}

TEST(MeasureShift, IdenticalActivationsGiveZeroShift) {
  Rng rng = make_stream(70);
  const ModelGraph model =
      fixtures::duplicate_channel_model(small_spec(ActivationKind::ReLU), 1, 4, rng);
  const ShiftMeasurement m =
      measure_shift(model, 0, 4, 1, fixtures::random_input(model, 4, rng));
  for (double v : m.forward_difference) EXPECT_LE(v, 1e-10);
  for (double v : m.closed_form) EXPECT_EQ(v, 0.0);
}

TEST(MeasureShift, ZeroKernelSliceGivesZeroShift) {
  Rng rng = make_stream(71);
  ModelGraph model = fixtures::random_model(small_spec(ActivationKind::Sigmoid), rng);
  ConvKernel& next = model.blocks[1].conv;
  for (std::size_t o = 0; o < next.out_channels; ++o)
    for (float& w : next.slice(o, 2)) w = 0.0f;
  const ShiftMeasurement m =
      measure_shift(model, 0, 2, 3, fixtures::random_input(model, 4, rng));
  for (double v : m.forward_difference) EXPECT_EQ(v, 0.0);
  for (double v : m.closed_form) EXPECT_EQ(v, 0.0);
}

TEST(MeasureShift, ForwardDifferenceMatchesClosedForm) {
  Rng rng = make_stream(72);
  std::uniform_int_distribution<std::size_t> ch(0, 5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto act = trial % 2 ? ActivationKind::ReLU : ActivationKind::Sigmoid;
    const ModelGraph model = fixtures::random_model(small_spec(act), rng);
    const std::size_t i = ch(rng);
    std::size_t j = ch(rng);
    if (j == i) j = (i + 1) % 6;
    const ShiftMeasurement m =
        measure_shift(model, 0, i, j, fixtures::random_input(model, 4, rng));
    ASSERT_EQ(m.forward_difference.size(), 5u);
    for (std::size_t c = 0; c < 5; ++c)
      EXPECT_TRUE(close(m.forward_difference[c], m.closed_form[c], 1e-5))
          << m.forward_difference[c] << " vs " << m.closed_form[c];
  }
}

TEST(MeasureShift, ClosedFormMatchesDirectConvolution) {
  Rng rng = make_stream(73);
  const ModelGraph model = fixtures::random_model(small_spec(ActivationKind::ReLU), rng);
  const Tensor4 x = fixtures::random_input(model, 3, rng);
  const std::size_t i = 0, j = 3;
  const ShiftMeasurement m = measure_shift(model, 0, i, j, x);

  const Tensor4 h = model_forward(model, x)[0].post_act;
  Tensor4 delta(Shape4{1, h.height(), h.width(), h.batch()});
  for (std::size_t k = 0; k < delta.size(); ++k)
    delta.data()[k] = h.channel(i)[k] - h.channel(j)[k];
  const ConvKernel& next = model.blocks[1].conv;
  for (std::size_t c = 0; c < next.out_channels; ++c) {
    ConvKernel one = next;
    one.in_channels = one.out_channels = 1;
    const auto s = next.slice(c, i);
    one.weights.assign(s.begin(), s.end());
    const Tensor4 y = conv2d(delta, one);
    double sum = 0.0;
    for (float v : y.data()) sum += double(v) * v;
    EXPECT_TRUE(close(m.closed_form[c], sum / y.shape().channel_size(), 1e-5));
  }
}

TEST(MeasureShift, RejectsBadArguments) {
  Rng rng = make_stream(74);
  const ModelGraph model = fixtures::random_model(small_spec(ActivationKind::ReLU), rng);
  const Tensor4 x = fixtures::random_input(model, 2, rng);
  EXPECT_THROW(measure_shift(model, 1, 0, 1, x), ValidationError);
  EXPECT_THROW(measure_shift(model, 0, 2, 2, x), ValidationError);
  EXPECT_THROW(measure_shift(model, 0, 9, 1, x), ValidationError);
}

TEST(ShiftBound, RandomNetworksSatisfyBound) {
  for (auto kind : {ActivationKind::ReLU, ActivationKind::Sigmoid}) {
    const BoundReport r = verify_prop2_random(100, kind, 5);
    EXPECT_GT(r.entries.size(), 0u);
    EXPECT_TRUE(r.all_satisfied()) << r.violations << " violations";
    EXPECT_LE(r.max_path_disagreement, 1e-5 * std::max(1.0, r.max_lambda));
    for (const BoundEntry& e : r.entries) {
      EXPECT_EQ(e.satisfied, e.shift <= e.bound + kBoundSlack);
      EXPECT_NEAR(e.bound, e.lambda * e.min_distance, 1e-12 * std::max(1.0, e.bound));
    }
  }
}

TEST(ShiftBound, DuplicatePairHasZeroBoundAndZeroShift) {
  Rng rng = make_stream(75);
  const ModelGraph model =
      fixtures::duplicate_channel_model(small_spec(ActivationKind::ReLU), 1, 4, rng);
  const BoundReport r = verify_prop2(model, 3, 9);
  EXPECT_TRUE(r.all_satisfied());
  std::size_t seen = 0;
  for (const BoundEntry& e : r.entries) {
    if (e.layer != 0 || (e.pruned != 1 && e.pruned != 4)) continue;
    ++seen;
    EXPECT_EQ(e.representative, e.pruned == 1 ? 4u : 1u);
    EXPECT_EQ(e.min_distance, 0.0);
    EXPECT_EQ(e.bound, 0.0);
    EXPECT_LE(e.shift, 1e-10);
  }
  EXPECT_EQ(seen, 2u * 3u * 5u);
}

TEST(ShiftBound, ZeroGammaLayerFollowsConstantChannelArithmetic) {
  Rng rng = make_stream(76);
  ModelGraph model = fixtures::random_model(small_spec(ActivationKind::ReLU), rng);
  auto& bn = model.blocks[0].bn;
  std::fill(bn.gamma.begin(), bn.gamma.end(), 0.0f);
  bn.beta = {-0.5f, 0.25f, 0.75f, 1.5f, -1.25f, 2.0f};
  const BoundReport r = verify_prop2(model, 2, 13);
  ASSERT_TRUE(r.all_satisfied());

  const ConvKernel& next = model.blocks[1].conv;
  const std::size_t hw = 8;
  std::size_t checked = 0;
  for (const BoundEntry& e : r.entries) {
    if (e.layer != 0) continue;
    const double bi = bn.beta[e.pruned];
    double best = std::numeric_limits<double>::infinity();
    std::size_t argmin = 0;
    for (std::size_t j = 0; j < 6; ++j) {
      if (j == e.pruned) continue;
      const double d = (bi - bn.beta[j]) * (bi - bn.beta[j]);
      if (d < best) best = d, argmin = j;
    }
    EXPECT_EQ(e.representative, argmin);
    EXPECT_TRUE(close(e.min_distance, best, 1e-9));

    const double delta = std::max(0.0, bi) - std::max(0.0, double(bn.beta[argmin]));
    const auto w = next.slice(e.out_channel, e.pruned);
    double acc = 0.0;
    for (std::size_t y = 0; y < hw; ++y)
      for (std::size_t x = 0; x < hw; ++x) {
        double s = 0.0;
        for (std::size_t ky = 0; ky < 3; ++ky)
          for (std::size_t kx = 0; kx < 3; ++kx) {
            const long yy = long(y + ky) - 1, xx = long(x + kx) - 1;
            if (yy >= 0 && xx >= 0 && yy < long(hw) && xx < long(hw)) s += w[ky * 3 + kx];
          }
        acc += s * s;
      }
    EXPECT_TRUE(close(e.shift, delta * delta * acc / (hw * hw), 1e-5));
    ++checked;
  }
  EXPECT_EQ(checked, 2u * 6u * 5u);
}

TEST(ShiftBound, IdentityRequiresOptIn) {
  Rng rng = make_stream(77);
  const ModelGraph model =
      fixtures::random_model(small_spec(ActivationKind::Identity), rng);
  EXPECT_THROW(verify_prop2(model, 1, 1), ValidationError);
  Prop2Options opts;
  opts.allow_identity = true;
  EXPECT_TRUE(verify_prop2(model, 1, 1, opts).all_satisfied());
}

TEST(ShiftBound, ReportIsDeterministic) {
  EXPECT_EQ(bound_to_json(verify_prop2_random(20, ActivationKind::Sigmoid, 3)).dump(),
            bound_to_json(verify_prop2_random(20, ActivationKind::Sigmoid, 3)).dump());
}

TEST(ActivationInequality, Examples) {
  const double relu = activate(ActivationKind::ReLU, -5.0) - activate(ActivationKind::ReLU, 3.0);
  EXPECT_EQ(relu * relu, 9.0);
  EXPECT_LE(relu * relu, 64.0);
  const double sig =
      activate(ActivationKind::Sigmoid, 1.7) - activate(ActivationKind::Sigmoid, 1.7);
  EXPECT_EQ(sig, 0.0);
}

TEST(ActivationInequality, SampledPairsNeverViolate) {
  for (auto kind : {ActivationKind::ReLU, ActivationKind::Sigmoid}) {
    const ActivationCheck c = verify_activation_inequality(kind, 200000, 17);
    EXPECT_EQ(c.samples, 200000u);
    EXPECT_TRUE(c.passed());
    EXPECT_LE(c.max_ratio, 1.0);
  }
  EXPECT_LE(verify_activation_inequality(ActivationKind::Sigmoid, 10000, 1).max_ratio, 0.25);
}

TEST(DistanceReport, UnitBnGivesConstantProbabilisticMatrix) {
  Rng rng = make_stream(78);
  fixtures::RandomModelSpec spec = small_spec(ActivationKind::ReLU);
  spec.gamma_min = spec.gamma_max = 1.0;
  spec.beta_min = spec.beta_max = 0.0;
  const ModelGraph model = fixtures::random_model(spec, rng);
  const auto reports = distance_matrix_report(model, 2, 16, 1);
  ASSERT_EQ(reports.size(), 2u);
  for (const auto& r : reports)
    for (std::size_t i = 0; i < r.probabilistic.size(); ++i)
      for (std::size_t j = 0; j < r.probabilistic.size(); ++j) {
        EXPECT_EQ(r.probabilistic.at(i, j), i == j ? 0.0 : 2.0);
        EXPECT_EQ(r.difference.at(i, j),
                  std::fabs(r.empirical.at(i, j) - r.probabilistic.at(i, j)));
      }
}

TEST(DistanceReport, MoreSamplesShrinkTheDifference) {
  Rng rng = make_stream(79);
  fixtures::RandomModelSpec spec = small_spec(ActivationKind::ReLU);
  spec.beta_min = -2.0;
  spec.beta_max = 2.0;
  const ModelGraph model = fixtures::random_model(spec, rng);
  const auto few = distance_matrix_report(model, 1, 4, 3);
  const auto many = distance_matrix_report(model, 20, 256, 3);
  for (std::size_t l = 0; l < few.size(); ++l)
    EXPECT_GT(few[l].difference.max_off_diagonal(), many[l].difference.max_off_diagonal());
}

}  // namespace
}  // namespace simprune
