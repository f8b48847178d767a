// Copyright 2026 The gfoq Authors
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

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "gfoq/error.hpp"
#include "gfoq/optim.hpp"

using namespace gfoq;
using namespace gfoq::optim;
using std::numbers::pi;

namespace {

model::ModelConfig noiseless(std::size_t n)
{
    return model::ModelConfig{n, qsim::NoiseChannel(), model::Analytic{}};
}

/// Noiseless probability of reading `label`, by hand.
double hit_probability(double phi, int label)
{
    const double c2 = std::cos(phi / 2) * std::cos(phi / 2);
    return label == 0 ? c2 : 1 - c2;
}

/// Argmax of the noiseless target probability over u in (-pi, pi] on a grid.
double grid_argmax(double s, int label, std::size_t points = 10000)
{
    double best_u = 0.0;
    double best = -1.0;
    for (std::size_t g = 1; g <= points; ++g) {
        const double u = -pi + 2 * pi * static_cast<double>(g) / static_cast<double>(points);
        const double v = hit_probability(s + u, label);
        if (v > best) {
            best = v;
            best_u = u;
        }
    }
    return best_u;
}

features::Dataset blobs(std::size_t n, std::size_t per_class, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    return features::synth_blobs(n, per_class, 1.0, rng);
}

} // namespace

TEST(ProbeSinusoid, NoiselessValues)
{
    const auto one = probe_sinusoid(1, qsim::NoiseChannel());
    EXPECT_NEAR(one.a, -0.5, 1e-12);
    EXPECT_NEAR(one.b, 0.0, 1e-12);
    EXPECT_NEAR(one.c, 0.5, 1e-12);
    const auto zero = probe_sinusoid(0, qsim::NoiseChannel());
    EXPECT_NEAR(zero.a, 0.5, 1e-12);
    EXPECT_NEAR(zero.b, 0.0, 1e-12);
    EXPECT_NEAR(zero.c, 0.5, 1e-12);
}

TEST(ProbeSinusoid, BitFlipShrinksAmplitude)
{
    // P(0) = 1/2 + (1 - 2p) cos(phi) / 2 under a bit flip.
    const auto probe = probe_sinusoid(0, qsim::NoiseChannel(qsim::NoiseKind::BitFlip, 0.1));
    EXPECT_NEAR(probe.a, 0.4, 1e-12);
    EXPECT_NEAR(probe.b, 0.0, 1e-12);
    EXPECT_NEAR(probe.c, 0.5, 1e-12);
}

TEST(ShiftCoefficients, Examples)
{
    const ProbeCoefficients probe{0.3, -0.2, 0.5};
    const auto same = shift_coefficients(probe, 0.0);
    EXPECT_DOUBLE_EQ(same.a, 0.3);
    EXPECT_DOUBLE_EQ(same.b, -0.2);
    const auto quarter = shift_coefficients(probe, pi / 2);
    EXPECT_NEAR(quarter.a, -0.2, 1e-15);
    EXPECT_NEAR(quarter.b, -0.3, 1e-15);
    EXPECT_DOUBLE_EQ(quarter.c, 0.5);
}

TEST(ShiftCoefficients, AgreesWithDirectSimulation)
{
    const auto probe = probe_sinusoid(1, qsim::NoiseChannel());
    const double s = 1.0;
    const auto curve = shift_coefficients(probe, s);
    for (double u : {0.3, 1.7, -2.5}) {
        EXPECT_NEAR(curve(u), hit_probability(s + u, 1), 1e-12) << u;
    }
}

TEST(WrapAngle, Range)
{
    EXPECT_DOUBLE_EQ(wrap_angle(0.0), 0.0);
    EXPECT_NEAR(wrap_angle(3 * pi), pi, 1e-12);
    EXPECT_DOUBLE_EQ(wrap_angle(-pi), pi);
    EXPECT_NEAR(wrap_angle(-1.5 * pi), 0.5 * pi, 1e-12);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> wide(-50.0, 50.0);
    for (int k = 0; k < 1000; ++k) {
        const double u = wrap_angle(wide(rng));
        ASSERT_GT(u, -pi);
        ASSERT_LE(u, pi);
    }
}

TEST(GfoUpdateSingle, Examples)
{
    const auto theta = model::ParameterVector::zeros(1);
    const auto one = gfo_update_single(theta, 0, {{1.0}, 1}, noiseless(1));
    ASSERT_TRUE(one);
    EXPECT_NEAR(*one, pi, 1e-12);
    EXPECT_NEAR(*one, grid_argmax(0.0, 1), 2 * pi / 10000);

    const auto zero = gfo_update_single(theta, 0, {{1.0}, 0}, noiseless(1));
    ASSERT_TRUE(zero);
    EXPECT_NEAR(*zero, 0.0, 1e-12);

    EXPECT_FALSE(gfo_update_single(theta, 0, {{0.0}, 1}, noiseless(1)));
    EXPECT_FALSE(gfo_update_single(theta, 0, {{5e-7}, 1}, noiseless(1)));
}

TEST(GfoUpdateSingle, MatchesGridArgmaxWithOffset)
{
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> unit(0.05, 1.0);
    for (int k = 0; k < 100; ++k) {
        const auto theta = random_parameters(3, rng);
        const features::Sample sample{{unit(rng), unit(rng), unit(rng)}, k % 2};
        const std::size_t i = static_cast<std::size_t>(k % 3);
        const auto candidate = gfo_update_single(theta, i, sample, noiseless(3));
        ASSERT_TRUE(candidate);
        const double s = model::angle(theta, sample.features) - theta[i] * sample.features[i];
        const double u = *candidate * sample.features[i];
        ASSERT_GT(u, -pi - 1e-12);
        ASSERT_LE(u, pi + 1e-12);
        // Compare achieved values; the grid maximizer is only 2pi/1e4 accurate.
        ASSERT_NEAR(hit_probability(s + u, sample.label), 1.0, 1e-12);
        ASSERT_LE(hit_probability(s + grid_argmax(s, sample.label), sample.label),
                  hit_probability(s + u, sample.label) + 1e-12);
    }
}

TEST(GfoUpdateBatch, MeanOfCandidates)
{
    const auto theta = model::ParameterVector::zeros(1);
    const std::vector<features::Sample> batch{{{1.0}, 1}, {{1.0}, 0}, {{0.0}, 1}};
    const auto mean = gfo_update_batch(theta, 0, batch, noiseless(1));
    ASSERT_TRUE(mean);
    EXPECT_NEAR(*mean, pi / 2, 1e-12);

    const std::vector<features::Sample> zeros{{{0.0}, 1}, {{0.0}, 0}};
    EXPECT_FALSE(gfo_update_batch(theta, 0, zeros, noiseless(1)));
}

TEST(GfoTrain, SingleSampleReachesZeroCost)
{
    const features::Dataset train{1, {{{1.0}, 1}}, {}};
    GfoConfig config;
    config.batch_size = 1;
    config.loops = 3;
    config.reference_set_size = 1;
    const auto result = gfo_train(model::ParameterVector::zeros(1), train, train, config, noiseless(1));
    EXPECT_NEAR(result.theta[0], pi, 1e-9);
    EXPECT_NEAR(result.cost_trace.back(), 0.0, 1e-12);
    // Stops after the first loop once the cost hits the floor.
    EXPECT_EQ(result.records.size(), 1u);
    EXPECT_EQ(result.records[0].accepted_updates, 1u);
}

TEST(GfoTrain, StopCostOfOneStopsImmediately)
{
    const auto train = blobs(4, 20, 1);
    GfoConfig config;
    config.stop_cost = 1.0;
    const auto result = gfo_train(model::ParameterVector::zeros(4), train, train, config, noiseless(4));
    EXPECT_EQ(result.theta, model::ParameterVector::zeros(4));
    ASSERT_EQ(result.records.size(), 1u);
    EXPECT_EQ(result.records[0].loop_index, 0u);
    EXPECT_EQ(result.coordinate_visits, 0u);
}

TEST(GfoTrain, ReferenceCostNeverIncreases)
{
    for (auto kind : qsim::kNoisyKinds) {
        const auto train = blobs(8, 50, 2);
        const model::ModelConfig model_config{8, qsim::NoiseChannel(kind, 0.05), model::Analytic{}};
        std::mt19937_64 rng(3);
        GfoConfig config;
        config.seed = 4;
        const auto result = gfo_train(random_parameters(8, rng), train, train, config, model_config);
        for (std::size_t k = 1; k < result.cost_trace.size(); ++k) {
            ASSERT_LT(result.cost_trace[k], result.cost_trace[k - 1]);
        }
        for (std::size_t k = 1; k < result.records.size(); ++k) {
            ASSERT_LE(result.records[k].cost_reference, result.records[k - 1].cost_reference);
        }
    }
}

TEST(GfoTrain, VisitBudgetIsLoopsTimesDimension)
{
    const auto train = blobs(6, 30, 5);
    GfoConfig config;
    config.loops = 4;
    std::mt19937_64 rng(6);
    const auto result = gfo_train(random_parameters(6, rng), train, train, config, noiseless(6));
    EXPECT_EQ(result.records.size(), 4u);
    EXPECT_EQ(result.coordinate_visits, 24u);
    for (std::size_t k = 0; k < result.records.size(); ++k) {
        EXPECT_EQ(result.records[k].loop_index, k + 1);
    }
}

TEST(GfoTrain, Deterministic)
{
    const auto train = blobs(5, 30, 8);
    GfoConfig config;
    config.seed = 9;
    std::mt19937_64 a(10);
    std::mt19937_64 b(10);
    const auto first = gfo_train(random_parameters(5, a), train, train, config, noiseless(5));
    const auto second = gfo_train(random_parameters(5, b), train, train, config, noiseless(5));
    EXPECT_EQ(first.theta, second.theta);
    EXPECT_EQ(first.cost_trace, second.cost_trace);
}

TEST(GfoConfig, Validation)
{
    GfoConfig config;
    config.batch_size = 0;
    EXPECT_THROW(config.validate(), DomainError);
    config = GfoConfig{};
    config.zero_feature_epsilon = 0.0;
    EXPECT_THROW(config.validate(), DomainError);
}

TEST(ParameterShiftGradient, ZeroAtTheOptimum)
{
    const std::vector<features::Sample> batch{{{1.0, 0.5}, 1}};
    const auto grad = parameter_shift_gradient(model::ParameterVector({pi, 0.0}), batch, noiseless(2));
    EXPECT_NEAR(grad[0], 0.0, 1e-12);
    EXPECT_NEAR(grad[1], 0.0, 1e-12);
}

TEST(ParameterShiftGradient, ZeroFeatureGivesZeroComponent)
{
    const std::vector<features::Sample> batch{{{0.7, 0.0}, 0}, {{0.2, 0.0}, 1}};
    const auto grad = parameter_shift_gradient(model::ParameterVector({0.4, 1.3}), batch, noiseless(2));
    EXPECT_EQ(grad[1], 0.0);
    EXPECT_NE(grad[0], 0.0);
}

TEST(ParameterShiftGradient, MatchesFiniteDifferences)
{
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double h = 1e-6;
    for (auto kind : qsim::kNoisyKinds) {
        const model::ModelConfig config{3, qsim::NoiseChannel(kind, 0.2), model::Analytic{}};
        const auto theta = random_parameters(3, rng);
        std::vector<features::Sample> batch(4);
        for (auto &s : batch) {
            s.features = {unit(rng), unit(rng), unit(rng)};
            s.label = unit(rng) < 0.5 ? 0 : 1;
        }
        const auto grad = parameter_shift_gradient(theta, batch, config);
        for (std::size_t i = 0; i < 3; ++i) {
            auto plus = theta;
            auto minus = theta;
            plus.set(i, theta[i] + h);
            minus.set(i, theta[i] - h);
            const double fd = (model::cost(plus, batch, config) - model::cost(minus, batch, config)) / (2 * h);
            ASSERT_NEAR(grad[i], fd, 1e-5) << qsim::to_string(kind) << " i=" << i;
        }
    }
}

TEST(Adam, ZeroLearningRateLeavesWeights)
{
    const auto train = blobs(4, 20, 13);
    AdamConfig config;
    config.learning_rate = 0.0;
    std::mt19937_64 rng(14);
    const auto initial = random_parameters(4, rng);
    const auto result = adam_train(initial, train, train, config, noiseless(4));
    EXPECT_EQ(result.theta, initial);
}

TEST(Adam, FirstStepMovesAgainstGradientByLearningRate)
{
    AdamConfig config;
    config.learning_rate = 0.1;
    AdamState state(2, config);
    auto theta = model::ParameterVector({0.5, -0.5});
    const std::vector<double> grad{2.0, -3.0};
    state.step(theta, grad);
    // Bias-corrected first step is lr * g / (|g| + eps).
    EXPECT_NEAR(theta[0], 0.5 - 0.1, 1e-8);
    EXPECT_NEAR(theta[1], -0.5 + 0.1, 1e-8);
    EXPECT_EQ(state.steps(), 1u);
}

TEST(Adam, TrainingLowersReferenceCost)
{
    const auto train = blobs(8, 100, 15);
    AdamConfig config;
    config.learning_rate = 0.05;
    config.seed = 16;
    std::mt19937_64 rng(17);
    const auto result = adam_train(random_parameters(8, rng), train, train, config, noiseless(8));
    ASSERT_EQ(result.records.size(), 15u);
    EXPECT_LT(result.cost_trace.back(), result.cost_trace.front());
}

TEST(RandomParameters, RangeAndSeed)
{
    std::mt19937_64 a(1);
    std::mt19937_64 b(1);
    const auto first = random_parameters(1000, a);
    EXPECT_EQ(first, random_parameters(1000, b));
    for (double v : first.values()) {
        ASSERT_GT(v, -pi);
        ASSERT_LE(v, pi);
    }
}

TEST(DrawReferenceSet, WithoutReplacement)
{
    const auto train = blobs(3, 10, 18);
    std::mt19937_64 rng(19);
    const auto all = draw_reference_set(train, 100, rng);
    EXPECT_EQ(all.size(), 20u);
    const auto some = draw_reference_set(train, 5, rng);
    EXPECT_EQ(some.size(), 5u);
    for (std::size_t p = 0; p < some.size(); ++p) {
        for (std::size_t q = p + 1; q < some.size(); ++q) {
            EXPECT_NE(some[p].features, some[q].features);
        }
    }
}
