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

/** @file
 * Single-qubit binary classifier.
 *
 * A sample x and the weights theta are folded into one rotation angle
 * phi = theta . x. The qubit starts in |0>, is rotated by R_X(phi), passes
 * through the configured noise channel and is measured against the projector
 * onto its label, |y><y|. The expectation of that projector is the
 * probability of reading the correct class, so it lies in [0, 1] and
 * maximizing it also maximizes its square, which is what the cost rewards.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "gfoq/features.hpp"
#include "gfoq/qsim.hpp"

namespace gfoq::model {

/// Trainable weights, one per feature.
class ParameterVector {
  public:
    ParameterVector() = default;
    /// Throws DomainError if any component is non-finite.
    explicit ParameterVector(std::vector<double> values);

    static ParameterVector zeros(std::size_t n) { return ParameterVector(std::vector<double>(n)); }

    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    std::span<const double> values() const { return values_; }

    /// Throws DomainError on a non-finite value and std::out_of_range on a bad index.
    void set(std::size_t i, double value);

    friend bool operator==(const ParameterVector &, const ParameterVector &) = default;

  private:
    std::vector<double> values_;
};

/// Exact traces.
struct Analytic {
    friend bool operator==(const Analytic &, const Analytic &) = default;
};

/// Expectations estimated from `count` basis measurements. Each estimate draws
/// from a generator seeded by `seed` and the evaluated angle, so repeated
/// evaluation of the same circuit is reproducible.
struct Shots {
    std::uint64_t count = 1000;
    std::uint64_t seed = 0;
    friend bool operator==(const Shots &, const Shots &) = default;
};

using Execution = std::variant<Analytic, Shots>;

struct ModelConfig {
    std::size_t dimension = 1;
    qsim::NoiseChannel noise;
    Execution execution = Analytic{};

    /// Throws DomainError if dimension is zero or shots count is zero.
    void validate() const;
};

/// theta . x. Throws ShapeError on a length mismatch.
double angle(const ParameterVector &theta, std::span<const double> x);

/// Noise applied after R_X(phi) on |0><0|.
qsim::DensityMatrix forward_angle(double phi, const qsim::NoiseChannel &noise);
qsim::DensityMatrix forward(const ParameterVector &theta, std::span<const double> x,
                            const ModelConfig &config);

/// |label><label|. Throws DomainError unless label is 0 or 1.
qsim::Observable target_observable(int label);

/// <|label><label|> after encoding total angle phi, exact or shot-estimated
/// according to config.execution.
double target_expectation(double phi, int label, const ModelConfig &config);

/// Mean of 1 - <M_m>^2 over the batch. Throws CapacityError on an empty batch.
double cost(const ParameterVector &theta, std::span<const features::Sample> batch,
            const ModelConfig &config);

/// P(0) within this of 1/2 counts as a tie, absorbing rounding in the trace.
inline constexpr double kTieTolerance = 1e-12;

/// 0 when P(0) >= 1/2 (ties included), else 1.
int predict(const ParameterVector &theta, std::span<const double> x, const ModelConfig &config);

/// Fraction of correctly predicted samples. Throws CapacityError when empty.
double accuracy(const ParameterVector &theta, const features::Dataset &dataset,
                const ModelConfig &config);

} // namespace gfoq::model
