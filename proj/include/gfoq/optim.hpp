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
 * Training for the single-qubit classifier.
 *
 * Gradient-free coordinate optimization (GFO): with every weight but theta_i
 * frozen, the label-projector expectation of one sample is an exact sinusoid
 * in u = theta_i * x_i,
 *
 *     <M>(u) = a cos(u) + b sin(u) + C,
 *
 * whose coefficients follow from four probe evaluations at total angle
 * phi in {0, pi, pi/2, -pi/2} and a rotation by the angle s contributed by the
 * frozen weights. The maximizer is u* = pi/2 - atan2(a, b). Per-sample optima
 * are averaged over a batch and kept only if the cost on a fixed reference
 * subset strictly drops.
 *
 * Adam with parameter-shift gradients is provided as the gradient-based
 * baseline and shares the reference subset and record schedule.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "gfoq/features.hpp"
#include "gfoq/model.hpp"

namespace gfoq::optim {

/// Closed-form sinusoid <M>(phi) = A cos(phi) + B sin(phi) + C in the total angle.
struct ProbeCoefficients {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;

    double operator()(double phi) const;
};

/// Coefficients of the same sinusoid in a single coordinate's contribution
/// u, once the other weights contribute a fixed offset angle.
struct SinusoidCoefficients {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;

    double operator()(double u) const;
};

struct GfoConfig {
    std::size_t batch_size = 10;
    std::size_t loops = 15;
    std::size_t reference_set_size = 100;
    double zero_feature_epsilon = 1e-6;
    /// Training stops once the reference cost is at or below this value.
    double stop_cost = 0.0;
    std::uint64_t seed = 0;

    /// Throws DomainError on batch_size == 0, reference_set_size == 0 or a
    /// non-positive epsilon.
    void validate() const;
};

struct AdamConfig {
    double learning_rate = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon_hat = 1e-8;
    std::size_t loops = 15;
    std::size_t batch_size = 10;
    std::size_t reference_set_size = 100;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Metrics at the end of one training loop. loop_index 0 is reserved for the
/// initial-state record emitted when no loop completes.
struct TrainRecord {
    std::size_t loop_index = 0;
    /// Optimizer time since the start of training, excluding metric evaluation.
    double elapsed_seconds = 0.0;
    double cost_reference = 0.0;
    double train_accuracy = 0.0;
    double test_accuracy = 0.0;
    std::size_t accepted_updates = 0;
    std::size_t skipped_components = 0;
};

struct TrainResult {
    model::ParameterVector theta;
    std::vector<TrainRecord> records;
    /// Reference cost before training followed by every accepted cost-now
    /// (GFO) or the reference cost at the end of each Adam loop.
    std::vector<double> cost_trace;
    /// Number of coordinate visits (GFO) or per-coordinate steps (Adam).
    std::size_t coordinate_visits = 0;
};

/// Probes <|label><label|> at phi = 0, pi, pi/2, -pi/2.
ProbeCoefficients probe_sinusoid(int label, const model::ModelConfig &config);
ProbeCoefficients probe_sinusoid(int label, const qsim::NoiseChannel &noise);

/// Rotates (A, B) by the offset angle s: a = A cos s + B sin s,
/// b = B cos s - A sin s.
SinusoidCoefficients shift_coefficients(const ProbeCoefficients &probe, double s);

/// Wraps an angle into (-pi, pi].
double wrap_angle(double u);

/// Weight for coordinate i that maximizes this sample's target expectation,
/// or nullopt when |x_i| < zero_feature_epsilon.
std::optional<double> gfo_update_single(const model::ParameterVector &theta, std::size_t i,
                                        const features::Sample &sample,
                                        const model::ModelConfig &config,
                                        double zero_feature_epsilon = 1e-6);

/// Mean of the non-skipped per-sample candidates.
std::optional<double> gfo_update_batch(const model::ParameterVector &theta, std::size_t i,
                                       std::span<const features::Sample> batch,
                                       const model::ModelConfig &config,
                                       double zero_feature_epsilon = 1e-6);

/// Uniform on (-pi, pi] per component.
model::ParameterVector random_parameters(std::size_t n, std::mt19937_64 &rng);

/// A size-`count` subset drawn without replacement (the whole set when
/// count >= its size), in draw order.
std::vector<features::Sample> draw_reference_set(const features::Dataset &train,
                                                 std::size_t count, std::mt19937_64 &rng);

TrainResult gfo_train(const model::ParameterVector &initial, const features::Dataset &train,
                      const features::Dataset &test, const GfoConfig &config,
                      const model::ModelConfig &model_config);

/// d cost / d theta via the +-pi/2 shift rule on the total angle.
std::vector<double> parameter_shift_gradient(const model::ParameterVector &theta,
                                             std::span<const features::Sample> batch,
                                             const model::ModelConfig &config);

/// First- and second-moment state for Adam.
class AdamState {
  public:
    AdamState(std::size_t n, const AdamConfig &config);

    /// Applies one bias-corrected update in place.
    void step(model::ParameterVector &theta, std::span<const double> gradient);

    std::size_t steps() const { return t_; }

  private:
    AdamConfig config_;
    std::vector<double> m_;
    std::vector<double> v_;
    std::size_t t_ = 0;
};

TrainResult adam_train(const model::ParameterVector &initial, const features::Dataset &train,
                       const features::Dataset &test, const AdamConfig &config,
                       const model::ModelConfig &model_config);

} // namespace gfoq::optim
