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

#include "gfoq/optim.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <numbers>
#include <string>

#include "gfoq/error.hpp"

namespace gfoq::optim {

namespace {

using std::numbers::pi;

/// Accumulates optimizer time; metric evaluation happens while paused.
class Stopwatch {
  public:
    using Clock = std::chrono::steady_clock;

    void resume() { started_ = Clock::now(); }
    void pause() { total_ += Clock::now() - started_; }
    double seconds() const { return std::chrono::duration<double>(total_).count(); }

  private:
    Clock::time_point started_ = Clock::now();
    Clock::duration total_{};
};

/// Probe coefficients for labels 0 and 1; they depend only on the noise
/// channel and execution mode, never on theta or the sample.
using ProbePair = std::array<ProbeCoefficients, 2>;

ProbePair probe_both(const model::ModelConfig &config)
{
    return {probe_sinusoid(0, config), probe_sinusoid(1, config)};
}

std::optional<double> update_single(const model::ParameterVector &theta, std::size_t i,
                                    const features::Sample &sample, const ProbePair &probes,
                                    double zero_feature_epsilon)
{
    const double xi = sample.features.at(i);
    if (std::abs(xi) < zero_feature_epsilon) {
        return std::nullopt;
    }
    const double s = model::angle(theta, sample.features) - theta[i] * xi;
    const auto coeffs = shift_coefficients(probes.at(static_cast<std::size_t>(sample.label)), s);
    const double best = wrap_angle(pi / 2.0 - std::atan2(coeffs.a, coeffs.b));
    return best / xi;
}

std::optional<double> update_batch(const model::ParameterVector &theta, std::size_t i,
                                   std::span<const features::Sample> batch, const ProbePair &probes,
                                   double zero_feature_epsilon)
{
    if (batch.empty()) {
        throw CapacityError("GFO update needs a non-empty batch");
    }
    double sum = 0.0;
    std::size_t used = 0;
    for (const auto &s : batch) {
        if (auto candidate = update_single(theta, i, s, probes, zero_feature_epsilon)) {
            sum += *candidate;
            ++used;
        }
    }
    if (used == 0) {
        return std::nullopt;
    }
    return sum / static_cast<double>(used);
}

void check_training_inputs(const model::ParameterVector &initial, const features::Dataset &train,
                           const features::Dataset &test, const model::ModelConfig &model_config)
{
    model_config.validate();
    if (train.empty()) {
        throw CapacityError("training set is empty");
    }
    if (initial.size() != model_config.dimension || train.dimension != model_config.dimension) {
        throw ShapeError("parameter length " + std::to_string(initial.size()) +
                         ", training dimension " + std::to_string(train.dimension) +
                         " and model dimension " + std::to_string(model_config.dimension) +
                         " must agree");
    }
    if (!test.empty() && test.dimension != model_config.dimension) {
        throw ShapeError("test dimension " + std::to_string(test.dimension) +
                         " differs from model dimension " + std::to_string(model_config.dimension));
    }
    train.validate();
    test.validate();
}

TrainRecord make_record(std::size_t loop, double elapsed, double reference_cost,
                        const model::ParameterVector &theta, const features::Dataset &train,
                        const features::Dataset &test, const model::ModelConfig &config)
{
    TrainRecord r;
    r.loop_index = loop;
    r.elapsed_seconds = elapsed;
    r.cost_reference = reference_cost;
    r.train_accuracy = model::accuracy(theta, train, config);
    r.test_accuracy = test.empty() ? 0.0 : model::accuracy(theta, test, config);
    return r;
}

} // namespace

double ProbeCoefficients::operator()(double phi) const
{
    return a * std::cos(phi) + b * std::sin(phi) + c;
}

double SinusoidCoefficients::operator()(double u) const
{
    return a * std::cos(u) + b * std::sin(u) + c;
}

void GfoConfig::validate() const
{
    if (batch_size == 0) {
        throw DomainError("GFO batch_size must be at least 1");
    }
    if (reference_set_size == 0) {
        throw DomainError("GFO reference_set_size must be at least 1");
    }
    if (!(zero_feature_epsilon > 0.0)) {
        throw DomainError("GFO zero_feature_epsilon must be positive");
    }
    if (!std::isfinite(stop_cost)) {
        throw DomainError("GFO stop_cost must be finite");
    }
}

void AdamConfig::validate() const
{
    if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
        throw DomainError("Adam learning_rate must be a finite value >= 0");
    }
    if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
        throw DomainError("Adam beta1 and beta2 must lie in [0, 1)");
    }
    if (!(epsilon_hat > 0.0)) {
        throw DomainError("Adam epsilon_hat must be positive");
    }
    if (batch_size == 0 || reference_set_size == 0) {
        throw DomainError("Adam batch_size and reference_set_size must be at least 1");
    }
}

ProbeCoefficients probe_sinusoid(int label, const model::ModelConfig &config)
{
    const double at_zero = model::target_expectation(0.0, label, config);
    const double at_pi = model::target_expectation(pi, label, config);
    const double at_half = model::target_expectation(pi / 2.0, label, config);
    const double at_minus_half = model::target_expectation(-pi / 2.0, label, config);
    return {(at_zero - at_pi) / 2.0, (at_half - at_minus_half) / 2.0, (at_zero + at_pi) / 2.0};
}

ProbeCoefficients probe_sinusoid(int label, const qsim::NoiseChannel &noise)
{
    return probe_sinusoid(label, model::ModelConfig{1, noise, model::Analytic{}});
}

SinusoidCoefficients shift_coefficients(const ProbeCoefficients &probe, double s)
{
    const double cs = std::cos(s);
    const double sn = std::sin(s);
    return {probe.a * cs + probe.b * sn, probe.b * cs - probe.a * sn, probe.c};
}

double wrap_angle(double u)
{
    double w = std::remainder(u, 2.0 * pi);
    if (w <= -pi) {
        w += 2.0 * pi;
    }
    return w;
}

std::optional<double> gfo_update_single(const model::ParameterVector &theta, std::size_t i,
                                        const features::Sample &sample,
                                        const model::ModelConfig &config,
                                        double zero_feature_epsilon)
{
    return update_single(theta, i, sample, probe_both(config), zero_feature_epsilon);
}

std::optional<double> gfo_update_batch(const model::ParameterVector &theta, std::size_t i,
                                       std::span<const features::Sample> batch,
                                       const model::ModelConfig &config,
                                       double zero_feature_epsilon)
{
    return update_batch(theta, i, batch, probe_both(config), zero_feature_epsilon);
}

model::ParameterVector random_parameters(std::size_t n, std::mt19937_64 &rng)
{
    // uniform_real_distribution draws from [-pi, pi); negating lands on (-pi, pi].
    std::uniform_real_distribution<double> draw(-pi, pi);
    std::vector<double> values(n);
    for (auto &v : values) {
        v = -draw(rng);
    }
    return model::ParameterVector(std::move(values));
}

std::vector<features::Sample> draw_reference_set(const features::Dataset &train,
                                                 std::size_t count, std::mt19937_64 &rng)
{
    std::vector<std::size_t> order(train.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        order[k] = k;
    }
    const std::size_t take = std::min(count, order.size());
    std::vector<features::Sample> out;
    out.reserve(take);
    for (std::size_t k = 0; k < take; ++k) {
        std::uniform_int_distribution<std::size_t> pick(k, order.size() - 1);
        std::swap(order[k], order[pick(rng)]);
        out.push_back(train.samples[order[k]]);
    }
    return out;
}

TrainResult gfo_train(const model::ParameterVector &initial, const features::Dataset &train,
                      const features::Dataset &test, const GfoConfig &config,
                      const model::ModelConfig &model_config)
{
    config.validate();
    check_training_inputs(initial, train, test, model_config);

    std::mt19937_64 rng(config.seed);
    TrainResult result{initial, {}, {}, 0};
    auto &theta = result.theta;
    const std::size_t n = theta.size();

    Stopwatch clock;
    clock.resume();
    const auto reference = draw_reference_set(train, config.reference_set_size, rng);
    const ProbePair probes = probe_both(model_config);
    double cost_now = model::cost(theta, reference, model_config);
    result.cost_trace.push_back(cost_now);
    clock.pause();

    bool stop = cost_now <= config.stop_cost;
    for (std::size_t loop = 1; loop <= config.loops && !stop; ++loop) {
        clock.resume();
        std::size_t accepted = 0;
        std::size_t skipped = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto batch = features::draw_batch(train, config.batch_size, rng);
            ++result.coordinate_visits;
            const auto candidate =
                update_batch(theta, i, batch, probes, config.zero_feature_epsilon);
            if (!candidate) {
                ++skipped;
                continue;
            }
            const double previous = theta[i];
            theta.set(i, *candidate);
            const double cost_new = model::cost(theta, reference, model_config);
            if (cost_new < cost_now) {
                cost_now = cost_new;
                result.cost_trace.push_back(cost_now);
                ++accepted;
                if (cost_now <= config.stop_cost) {
                    stop = true;
                    break;
                }
            } else {
                theta.set(i, previous);
            }
        }
        clock.pause();
        auto record = make_record(loop, clock.seconds(), cost_now, theta, train, test, model_config);
        record.accepted_updates = accepted;
        record.skipped_components = skipped;
        result.records.push_back(record);
    }

    if (result.records.empty()) {
        result.records.push_back(
            make_record(0, clock.seconds(), cost_now, theta, train, test, model_config));
    }
    return result;
}

std::vector<double> parameter_shift_gradient(const model::ParameterVector &theta,
                                             std::span<const features::Sample> batch,
                                             const model::ModelConfig &config)
{
    if (batch.empty()) {
        throw CapacityError("gradient needs a non-empty batch");
    }
    std::vector<double> grad(theta.size(), 0.0);
    const double scale = -2.0 / static_cast<double>(batch.size());
    for (const auto &s : batch) {
        const double phi = model::angle(theta, s.features);
        const double value = model::target_expectation(phi, s.label, config);
        const double slope = (model::target_expectation(phi + pi / 2.0, s.label, config) -
                              model::target_expectation(phi - pi / 2.0, s.label, config)) /
                             2.0;
        const double weight = scale * value * slope;
        for (std::size_t i = 0; i < grad.size(); ++i) {
            grad[i] += weight * s.features[i];
        }
    }
    return grad;
}

AdamState::AdamState(std::size_t n, const AdamConfig &config)
    : config_(config), m_(n, 0.0), v_(n, 0.0)
{
    config_.validate();
}

void AdamState::step(model::ParameterVector &theta, std::span<const double> gradient)
{
    if (gradient.size() != m_.size() || theta.size() != m_.size()) {
        throw ShapeError("Adam state, parameters and gradient must share a length");
    }
    ++t_;
    const double t = static_cast<double>(t_);
    const double correct1 = 1.0 - std::pow(config_.beta1, t);
    const double correct2 = 1.0 - std::pow(config_.beta2, t);
    for (std::size_t i = 0; i < m_.size(); ++i) {
        const double g = gradient[i];
        m_[i] = config_.beta1 * m_[i] + (1.0 - config_.beta1) * g;
        v_[i] = config_.beta2 * v_[i] + (1.0 - config_.beta2) * g * g;
        const double m_hat = m_[i] / correct1;
        const double v_hat = v_[i] / correct2;
        theta.set(i, theta[i] - config_.learning_rate * m_hat / (std::sqrt(v_hat) + config_.epsilon_hat));
    }
}

TrainResult adam_train(const model::ParameterVector &initial, const features::Dataset &train,
                       const features::Dataset &test, const AdamConfig &config,
                       const model::ModelConfig &model_config)
{
    config.validate();
    check_training_inputs(initial, train, test, model_config);

    std::mt19937_64 rng(config.seed);
    TrainResult result{initial, {}, {}, 0};
    auto &theta = result.theta;
    const std::size_t n = theta.size();
    AdamState adam(n, config);

    Stopwatch clock;
    clock.resume();
    const auto reference = draw_reference_set(train, config.reference_set_size, rng);
    clock.pause();
    result.cost_trace.push_back(model::cost(theta, reference, model_config));

    for (std::size_t loop = 1; loop <= config.loops; ++loop) {
        clock.resume();
        for (std::size_t step = 0; step < n; ++step) {
            const auto batch = features::draw_batch(train, config.batch_size, rng);
            ++result.coordinate_visits;
            adam.step(theta, parameter_shift_gradient(theta, batch, model_config));
        }
        clock.pause();
        const double reference_cost = model::cost(theta, reference, model_config);
        result.cost_trace.push_back(reference_cost);
        auto record =
            make_record(loop, clock.seconds(), reference_cost, theta, train, test, model_config);
        record.accepted_updates = n;
        result.records.push_back(record);
    }

    if (result.records.empty()) {
        result.records.push_back(make_record(0, clock.seconds(), result.cost_trace.front(), theta,
                                             train, test, model_config));
    }
    return result;
}

} // namespace gfoq::optim
