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

#include "gfoq/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <string>

#include "gfoq/error.hpp"

namespace gfoq::model {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

} // namespace

ParameterVector::ParameterVector(std::vector<double> values) : values_(std::move(values))
{
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw DomainError("parameter vector has a non-finite component");
        }
    }
}

void ParameterVector::set(std::size_t i, double value)
{
    if (!std::isfinite(value)) {
        throw DomainError("parameter " + std::to_string(i) + " set to a non-finite value");
    }
    values_.at(i) = value;
}

void ModelConfig::validate() const
{
    if (dimension == 0) {
        throw DomainError("model dimension must be at least 1");
    }
    if (const auto *shots = std::get_if<Shots>(&execution); shots && shots->count == 0) {
        throw DomainError("shot count must be at least 1");
    }
}

double angle(const ParameterVector &theta, std::span<const double> x)
{
    if (theta.size() != x.size()) {
        throw ShapeError("parameter length " + std::to_string(theta.size()) +
                         " != feature length " + std::to_string(x.size()));
    }
    double phi = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        phi += theta[i] * x[i];
    }
    return phi;
}

qsim::DensityMatrix forward_angle(double phi, const qsim::NoiseChannel &noise)
{
    return qsim::apply_channel(noise, qsim::rx_density(phi, qsim::DensityMatrix::ground()));
}

qsim::DensityMatrix forward(const ParameterVector &theta, std::span<const double> x,
                            const ModelConfig &config)
{
    return forward_angle(angle(theta, x), config.noise);
}

qsim::Observable target_observable(int label)
{
    if (label != 0 && label != 1) {
        throw DomainError("label " + std::to_string(label) + " is not 0 or 1");
    }
    return qsim::Observable::projector(label);
}

double target_expectation(double phi, int label, const ModelConfig &config)
{
    const auto rho = forward_angle(phi, config.noise);
    const auto obs = target_observable(label);
    if (const auto *shots = std::get_if<Shots>(&config.execution)) {
        std::mt19937_64 rng(splitmix64(shots->seed ^ splitmix64(std::bit_cast<std::uint64_t>(phi))));
        const auto counts = qsim::sample_basis(rho, shots->count, rng);
        const auto hits = label == 0 ? counts.zeros : counts.ones;
        return static_cast<double>(hits) / static_cast<double>(shots->count);
    }
    return qsim::expectation(obs, rho);
}

double cost(const ParameterVector &theta, std::span<const features::Sample> batch,
            const ModelConfig &config)
{
    if (batch.empty()) {
        throw CapacityError("cost needs a non-empty batch");
    }
    double total = 0.0;
    for (const auto &s : batch) {
        const double m =
            std::clamp(target_expectation(angle(theta, s.features), s.label, config), 0.0, 1.0);
        total += 1.0 - m * m;
    }
    return total / static_cast<double>(batch.size());
}

int predict(const ParameterVector &theta, std::span<const double> x, const ModelConfig &config)
{
    return forward(theta, x, config).p0() >= 0.5 - kTieTolerance ? 0 : 1;
}

double accuracy(const ParameterVector &theta, const features::Dataset &dataset,
                const ModelConfig &config)
{
    if (dataset.empty()) {
        throw CapacityError("accuracy needs a non-empty dataset");
    }
    std::size_t correct = 0;
    for (const auto &s : dataset.samples) {
        correct += predict(theta, s.features, config) == s.label;
    }
    return static_cast<double>(correct) / static_cast<double>(dataset.size());
}

} // namespace gfoq::model
