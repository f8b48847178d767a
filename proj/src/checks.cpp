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

#include "gfoq/checks.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gfoq/model.hpp"
#include "gfoq/optim.hpp"
#include "gfoq/qsim.hpp"

namespace gfoq::checks {

namespace {

using std::numbers::pi;

constexpr std::array<qsim::NoiseKind, 6> kAllKinds{
    qsim::NoiseKind::None,       qsim::NoiseKind::BitFlip,   qsim::NoiseKind::Depolarizing,
    qsim::NoiseKind::PhaseDamping, qsim::NoiseKind::PhaseFlip, qsim::NoiseKind::AmplitudeDamping};
constexpr std::array<double, 3> kPropertyProbabilities{0.0, 0.05, 0.5};

class Timer {
  public:
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

qsim::DensityMatrix random_state(std::mt19937_64 &rng)
{
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unit;
    double x = gauss(rng), y = gauss(rng), z = gauss(rng);
    const double norm = std::sqrt(x * x + y * y + z * z);
    const double radius = std::cbrt(unit(rng)) / (norm > 0 ? norm : 1.0);
    x *= radius;
    y *= radius;
    z *= radius;
    qsim::Mat2 m;
    m(0, 0) = (1.0 + z) / 2.0;
    m(1, 1) = (1.0 - z) / 2.0;
    m(0, 1) = qsim::Complex(x, -y) / 2.0;
    m(1, 0) = qsim::Complex(x, y) / 2.0;
    return qsim::DensityMatrix::from_matrix(m);
}

/// A random classifier instance: dimension, weights, one sample, a coordinate
/// whose feature is safely non-zero and a noise channel.
struct RandomCase {
    model::ModelConfig config;
    model::ParameterVector theta;
    features::Sample sample;
    std::size_t coordinate = 0;
};

RandomCase random_case(std::mt19937_64 &rng)
{
    std::uniform_int_distribution<std::size_t> dim(1, 32);
    std::uniform_int_distribution<std::size_t> kind(0, kAllKinds.size() - 1);
    std::uniform_int_distribution<std::size_t> prob(0, kPropertyProbabilities.size() - 1);
    std::uniform_int_distribution<int> label(0, 1);
    std::uniform_real_distribution<double> feature(0.01, 1.0);

    RandomCase c;
    const std::size_t n = dim(rng);
    const auto k = kAllKinds[kind(rng)];
    const double p = k == qsim::NoiseKind::None ? 0.0 : kPropertyProbabilities[prob(rng)];
    c.config = model::ModelConfig{n, qsim::NoiseChannel(k, p), model::Analytic{}};
    c.theta = optim::random_parameters(n, rng);
    c.sample.label = label(rng);
    c.sample.features.resize(n);
    for (auto &v : c.sample.features) {
        v = feature(rng);
    }
    c.coordinate = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    return c;
}

std::string describe(const RandomCase &c)
{
    std::ostringstream out;
    out << "n=" << c.theta.size() << " i=" << c.coordinate << " label=" << c.sample.label
        << " noise=" << qsim::to_string(c.config.noise.kind()) << "(" << c.config.noise.probability()
        << ")";
    return out.str();
}

CheckResult start(std::string name, double tolerance)
{
    CheckResult r;
    r.name = std::move(name);
    r.tolerance = tolerance;
    return r;
}

CheckResult finish(CheckResult r, const Timer &timer)
{
    r.seconds = timer.seconds();
    r.passed = r.worst_error <= r.tolerance;
    return r;
}

} // namespace

CheckResult channel_validity(std::size_t states_per_channel, std::uint64_t seed)
{
    Timer timer;
    CheckResult r = start("channel validity", qsim::kStateTolerance);
    std::mt19937_64 rng(seed);
    for (auto kind : qsim::kNoisyKinds) {
        for (double p : {0.0, 0.05, 0.3, 1.0}) {
            const qsim::NoiseChannel channel(kind, p);
            qsim::Mat2 completeness;
            for (const auto &k : channel.kraus()) {
                completeness = completeness + k.adjoint() * k;
            }
            double err = qsim::max_abs_diff(completeness, qsim::Mat2::identity());
            for (std::size_t s = 0; s < states_per_channel; ++s) {
                const auto out = qsim::apply_channel(channel, random_state(rng)).matrix();
                err = std::max(err, std::abs(out.trace() - 1.0));
                err = std::max(err, qsim::max_abs_diff(out, out.adjoint()));
            }
            ++r.cases;
            if (err > r.worst_error) {
                r.worst_error = err;
                r.detail = std::string(qsim::to_string(kind)) + " p=" + std::to_string(p);
            }
        }
    }
    return finish(r, timer);
}

CheckResult sinusoid_exactness(std::size_t configs, std::size_t angles, std::uint64_t seed)
{
    Timer timer;
    CheckResult r = start("sinusoid exactness", 1e-10);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(-2.0 * pi, 2.0 * pi);
    for (std::size_t k = 0; k < configs; ++k) {
        const auto c = random_case(rng);
        const std::size_t i = c.coordinate;
        const double s = model::angle(c.theta, c.sample.features) - c.theta[i] * c.sample.features[i];
        const auto curve =
            optim::shift_coefficients(optim::probe_sinusoid(c.sample.label, c.config), s);
        for (std::size_t a = 0; a < angles; ++a) {
            const double u = angle(rng);
            const double direct = model::target_expectation(s + u, c.sample.label, c.config);
            const double err = std::abs(curve(u) - direct);
            if (err > r.worst_error) {
                r.worst_error = err;
                r.detail = describe(c);
            }
        }
        ++r.cases;
    }
    return finish(r, timer);
}

CheckResult closed_form_argmax(std::size_t configs, std::size_t grid_points, std::uint64_t seed)
{
    Timer timer;
    CheckResult r = start("closed-form argmax", 1e-9);
    std::mt19937_64 rng(seed);
    for (std::size_t k = 0; k < configs; ++k) {
        const auto c = random_case(rng);
        const std::size_t i = c.coordinate;
        const double xi = c.sample.features[i];
        const double s = model::angle(c.theta, c.sample.features) - c.theta[i] * xi;

        double grid_best = -1.0;
        for (std::size_t g = 1; g <= grid_points; ++g) {
            const double u = -pi + 2.0 * pi * static_cast<double>(g) / static_cast<double>(grid_points);
            grid_best = std::max(grid_best, model::target_expectation(s + u, c.sample.label, c.config));
        }

        const auto candidate = optim::gfo_update_single(c.theta, i, c.sample, c.config);
        double err = 1.0;
        if (candidate) {
            auto updated = c.theta;
            updated.set(i, *candidate);
            const double achieved = model::target_expectation(model::angle(updated, c.sample.features),
                                                              c.sample.label, c.config);
            err = std::abs(grid_best - achieved);
        }
        if (err > r.worst_error) {
            r.worst_error = err;
            r.detail = describe(c);
        }
        ++r.cases;
    }
    return finish(r, timer);
}

CheckResult gradient_agreement(std::size_t configs, std::uint64_t seed)
{
    Timer timer;
    CheckResult r = start("parameter-shift gradient", 1e-5);
    std::mt19937_64 rng(seed);
    constexpr double h = 1e-6;
    for (std::size_t k = 0; k < configs; ++k) {
        const auto c = random_case(rng);
        std::vector<features::Sample> batch{c.sample};
        std::uniform_int_distribution<int> label(0, 1);
        std::uniform_real_distribution<double> feature(0.0, 1.0);
        while (batch.size() < 5) {
            features::Sample s{std::vector<double>(c.theta.size()), label(rng)};
            for (auto &v : s.features) {
                v = feature(rng);
            }
            batch.push_back(std::move(s));
        }
        const auto grad = optim::parameter_shift_gradient(c.theta, batch, c.config);
        for (std::size_t i = 0; i < c.theta.size(); ++i) {
            auto plus = c.theta;
            auto minus = c.theta;
            plus.set(i, c.theta[i] + h);
            minus.set(i, c.theta[i] - h);
            const double fd =
                (model::cost(plus, batch, c.config) - model::cost(minus, batch, c.config)) / (2.0 * h);
            const double err = std::abs(fd - grad[i]);
            if (err > r.worst_error) {
                r.worst_error = err;
                r.detail = describe(c);
            }
        }
        ++r.cases;
    }
    return finish(r, timer);
}

} // namespace gfoq::checks
