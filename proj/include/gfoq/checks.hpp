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
 * Randomized property suites that check the simulator and the optimizers
 * against brute-force references: Kraus completeness and trace preservation,
 * sinusoid reconstruction against direct simulation, the closed-form
 * coordinate maximizer against a dense grid search, and parameter-shift
 * gradients against central finite differences.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace gfoq::checks {

struct CheckResult {
    std::string name;
    bool passed = false;
    /// Worst observed error against the reference.
    double worst_error = 0.0;
    double tolerance = 0.0;
    std::size_t cases = 0;
    double seconds = 0.0;
    std::string detail;
};

/// Every noisy kind at p in {0, 0.05, 0.3, 1}: sum K^dag K = I and trace and
/// Hermiticity preserved on `states_per_channel` random states.
CheckResult channel_validity(std::size_t states_per_channel = 100, std::uint64_t seed = 1);

/// Probe-and-shift reconstruction against direct simulation at `angles`
/// random u for each of `configs` random (theta, sample, label, noise).
CheckResult sinusoid_exactness(std::size_t configs = 200, std::size_t angles = 50,
                               std::uint64_t seed = 2);

/// Closed-form coordinate update against a `grid_points` grid search over
/// u in (-pi, pi].
CheckResult closed_form_argmax(std::size_t configs = 200, std::size_t grid_points = 100000,
                               std::uint64_t seed = 3);

/// Parameter-shift gradient against central differences with step 1e-6.
CheckResult gradient_agreement(std::size_t configs = 50, std::uint64_t seed = 4);

} // namespace gfoq::checks
