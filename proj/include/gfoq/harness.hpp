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
 * Experiment runner: configuration documents, data selection, training,
 * metrics files and run comparison.
 *
 * A configuration is flat `key = value` text; `#` starts a comment. Keys:
 *
 *   data.source              synthetic | idx
 *   data.images, data.labels IDX files (idx source)
 *   data.class_a, data.class_b          digits mapped to labels 0 and 1
 *   data.train_per_class, data.test_per_class
 *   data.dimension, data.separation     synthetic source only
 *   optimizer.kind           gfo | adam
 *   optimizer.loops, optimizer.batch_size, optimizer.reference_size
 *   optimizer.stop_cost, optimizer.zero_feature_epsilon          (gfo)
 *   optimizer.learning_rate, optimizer.beta1, optimizer.beta2,
 *   optimizer.epsilon_hat                                        (adam)
 *   noise.kind               none | bitflip | depolarizing | phasedamping |
 *                            phaseflip | amplitudedamping
 *   noise.probability        defaults to 0.05 when a noise kind is named
 *   execution.mode           analytic | shots
 *   execution.shots
 *   output.dir
 *   seed
 */

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "gfoq/features.hpp"
#include "gfoq/model.hpp"
#include "gfoq/optim.hpp"
#include "gfoq/qsim.hpp"

namespace gfoq::harness {

inline constexpr double kDefaultNoiseProbability = 0.05;
inline constexpr std::uint64_t kDefaultSeed = 7;

struct SyntheticSource {
    std::size_t dimension = 32;
    std::size_t train_per_class = 200;
    std::size_t test_per_class = 100;
    double separation = 1.0;
};

struct IdxSource {
    std::filesystem::path images;
    std::filesystem::path labels;
    int class_a = 0;
    int class_b = 1;
    std::size_t train_per_class = 10000;
    std::size_t test_per_class = 1000;
};

using DataSource = std::variant<SyntheticSource, IdxSource>;
using OptimizerConfig = std::variant<optim::GfoConfig, optim::AdamConfig>;

struct ExperimentConfig {
    DataSource data = SyntheticSource{};
    OptimizerConfig optimizer = optim::GfoConfig{};
    qsim::NoiseChannel noise;
    model::Execution execution = model::Analytic{};
    std::filesystem::path output_dir = "runs/latest";
    std::uint64_t seed = kDefaultSeed;
};

struct ParseOptions {
    /// Relative data paths are resolved against this directory.
    std::filesystem::path base_dir;
    /// Require IDX files to exist.
    bool check_files = true;
};

/// Throws ValidationError naming the key and the violated constraint.
ExperimentConfig parse_config(std::string_view text, const ParseOptions &options = {});
/// Reads and parses a file; relative data paths resolve against its directory.
ExperimentConfig load_config(const std::filesystem::path &path);
/// Canonical document with every key spelled out; parse_config accepts it.
std::string config_to_text(const ExperimentConfig &config);

std::string_view optimizer_name(const ExperimentConfig &config);

struct RunReport {
    ExperimentConfig config;
    std::vector<optim::TrainRecord> records;
    model::ParameterVector final_theta;
    double initial_cost = 0.0;
    double total_wall_seconds = 0.0;
};

/// Loads or generates the train/test split a config describes.
std::pair<features::Dataset, features::Dataset> load_data(const ExperimentConfig &config);

/// Trains the configured optimizer. Writes nothing to disk.
RunReport run_experiment(const ExperimentConfig &config);

inline constexpr std::string_view kMetricsHeader =
    "loop,elapsed_seconds,cost,train_accuracy,test_accuracy,accepted_updates,skipped_components";

/// metrics.csv body (header plus one row per record).
std::string metrics_csv(const std::vector<optim::TrainRecord> &records);
std::vector<optim::TrainRecord> parse_metrics_csv(std::string_view text);

/// Writes `metrics.csv` and `summary.json` into `directory`, creating it if
/// needed. Throws IoError with the offending path.
void write_metrics(const RunReport &report, const std::filesystem::path &directory);
/// Reads a directory produced by write_metrics.
RunReport read_report(const std::filesystem::path &directory);

inline constexpr std::array<double, 3> kCrossingThresholds{0.8, 0.9, 0.95};

struct ThresholdCrossing {
    double threshold = 0.0;
    /// First elapsed_seconds with test accuracy >= threshold, if any.
    std::optional<double> seconds_a;
    std::optional<double> seconds_b;
};

struct Comparison {
    std::string label_a;
    std::string label_b;
    std::vector<ThresholdCrossing> crossings;
    double final_cost_a = 0.0;
    double final_cost_b = 0.0;
    double final_accuracy_a = 0.0;
    double final_accuracy_b = 0.0;
};

std::optional<double> first_crossing(const std::vector<optim::TrainRecord> &records,
                                     double threshold);

/// Throws ComparisonError unless both runs used the same data, seed, noise and
/// execution mode.
Comparison compare_runs(const RunReport &a, const RunReport &b);
std::string format_comparison(const Comparison &comparison);

} // namespace gfoq::harness
