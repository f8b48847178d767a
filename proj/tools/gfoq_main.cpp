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

// gfoq: train the single-qubit classifier, compare runs, run self checks.
//
//   gfoq train --config run.cfg [--out DIR] [--seed N]
//   gfoq compare DIR_A DIR_B
//   gfoq selftest

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gfoq/checks.hpp"
#include "gfoq/harness.hpp"

namespace {

int run_train(const std::string &config_path, const std::optional<std::string> &out,
              const std::optional<std::uint64_t> &seed)
{
    auto config = gfoq::harness::load_config(config_path);
    if (seed) {
        config.seed = *seed;
    }
    if (out) {
        config.output_dir = *out;
    }
    const auto report = gfoq::harness::run_experiment(config);
    gfoq::harness::write_metrics(report, config.output_dir);

    const auto &last = report.records.back();
    std::printf("%s: %zu records, final cost %.6f, train accuracy %.4f, test accuracy %.4f, "
                "%.3f s -> %s\n",
                std::string(gfoq::harness::optimizer_name(config)).c_str(), report.records.size(),
                last.cost_reference, last.train_accuracy, last.test_accuracy,
                report.total_wall_seconds, config.output_dir.string().c_str());
    return 0;
}

int run_compare(const std::string &a, const std::string &b)
{
    const auto comparison =
        gfoq::harness::compare_runs(gfoq::harness::read_report(a), gfoq::harness::read_report(b));
    std::cout << gfoq::harness::format_comparison(comparison);
    return 0;
}

int run_selftest()
{
    const gfoq::checks::CheckResult results[] = {
        gfoq::checks::channel_validity(),
        gfoq::checks::sinusoid_exactness(),
        gfoq::checks::closed_form_argmax(),
        gfoq::checks::gradient_agreement(),
    };
    bool ok = true;
    for (const auto &r : results) {
        std::printf("[%s] %-26s cases=%zu worst=%.3e tol=%.0e %.2fs%s%s\n", r.passed ? "PASS" : "FAIL",
                    r.name.c_str(), r.cases, r.worst_error, r.tolerance, r.seconds,
                    r.passed ? "" : " at ", r.passed ? "" : r.detail.c_str());
        ok = ok && r.passed;
    }
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Gradient-free training of a single-qubit binary classifier"};
    app.require_subcommand(1);

    auto *train = app.add_subcommand("train", "Train a classifier and write metrics");
    std::string config_path;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    train->add_option("--config", config_path, "Configuration file")->required();
    train->add_option("--out", out, "Output directory (overrides output.dir)");
    train->add_option("--seed", seed, "Experiment seed (overrides seed)");

    auto *compare = app.add_subcommand("compare", "Compare two run directories");
    std::string report_a;
    std::string report_b;
    compare->add_option("report_a", report_a, "First run directory")->required();
    compare->add_option("report_b", report_b, "Second run directory")->required();

    auto *selftest = app.add_subcommand("selftest", "Run the oracle property suites");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*train) {
            return run_train(config_path, out, seed);
        }
        if (*compare) {
            return run_compare(report_a, report_b);
        }
        if (*selftest) {
            return run_selftest();
        }
    } catch (const std::exception &e) {
        std::fprintf(stderr, "gfoq: %s\n", e.what());
        return 1;
    }
    return 1;
}
