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

// Acceptance suite: one line per criterion. PASS and FAIL are hard verdicts;
// FLAG marks a soft criterion that did not hold and does not fail the run.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <functional>
#include <iterator>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gfoq/checks.hpp"
#include "gfoq/error.hpp"
#include "gfoq/features.hpp"
#include "gfoq/harness.hpp"
#include "gfoq/optim.hpp"

namespace {

using namespace gfoq;

enum class Verdict { Pass, Fail, Flag };

struct Outcome {
    Verdict verdict = Verdict::Fail;
    std::string detail;
};

constexpr std::uint64_t kSeeds[] = {7, 8, 9, 10, 11};

double since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char *format, double a, double b = 0.0, double c = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, format, a, b, c);
    return buf;
}

Outcome from_check(const checks::CheckResult &r, double limit_seconds)
{
    Outcome o;
    const bool fast = r.seconds < limit_seconds;
    o.verdict = r.passed && fast ? Verdict::Pass : Verdict::Fail;
    o.detail = fmt("worst %.3g (tol %.0e), ", r.worst_error, r.tolerance) +
               std::to_string(r.cases) + " cases, " + fmt("%.2f s (limit %.0f s)", r.seconds, limit_seconds);
    if (!r.passed && !r.detail.empty()) {
        o.detail += ", worst case " + r.detail;
    }
    return o;
}

std::string seed_line(std::uint64_t seed, std::string_view extra = "")
{
    return "seed = " + std::to_string(seed) + "\n" + std::string(extra);
}

Outcome monotonicity()
{
    Outcome o{Verdict::Pass, ""};
    std::size_t accepted = 0;
    std::size_t runs = 0;
    for (auto kind : {qsim::NoiseKind::None, qsim::NoiseKind::BitFlip, qsim::NoiseKind::Depolarizing,
                      qsim::NoiseKind::PhaseDamping, qsim::NoiseKind::PhaseFlip,
                      qsim::NoiseKind::AmplitudeDamping}) {
        for (auto seed : kSeeds) {
            auto cfg = harness::parse_config(seed_line(seed));
            cfg.noise = qsim::NoiseChannel(kind, kind == qsim::NoiseKind::None ? 0.0 : 0.05);
            const auto [train, test] = harness::load_data(cfg);
            std::mt19937_64 rng(seed);
            auto gfo = std::get<optim::GfoConfig>(cfg.optimizer);
            gfo.seed = seed;
            const model::ModelConfig model_config{train.dimension, cfg.noise, model::Analytic{}};
            const auto result =
                optim::gfo_train(optim::random_parameters(train.dimension, rng), train, test, gfo, model_config);
            ++runs;
            accepted += result.cost_trace.size() - 1;
            for (std::size_t k = 1; k < result.cost_trace.size(); ++k) {
                if (!(result.cost_trace[k] < result.cost_trace[k - 1])) {
                    o.verdict = Verdict::Fail;
                    o.detail = "cost-now rose at accept " + std::to_string(k) + " (" +
                               std::string(qsim::to_string(kind)) + ", seed " + std::to_string(seed) + ")";
                    return o;
                }
            }
            for (std::size_t k = 1; k < result.records.size(); ++k) {
                if (result.records[k].cost_reference > result.records[k - 1].cost_reference) {
                    o.verdict = Verdict::Fail;
                    o.detail = "reference cost rose at loop " + std::to_string(k + 1);
                    return o;
                }
            }
        }
    }
    o.detail = std::to_string(runs) + " runs, " + std::to_string(accepted) +
               " accepted updates, all strictly decreasing";
    return o;
}

Outcome end_to_end()
{
    const auto start = std::chrono::steady_clock::now();
    const auto report = harness::run_experiment(harness::parse_config(""));
    const double seconds = since(start);
    const double acc = report.records.back().test_accuracy;
    Outcome o;
    o.verdict = report.records.size() == 15 && acc >= 0.95 && seconds < 60.0 ? Verdict::Pass : Verdict::Fail;
    o.detail = fmt("final test accuracy %.4f (need >= 0.95), %.2f s (limit 60 s), ", acc, seconds) +
               std::to_string(report.records.size()) + " records";
    return o;
}

Outcome noise_robustness()
{
    Outcome o{Verdict::Pass, ""};
    std::size_t soft_misses = 0;
    std::ostringstream detail;
    for (auto kind : qsim::kNoisyKinds) {
        std::size_t passing = 0;
        double worst = 1.0;
        for (auto seed : kSeeds) {
            const auto cfg = harness::parse_config(
                seed_line(seed, "noise.kind = " + std::string(qsim::to_string(kind)) + "\n"));
            const double acc = harness::run_experiment(cfg).records.back().test_accuracy;
            worst = std::min(worst, acc);
            if (acc >= 0.85) {
                ++passing;
            } else {
                ++soft_misses;
            }
        }
        detail << qsim::to_string(kind) << " " << passing << "/5 (min " << fmt("%.3f", worst) << ") ";
        if (2 * passing <= std::size(kSeeds)) {
            o.verdict = Verdict::Fail;
        }
    }
    if (o.verdict == Verdict::Pass && soft_misses > 0) {
        detail << "; " << soft_misses << " single-seed misses flagged";
    }
    o.detail = detail.str();
    return o;
}

Outcome comparative_speed()
{
    std::size_t gfo_wins = 0;
    std::ostringstream detail;
    for (auto seed : kSeeds) {
        const auto gfo = harness::run_experiment(harness::parse_config(seed_line(seed)));
        const auto adam =
            harness::run_experiment(harness::parse_config(seed_line(seed, "optimizer.kind = adam\n")));
        const auto cmp = harness::compare_runs(gfo, adam);
        const auto &at90 = cmp.crossings[1];
        const bool win = at90.seconds_a && (!at90.seconds_b || *at90.seconds_a <= *at90.seconds_b);
        gfo_wins += win;
        auto show = [](const std::optional<double> &s) { return s ? fmt("%.2e s", *s) : std::string("never"); };
        detail << "seed " << seed << " gfo " << show(at90.seconds_a) << " vs adam " << show(at90.seconds_b)
               << "; ";
    }
    Outcome o;
    o.verdict = 2 * gfo_wins > std::size(kSeeds) ? Verdict::Pass : Verdict::Flag;
    o.detail = "gfo first to 0.9 on " + std::to_string(gfo_wins) + "/5 seeds: " + detail.str();
    return o;
}

std::string without_elapsed(const std::string &csv)
{
    std::istringstream in(csv);
    std::string line;
    std::string out;
    while (std::getline(in, line)) {
        const auto first = line.find(',');
        const auto second = line.find(',', first + 1);
        out += line.substr(0, first) + line.substr(second) + "\n";
    }
    return out;
}

Outcome determinism()
{
    const std::vector<std::string> docs{
        "",
        "optimizer.kind = adam\n",
        "noise.kind = depolarizing\n",
        "noise.kind = amplitudedamping\nseed = 3\n",
        "data.dimension = 8\nexecution.mode = shots\nexecution.shots = 300\n",
        "data.dimension = 8\noptimizer.kind = adam\nexecution.mode = shots\nnoise.kind = phasedamping\n",
    };
    for (const auto &doc : docs) {
        const auto cfg = harness::parse_config(doc);
        const auto a = harness::metrics_csv(harness::run_experiment(cfg).records);
        const auto b = harness::metrics_csv(harness::run_experiment(cfg).records);
        if (without_elapsed(a) != without_elapsed(b)) {
            return {Verdict::Fail, "metrics differ for config:\n" + doc};
        }
    }
    return {Verdict::Pass, std::to_string(docs.size()) + " configs reproduced row-for-row"};
}

std::vector<std::uint8_t> header(std::initializer_list<std::uint32_t> fields)
{
    std::vector<std::uint8_t> out;
    for (auto f : fields) {
        for (int shift = 24; shift >= 0; shift -= 8) {
            out.push_back(static_cast<std::uint8_t>(f >> shift));
        }
    }
    return out;
}

Outcome feature_fixtures()
{
    using namespace gfoq::features;
    const auto start = std::chrono::steady_clock::now();
    std::vector<std::string> failures;
    auto expect = [&](bool ok, const char *what) {
        if (!ok) {
            failures.emplace_back(what);
        }
    };
    auto throws_format = [](const std::function<void()> &f) {
        try {
            f();
        } catch (const FormatError &) {
            return true;
        }
        return false;
    };

    auto zero = header({0x803, 1, 28, 28});
    zero.resize(zero.size() + 784, 0);
    const auto zero_grids = parse_idx_images(zero);
    expect(zero_grids.size() == 1 && zero_grids[0] == ImageGrid::filled(28, 28, 0), "single zero image");

    auto bright = header({0x803, 2, 28, 28});
    bright.resize(bright.size() + 1568, 255);
    const auto bright_grids = parse_idx_images(bright);
    expect(bright_grids.size() == 2 && bright_grids[1] == ImageGrid::filled(28, 28, 255), "two 255 images");

    auto wrong = header({0x801, 1, 28, 28});
    wrong.resize(wrong.size() + 784, 0);
    expect(throws_format([&] { parse_idx_images(wrong); }), "wrong magic rejected");
    expect(throws_format([&] { parse_idx_images(header({0x803, 1, 28, 28})); }), "truncated payload");

    auto labels = header({0x801, 3});
    labels.insert(labels.end(), {0, 1, 7});
    expect(parse_idx_labels(labels) == std::vector<int>{0, 1, 7}, "labels 0 1 7");
    expect(parse_idx_labels(header({0x801, 0})).empty(), "empty label file");

    std::mt19937_64 rng(10);
    std::uniform_int_distribution<int> px(0, 255);
    std::vector<ImageGrid> grids(5, ImageGrid::filled(28, 28, 0));
    for (auto &g : grids) {
        for (auto &p : g.pixels) {
            p = static_cast<std::uint8_t>(px(rng));
        }
    }
    expect(parse_idx_images(write_idx_images(grids)) == grids, "image round trip");
    const std::vector<int> digits{3, 1, 4, 1, 5};
    expect(parse_idx_labels(write_idx_labels(digits)) == digits, "label round trip");

    expect(rough_grid_features(ImageGrid::filled(28, 28, 0)) == std::vector<double>(32, 0.0), "zero grid");
    expect(rough_grid_features(ImageGrid::filled(28, 28, 255)) == std::vector<double>(32, 1.0), "255 grid");
    for (std::size_t cell = 0; cell < kRoughGridDimension; ++cell) {
        auto g = ImageGrid::filled(28, 28, 0);
        const std::size_t row0 = (cell / kGridCols) * kCellHeight;
        const std::size_t col0 = kCropFirstColumn + (cell % kGridCols) * kCellWidth;
        for (std::size_t r = row0; r < row0 + kCellHeight; ++r) {
            for (std::size_t c = col0; c < col0 + kCellWidth; ++c) {
                g.pixels[r * 28 + c] = 255;
            }
        }
        std::vector<double> want(32, 0.0);
        want[cell] = 1.0;
        if (rough_grid_features(g) != want) {
            failures.push_back("single lit cell " + std::to_string(cell));
        }
    }

    const double seconds = since(start);
    Outcome o;
    o.verdict = failures.empty() && seconds < 1.0 ? Verdict::Pass : Verdict::Fail;
    o.detail = fmt("%.3f s (limit 1 s)", seconds);
    for (const auto &f : failures) {
        o.detail += "; failed: " + f;
    }
    return o;
}

const char *tag(Verdict v)
{
    switch (v) {
    case Verdict::Pass:
        return "PASS";
    case Verdict::Flag:
        return "FLAG";
    case Verdict::Fail:
        break;
    }
    return "FAIL";
}

} // namespace

int main()
{
    struct Criterion {
        int id;
        const char *name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "channel validity", [] { return from_check(checks::channel_validity(100, 1), 1.0); }},
        {2, "sinusoid exactness", [] { return from_check(checks::sinusoid_exactness(200, 50, 2), 5.0); }},
        {3, "closed-form argmax", [] { return from_check(checks::closed_form_argmax(200, 100000, 3), 30.0); }},
        {4, "gradient correctness", [] { return from_check(checks::gradient_agreement(50, 4), 10.0); }},
        {5, "monotonicity", monotonicity},
        {6, "end-to-end learning", end_to_end},
        {7, "noise robustness", noise_robustness},
        {8, "comparative speed (soft)", comparative_speed},
        {9, "determinism", determinism},
        {10, "idx and rough-grid fixtures", feature_fixtures},
    };

    int hard_failures = 0;
    for (const auto &c : criteria) {
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception &e) {
            o = {Verdict::Fail, std::string("threw: ") + e.what()};
        }
        hard_failures += o.verdict == Verdict::Fail;
        std::printf("[%s] %2d %s: %s\n", tag(o.verdict), c.id, c.name, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d hard failure(s)\n", hard_failures);
    return hard_failures == 0 ? 0 : 1;
}
