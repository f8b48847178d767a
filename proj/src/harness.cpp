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

#include "gfoq/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "gfoq/error.hpp"

namespace gfoq::harness {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::set<std::string, std::less<>> kKnownKeys{
    "data.source",           "data.images",          "data.labels",
    "data.class_a",          "data.class_b",         "data.train_per_class",
    "data.test_per_class",   "data.dimension",       "data.separation",
    "optimizer.kind",        "optimizer.loops",      "optimizer.batch_size",
    "optimizer.reference_size", "optimizer.stop_cost", "optimizer.zero_feature_epsilon",
    "optimizer.learning_rate", "optimizer.beta1",    "optimizer.beta2",
    "optimizer.epsilon_hat", "noise.kind",           "noise.probability",
    "execution.mode",        "execution.shots",      "output.dir",
    "seed"};

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

/// Key-value pairs with typed accessors; every access marks the key used so
/// leftovers can be reported as not applicable.
class Document {
  public:
    Document(std::string_view text)
    {
        std::size_t line_no = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            const auto end = std::min(text.find('\n', pos), text.size());
            std::string_view line = text.substr(pos, end - pos);
            pos = end + 1;
            ++line_no;
            if (const auto hash = line.find('#'); hash != std::string_view::npos) {
                line = line.substr(0, hash);
            }
            line = trim(line);
            if (line.empty()) {
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string_view::npos) {
                throw ValidationError("line " + std::to_string(line_no) +
                                      ": expected 'key = value'");
            }
            const std::string key(trim(line.substr(0, eq)));
            const std::string value(trim(line.substr(eq + 1)));
            if (!kKnownKeys.contains(key)) {
                throw ValidationError("unknown key '" + key + "'");
            }
            if (!values_.emplace(key, value).second) {
                throw ValidationError("key '" + key + "' appears more than once");
            }
        }
    }

    bool has(const std::string &key) const { return values_.contains(key); }

    std::optional<std::string> text(const std::string &key)
    {
        auto it = values_.find(key);
        if (it == values_.end()) {
            return std::nullopt;
        }
        used_.insert(key);
        return it->second;
    }

    std::string text_or(const std::string &key, std::string fallback)
    {
        return text(key).value_or(std::move(fallback));
    }

    std::uint64_t unsigned_or(const std::string &key, std::uint64_t fallback)
    {
        const auto raw = text(key);
        if (!raw) {
            return fallback;
        }
        std::uint64_t v = 0;
        const auto *end = raw->data() + raw->size();
        const auto [ptr, ec] = std::from_chars(raw->data(), end, v);
        if (ec != std::errc{} || ptr != end) {
            throw ValidationError(key + ": '" + *raw + "' is not a non-negative integer");
        }
        return v;
    }

    int int_or(const std::string &key, int fallback)
    {
        const auto raw = text(key);
        if (!raw) {
            return fallback;
        }
        int v = 0;
        const auto *end = raw->data() + raw->size();
        const auto [ptr, ec] = std::from_chars(raw->data(), end, v);
        if (ec != std::errc{} || ptr != end) {
            throw ValidationError(key + ": '" + *raw + "' is not an integer");
        }
        return v;
    }

    double real_or(const std::string &key, double fallback)
    {
        const auto raw = text(key);
        if (!raw) {
            return fallback;
        }
        double v = 0.0;
        const auto *end = raw->data() + raw->size();
        const auto [ptr, ec] = std::from_chars(raw->data(), end, v);
        if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
            throw ValidationError(key + ": '" + *raw + "' is not a finite number");
        }
        return v;
    }

    /// Throws for keys present but never read.
    void reject_unused(std::string_view context) const
    {
        for (const auto &[key, value] : values_) {
            if (!used_.contains(key)) {
                throw ValidationError("key '" + key + "' does not apply to " + std::string(context));
            }
        }
    }

  private:
    std::map<std::string, std::string, std::less<>> values_;
    std::set<std::string, std::less<>> used_;
};

void require(bool ok, const std::string &key, const std::string &constraint)
{
    if (!ok) {
        throw ValidationError(key + ": must be " + constraint);
    }
}

std::vector<std::uint8_t> read_bytes(const fs::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string read_text(const fs::path &path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const fs::path &path, const std::string &text)
{
    std::ofstream out(path, std::ios::trunc);
    out << text;
    out.close();
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
}

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Independent stream seeds derived from the experiment seed.
enum class Stream : std::uint64_t { Init = 1, Training = 2, Shots = 3 };

std::uint64_t derive_seed(std::uint64_t seed, Stream stream)
{
    return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(stream)));
}

/// Config text minus optimizer and output lines: two runs are comparable when
/// these agree.
std::string task_signature(const ExperimentConfig &config)
{
    std::istringstream in(config_to_text(config));
    std::string line;
    std::string out;
    while (std::getline(in, line)) {
        if (line.starts_with("optimizer.") || line.starts_with("output.")) {
            continue;
        }
        out += line + '\n';
    }
    return out;
}

} // namespace

ExperimentConfig parse_config(std::string_view text, const ParseOptions &options)
{
    Document doc(text);
    ExperimentConfig cfg;

    const auto source = doc.text_or("data.source", "synthetic");
    if (source == "synthetic") {
        SyntheticSource s;
        s.dimension = doc.unsigned_or("data.dimension", s.dimension);
        s.train_per_class = doc.unsigned_or("data.train_per_class", s.train_per_class);
        s.test_per_class = doc.unsigned_or("data.test_per_class", s.test_per_class);
        s.separation = doc.real_or("data.separation", s.separation);
        require(s.dimension >= 1, "data.dimension", ">= 1");
        require(s.train_per_class >= 1, "data.train_per_class", ">= 1");
        require(s.separation >= 0.0, "data.separation", ">= 0");
        cfg.data = s;
    } else if (source == "idx") {
        IdxSource s;
        const auto images = doc.text("data.images");
        const auto labels = doc.text("data.labels");
        require(images.has_value(), "data.images", "set when data.source = idx");
        require(labels.has_value(), "data.labels", "set when data.source = idx");
        s.images = fs::path(*images);
        s.labels = fs::path(*labels);
        if (s.images.is_relative() && !options.base_dir.empty()) {
            s.images = options.base_dir / s.images;
        }
        if (s.labels.is_relative() && !options.base_dir.empty()) {
            s.labels = options.base_dir / s.labels;
        }
        if (options.check_files) {
            require(fs::is_regular_file(s.images), "data.images",
                    "an existing file (" + s.images.string() + ")");
            require(fs::is_regular_file(s.labels), "data.labels",
                    "an existing file (" + s.labels.string() + ")");
        }
        s.class_a = doc.int_or("data.class_a", s.class_a);
        s.class_b = doc.int_or("data.class_b", s.class_b);
        s.train_per_class = doc.unsigned_or("data.train_per_class", s.train_per_class);
        s.test_per_class = doc.unsigned_or("data.test_per_class", s.test_per_class);
        require(s.class_a >= 0 && s.class_a <= 9, "data.class_a", "a digit 0-9");
        require(s.class_b >= 0 && s.class_b <= 9, "data.class_b", "a digit 0-9");
        require(s.class_a != s.class_b, "data.class_b", "different from data.class_a");
        require(s.train_per_class >= 1, "data.train_per_class", ">= 1");
        cfg.data = s;
    } else {
        throw ValidationError("data.source: must be one of synthetic, idx (got '" + source + "')");
    }

    const auto kind = doc.text_or("optimizer.kind", "gfo");
    if (kind == "gfo") {
        optim::GfoConfig g;
        g.loops = doc.unsigned_or("optimizer.loops", g.loops);
        g.batch_size = doc.unsigned_or("optimizer.batch_size", g.batch_size);
        g.reference_set_size = doc.unsigned_or("optimizer.reference_size", g.reference_set_size);
        g.stop_cost = doc.real_or("optimizer.stop_cost", g.stop_cost);
        g.zero_feature_epsilon =
            doc.real_or("optimizer.zero_feature_epsilon", g.zero_feature_epsilon);
        require(g.batch_size >= 1, "optimizer.batch_size", ">= 1");
        require(g.reference_set_size >= 1, "optimizer.reference_size", ">= 1");
        require(g.zero_feature_epsilon > 0.0, "optimizer.zero_feature_epsilon", "> 0");
        cfg.optimizer = g;
    } else if (kind == "adam") {
        optim::AdamConfig a;
        a.loops = doc.unsigned_or("optimizer.loops", a.loops);
        a.batch_size = doc.unsigned_or("optimizer.batch_size", a.batch_size);
        a.reference_set_size = doc.unsigned_or("optimizer.reference_size", a.reference_set_size);
        a.learning_rate = doc.real_or("optimizer.learning_rate", a.learning_rate);
        a.beta1 = doc.real_or("optimizer.beta1", a.beta1);
        a.beta2 = doc.real_or("optimizer.beta2", a.beta2);
        a.epsilon_hat = doc.real_or("optimizer.epsilon_hat", a.epsilon_hat);
        require(a.batch_size >= 1, "optimizer.batch_size", ">= 1");
        require(a.reference_set_size >= 1, "optimizer.reference_size", ">= 1");
        require(a.learning_rate >= 0.0, "optimizer.learning_rate", ">= 0");
        require(a.beta1 >= 0.0 && a.beta1 < 1.0, "optimizer.beta1", "in [0, 1)");
        require(a.beta2 >= 0.0 && a.beta2 < 1.0, "optimizer.beta2", "in [0, 1)");
        require(a.epsilon_hat > 0.0, "optimizer.epsilon_hat", "> 0");
        cfg.optimizer = a;
    } else {
        throw ValidationError("optimizer.kind: must be one of gfo, adam (got '" + kind + "')");
    }

    const auto noise_name = doc.text_or("noise.kind", "none");
    qsim::NoiseKind noise_kind;
    try {
        noise_kind = qsim::parse_noise_kind(noise_name);
    } catch (const DomainError &) {
        throw ValidationError("noise.kind: must be one of none, bitflip, depolarizing, "
                              "phasedamping, phaseflip, amplitudedamping (got '" +
                              noise_name + "')");
    }
    const double default_p = noise_kind == qsim::NoiseKind::None ? 0.0 : kDefaultNoiseProbability;
    const double p = doc.real_or("noise.probability", default_p);
    require(p >= 0.0 && p <= 1.0, "noise.probability", "in [0, 1]");
    cfg.noise = qsim::NoiseChannel(noise_kind, p);

    const auto mode = doc.text_or("execution.mode", "analytic");
    if (mode == "analytic") {
        cfg.execution = model::Analytic{};
    } else if (mode == "shots") {
        model::Shots shots;
        shots.count = doc.unsigned_or("execution.shots", shots.count);
        require(shots.count >= 1, "execution.shots", ">= 1");
        cfg.execution = shots;
    } else {
        throw ValidationError("execution.mode: must be one of analytic, shots (got '" + mode + "')");
    }

    cfg.output_dir = doc.text_or("output.dir", cfg.output_dir.string());
    cfg.seed = doc.unsigned_or("seed", cfg.seed);

    doc.reject_unused("data.source = " + source + ", optimizer.kind = " + kind +
                      ", execution.mode = " + mode);
    return cfg;
}

ExperimentConfig load_config(const fs::path &path)
{
    const auto text = read_text(path);
    try {
        return parse_config(text, {path.parent_path(), true});
    } catch (const ValidationError &e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

std::string config_to_text(const ExperimentConfig &config)
{
    std::ostringstream out;
    if (const auto *s = std::get_if<SyntheticSource>(&config.data)) {
        out << "data.source = synthetic\n"
            << "data.dimension = " << s->dimension << '\n'
            << "data.train_per_class = " << s->train_per_class << '\n'
            << "data.test_per_class = " << s->test_per_class << '\n'
            << "data.separation = " << format_double(s->separation) << '\n';
    } else {
        const auto &idx = std::get<IdxSource>(config.data);
        out << "data.source = idx\n"
            << "data.images = " << idx.images.string() << '\n'
            << "data.labels = " << idx.labels.string() << '\n'
            << "data.class_a = " << idx.class_a << '\n'
            << "data.class_b = " << idx.class_b << '\n'
            << "data.train_per_class = " << idx.train_per_class << '\n'
            << "data.test_per_class = " << idx.test_per_class << '\n';
    }
    if (const auto *g = std::get_if<optim::GfoConfig>(&config.optimizer)) {
        out << "optimizer.kind = gfo\n"
            << "optimizer.loops = " << g->loops << '\n'
            << "optimizer.batch_size = " << g->batch_size << '\n'
            << "optimizer.reference_size = " << g->reference_set_size << '\n'
            << "optimizer.stop_cost = " << format_double(g->stop_cost) << '\n'
            << "optimizer.zero_feature_epsilon = " << format_double(g->zero_feature_epsilon)
            << '\n';
    } else {
        const auto &a = std::get<optim::AdamConfig>(config.optimizer);
        out << "optimizer.kind = adam\n"
            << "optimizer.loops = " << a.loops << '\n'
            << "optimizer.batch_size = " << a.batch_size << '\n'
            << "optimizer.reference_size = " << a.reference_set_size << '\n'
            << "optimizer.learning_rate = " << format_double(a.learning_rate) << '\n'
            << "optimizer.beta1 = " << format_double(a.beta1) << '\n'
            << "optimizer.beta2 = " << format_double(a.beta2) << '\n'
            << "optimizer.epsilon_hat = " << format_double(a.epsilon_hat) << '\n';
    }
    out << "noise.kind = " << qsim::to_string(config.noise.kind()) << '\n'
        << "noise.probability = " << format_double(config.noise.probability()) << '\n';
    if (const auto *shots = std::get_if<model::Shots>(&config.execution)) {
        out << "execution.mode = shots\n"
            << "execution.shots = " << shots->count << '\n';
    } else {
        out << "execution.mode = analytic\n";
    }
    out << "output.dir = " << config.output_dir.string() << '\n'
        << "seed = " << config.seed << '\n';
    return out.str();
}

std::string_view optimizer_name(const ExperimentConfig &config)
{
    return std::holds_alternative<optim::GfoConfig>(config.optimizer) ? "gfo" : "adam";
}

std::pair<features::Dataset, features::Dataset> load_data(const ExperimentConfig &config)
{
    std::mt19937_64 rng(config.seed);
    if (const auto *s = std::get_if<SyntheticSource>(&config.data)) {
        auto train = features::synth_blobs(s->dimension, s->train_per_class, s->separation, rng);
        auto test = features::synth_blobs(s->dimension, s->test_per_class, s->separation, rng);
        return {std::move(train), std::move(test)};
    }
    const auto &s = std::get<IdxSource>(config.data);
    try {
        const auto images = features::parse_idx_images(read_bytes(s.images));
        const auto labels = features::parse_idx_labels(read_bytes(s.labels));
        return features::build_binary_dataset(images, labels, s.class_a, s.class_b,
                                              s.train_per_class, s.test_per_class, rng);
    } catch (const FormatError &e) {
        throw FormatError(s.images.string() + " / " + s.labels.string() + ": " + e.what());
    } catch (const CapacityError &e) {
        throw CapacityError(s.images.string() + " / " + s.labels.string() + ": " + e.what());
    }
}

RunReport run_experiment(const ExperimentConfig &config)
{
    const auto wall_start = std::chrono::steady_clock::now();
    auto [train, test] = load_data(config);
    if (!train.has_both_classes()) {
        throw CapacityError("training set must contain both classes");
    }

    model::ModelConfig model_config{train.dimension, config.noise, config.execution};
    if (auto *shots = std::get_if<model::Shots>(&model_config.execution)) {
        shots->seed = derive_seed(config.seed, Stream::Shots);
    }

    std::mt19937_64 init_rng(derive_seed(config.seed, Stream::Init));
    const auto initial = optim::random_parameters(train.dimension, init_rng);
    const auto training_seed = derive_seed(config.seed, Stream::Training);

    optim::TrainResult result;
    if (const auto *g = std::get_if<optim::GfoConfig>(&config.optimizer)) {
        auto gfo = *g;
        gfo.seed = training_seed;
        result = optim::gfo_train(initial, train, test, gfo, model_config);
    } else {
        auto adam = std::get<optim::AdamConfig>(config.optimizer);
        adam.seed = training_seed;
        result = optim::adam_train(initial, train, test, adam, model_config);
    }

    RunReport report;
    report.config = config;
    report.records = std::move(result.records);
    report.final_theta = std::move(result.theta);
    report.initial_cost = result.cost_trace.front();
    report.total_wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
    return report;
}

std::string metrics_csv(const std::vector<optim::TrainRecord> &records)
{
    std::string out(kMetricsHeader);
    out += '\n';
    for (const auto &r : records) {
        out += std::to_string(r.loop_index) + ',' + format_double(r.elapsed_seconds) + ',' +
               format_double(r.cost_reference) + ',' + format_double(r.train_accuracy) + ',' +
               format_double(r.test_accuracy) + ',' + std::to_string(r.accepted_updates) + ',' +
               std::to_string(r.skipped_components) + '\n';
    }
    return out;
}

std::vector<optim::TrainRecord> parse_metrics_csv(std::string_view text)
{
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || trim(line) != kMetricsHeader) {
        throw FormatError("metrics.csv: missing or unexpected header");
    }
    std::vector<optim::TrainRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        std::vector<std::string> cells;
        std::istringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ',')) {
            cells.push_back(std::string(trim(cell)));
        }
        if (cells.size() != 7) {
            throw FormatError("metrics.csv line " + std::to_string(line_no) + ": expected 7 columns");
        }
        try {
            optim::TrainRecord r;
            r.loop_index = std::stoull(cells[0]);
            r.elapsed_seconds = std::stod(cells[1]);
            r.cost_reference = std::stod(cells[2]);
            r.train_accuracy = std::stod(cells[3]);
            r.test_accuracy = std::stod(cells[4]);
            r.accepted_updates = std::stoull(cells[5]);
            r.skipped_components = std::stoull(cells[6]);
            records.push_back(r);
        } catch (const std::logic_error &) {
            throw FormatError("metrics.csv line " + std::to_string(line_no) + ": bad number");
        }
    }
    return records;
}

void write_metrics(const RunReport &report, const fs::path &directory)
{
    std::error_code ec;
    fs::create_directories(directory, ec);
    if (ec) {
        throw IoError("cannot create " + directory.string() + ": " + ec.message());
    }
    write_text(directory / "metrics.csv", metrics_csv(report.records));

    json summary;
    summary["optimizer"] = optimizer_name(report.config);
    summary["config"] = config_to_text(report.config);
    summary["initial_cost"] = report.initial_cost;
    summary["total_wall_seconds"] = report.total_wall_seconds;
    summary["theta"] = std::vector<double>(report.final_theta.values().begin(),
                                           report.final_theta.values().end());
    summary["timing"] = "elapsed_seconds is optimizer time accumulated per loop; "
                        "accuracy and reference-cost evaluation for the records is excluded";
    if (!report.records.empty()) {
        const auto &last = report.records.back();
        summary["final"] = {{"loop", last.loop_index},
                            {"cost", last.cost_reference},
                            {"train_accuracy", last.train_accuracy},
                            {"test_accuracy", last.test_accuracy},
                            {"elapsed_seconds", last.elapsed_seconds}};
    }
    write_text(directory / "summary.json", summary.dump(2) + '\n');
}

RunReport read_report(const fs::path &directory)
{
    RunReport report;
    json summary;
    try {
        summary = json::parse(read_text(directory / "summary.json"));
        report.config = parse_config(summary.at("config").get<std::string>(), {{}, false});
        report.initial_cost = summary.at("initial_cost").get<double>();
        report.total_wall_seconds = summary.at("total_wall_seconds").get<double>();
        report.final_theta = model::ParameterVector(summary.at("theta").get<std::vector<double>>());
    } catch (const json::exception &e) {
        throw FormatError((directory / "summary.json").string() + ": " + e.what());
    }
    try {
        report.records = parse_metrics_csv(read_text(directory / "metrics.csv"));
    } catch (const FormatError &e) {
        throw FormatError(directory.string() + "/" + e.what());
    }
    return report;
}

std::optional<double> first_crossing(const std::vector<optim::TrainRecord> &records,
                                     double threshold)
{
    for (const auto &r : records) {
        if (r.test_accuracy >= threshold) {
            return r.elapsed_seconds;
        }
    }
    return std::nullopt;
}

Comparison compare_runs(const RunReport &a, const RunReport &b)
{
    if (task_signature(a.config) != task_signature(b.config)) {
        throw ComparisonError("runs differ in data, noise, execution mode or seed");
    }
    if (a.records.empty() || b.records.empty()) {
        throw ComparisonError("both runs need at least one record");
    }
    Comparison c;
    c.label_a = optimizer_name(a.config);
    c.label_b = optimizer_name(b.config);
    for (double t : kCrossingThresholds) {
        c.crossings.push_back({t, first_crossing(a.records, t), first_crossing(b.records, t)});
    }
    c.final_cost_a = a.records.back().cost_reference;
    c.final_cost_b = b.records.back().cost_reference;
    c.final_accuracy_a = a.records.back().test_accuracy;
    c.final_accuracy_b = b.records.back().test_accuracy;
    return c;
}

std::string format_comparison(const Comparison &c)
{
    auto when = [](const std::optional<double> &s) {
        return s ? format_double(*s) + " s" : std::string("never");
    };
    std::ostringstream out;
    out << "run a: " << c.label_a << ", run b: " << c.label_b << '\n';
    for (const auto &x : c.crossings) {
        out << "test accuracy >= " << format_double(x.threshold) << ": a " << when(x.seconds_a)
            << ", b " << when(x.seconds_b) << '\n';
    }
    out << "final cost: a " << format_double(c.final_cost_a) << ", b "
        << format_double(c.final_cost_b) << '\n'
        << "final test accuracy: a " << format_double(c.final_accuracy_a) << ", b "
        << format_double(c.final_accuracy_b) << '\n';
    return out.str();
}

} // namespace gfoq::harness
