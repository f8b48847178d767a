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

#include "gfoq/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <string>

#include "gfoq/error.hpp"

namespace gfoq::features {

namespace {

std::string hex32(std::uint32_t v)
{
    char buf[16];
    std::snprintf(buf, sizeof buf, "0x%08X", v);
    return buf;
}

class ByteReader {
  public:
    explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::uint32_t u32(const char *field)
    {
        if (remaining() < 4) {
            throw FormatError(std::string("truncated header: missing ") + field);
        }
        std::uint32_t v = 0;
        for (int k = 0; k < 4; ++k) {
            v = (v << 8) | bytes_[pos_++];
        }
        return v;
    }

    std::span<const std::uint8_t> take(std::size_t n)
    {
        auto out = bytes_.subspan(pos_, n);
        pos_ += n;
        return out;
    }

    std::size_t remaining() const { return bytes_.size() - pos_; }

  private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

void expect_magic(ByteReader &in, std::uint32_t expected)
{
    const std::uint32_t magic = in.u32("magic");
    if (magic != expected) {
        throw FormatError("unexpected magic " + hex32(magic) + " (expected " + hex32(expected) + ")");
    }
}

void expect_payload(const ByteReader &in, std::size_t needed)
{
    if (in.remaining() < needed) {
        throw FormatError("truncated payload: count field needs " + std::to_string(needed) +
                          " bytes, stream has " + std::to_string(in.remaining()));
    }
    if (in.remaining() > needed) {
        throw FormatError("payload longer than count field declares: " +
                          std::to_string(in.remaining() - needed) + " trailing bytes");
    }
}

void put_u32(std::vector<std::uint8_t> &out, std::uint32_t v)
{
    for (int shift = 24; shift >= 0; shift -= 8) {
        out.push_back(static_cast<std::uint8_t>((v >> shift) & 0xFF));
    }
}

std::uint32_t checked_u32(std::size_t v, const char *what)
{
    if (v > 0xFFFFFFFFu) {
        throw FormatError(std::string(what) + " does not fit in a 32-bit IDX field");
    }
    return static_cast<std::uint32_t>(v);
}

} // namespace

bool Dataset::has_both_classes() const
{
    bool zero = false;
    bool one = false;
    for (const auto &s : samples) {
        zero |= s.label == 0;
        one |= s.label == 1;
    }
    return zero && one;
}

void Dataset::validate() const
{
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const auto &s = samples[k];
        if (s.features.size() != dimension) {
            throw ShapeError("sample " + std::to_string(k) + " has " +
                             std::to_string(s.features.size()) + " features, dataset dimension is " +
                             std::to_string(dimension));
        }
        if (s.label != 0 && s.label != 1) {
            throw DomainError("sample " + std::to_string(k) + " has label " +
                              std::to_string(s.label) + ", expected 0 or 1");
        }
        for (double v : s.features) {
            if (!(v >= 0.0 && v <= 1.0)) {
                throw DomainError("sample " + std::to_string(k) + " has a feature outside [0, 1]");
            }
        }
    }
}

std::vector<ImageGrid> parse_idx_images(std::span<const std::uint8_t> bytes)
{
    ByteReader in(bytes);
    expect_magic(in, kIdxImageMagic);
    const std::uint32_t count = in.u32("count");
    const std::uint32_t rows = in.u32("rows");
    const std::uint32_t cols = in.u32("cols");
    if (rows != kImageSide) {
        throw FormatError("rows = " + std::to_string(rows) + ", expected 28");
    }
    if (cols != kImageSide) {
        throw FormatError("cols = " + std::to_string(cols) + ", expected 28");
    }
    const std::size_t per_image = static_cast<std::size_t>(rows) * cols;
    expect_payload(in, per_image * count);

    std::vector<ImageGrid> grids;
    grids.reserve(count);
    for (std::uint32_t k = 0; k < count; ++k) {
        auto px = in.take(per_image);
        grids.push_back({rows, cols, {px.begin(), px.end()}});
    }
    return grids;
}

std::vector<int> parse_idx_labels(std::span<const std::uint8_t> bytes)
{
    ByteReader in(bytes);
    expect_magic(in, kIdxLabelMagic);
    const std::uint32_t count = in.u32("count");
    expect_payload(in, count);
    auto raw = in.take(count);
    return {raw.begin(), raw.end()};
}

std::vector<std::uint8_t> write_idx_images(std::span<const ImageGrid> grids)
{
    const std::size_t rows = grids.empty() ? kImageSide : grids.front().rows;
    const std::size_t cols = grids.empty() ? kImageSide : grids.front().cols;
    std::vector<std::uint8_t> out;
    out.reserve(16 + grids.size() * rows * cols);
    put_u32(out, kIdxImageMagic);
    put_u32(out, checked_u32(grids.size(), "image count"));
    put_u32(out, checked_u32(rows, "rows"));
    put_u32(out, checked_u32(cols, "cols"));
    for (const auto &g : grids) {
        if (g.rows != rows || g.cols != cols || g.pixels.size() != rows * cols) {
            throw ShapeError("all grids written to one IDX file must share a shape");
        }
        out.insert(out.end(), g.pixels.begin(), g.pixels.end());
    }
    return out;
}

std::vector<std::uint8_t> write_idx_labels(std::span<const int> labels)
{
    std::vector<std::uint8_t> out;
    out.reserve(8 + labels.size());
    put_u32(out, kIdxLabelMagic);
    put_u32(out, checked_u32(labels.size(), "label count"));
    for (int l : labels) {
        if (l < 0 || l > 255) {
            throw DomainError("label " + std::to_string(l) + " does not fit in one byte");
        }
        out.push_back(static_cast<std::uint8_t>(l));
    }
    return out;
}

std::vector<double> rough_grid_features(const ImageGrid &grid)
{
    if (grid.rows != kImageSide || grid.cols != kImageSide ||
        grid.pixels.size() != kImageSide * kImageSide) {
        throw ShapeError("rough-grid features need a 28x28 grid, got " + std::to_string(grid.rows) +
                         "x" + std::to_string(grid.cols));
    }
    constexpr double kCellPixels = kCellHeight * kCellWidth;
    std::vector<double> out(kRoughGridDimension, 0.0);
    for (std::size_t gr = 0; gr < kGridRows; ++gr) {
        for (std::size_t gc = 0; gc < kGridCols; ++gc) {
            unsigned sum = 0;
            for (std::size_t r = 0; r < kCellHeight; ++r) {
                for (std::size_t c = 0; c < kCellWidth; ++c) {
                    sum += grid.at(gr * kCellHeight + r, kCropFirstColumn + gc * kCellWidth + c);
                }
            }
            out[gr * kGridCols + gc] = static_cast<double>(sum) / kCellPixels / 255.0;
        }
    }
    return out;
}

std::pair<Dataset, Dataset> build_binary_dataset(std::span<const ImageGrid> images,
                                                 std::span<const int> labels, int class_a,
                                                 int class_b, std::size_t train_per_class,
                                                 std::size_t test_per_class, std::mt19937_64 &rng)
{
    if (images.size() != labels.size()) {
        throw ShapeError("image count " + std::to_string(images.size()) + " != label count " +
                         std::to_string(labels.size()));
    }
    if (class_a == class_b) {
        throw DomainError("class_a and class_b must differ");
    }

    Dataset train{kRoughGridDimension, {}, {{class_a, 0}, {class_b, 1}}};
    Dataset test = train;
    const std::size_t wanted = train_per_class + test_per_class;

    for (const auto &[digit, label] : train.class_map) {
        std::vector<std::size_t> pool;
        for (std::size_t k = 0; k < labels.size(); ++k) {
            if (labels[k] == digit) {
                pool.push_back(k);
            }
        }
        if (pool.size() < wanted) {
            throw CapacityError("digit " + std::to_string(digit) + " has " +
                                std::to_string(pool.size()) + " images, " + std::to_string(wanted) +
                                " requested");
        }
        // Partial Fisher-Yates: the first `wanted` slots become a uniform draw
        // without replacement.
        for (std::size_t k = 0; k < wanted; ++k) {
            std::uniform_int_distribution<std::size_t> pick(k, pool.size() - 1);
            std::swap(pool[k], pool[pick(rng)]);
        }
        for (std::size_t k = 0; k < wanted; ++k) {
            Sample s{rough_grid_features(images[pool[k]]), label};
            (k < train_per_class ? train : test).samples.push_back(std::move(s));
        }
    }
    return {std::move(train), std::move(test)};
}

Dataset synth_blobs(std::size_t n_dim, std::size_t per_class, double separation,
                    std::mt19937_64 &rng, double half_width)
{
    if (n_dim == 0) {
        throw DomainError("synthetic dimension must be at least 1");
    }
    if (!(separation >= 0.0) || !std::isfinite(separation)) {
        throw DomainError("separation must be a finite value >= 0");
    }
    std::uniform_real_distribution<double> offset(-half_width, half_width);
    const double centers[2] = {0.3, 0.3 + 0.4 * separation};

    Dataset out;
    out.dimension = n_dim;
    out.samples.reserve(2 * per_class);
    for (std::size_t k = 0; k < 2 * per_class; ++k) {
        Sample s;
        s.label = static_cast<int>(k % 2);
        s.features.resize(n_dim);
        for (auto &v : s.features) {
            v = std::clamp(centers[s.label] + offset(rng), 0.0, 1.0);
        }
        out.samples.push_back(std::move(s));
    }
    return out;
}

std::vector<Sample> draw_batch(const Dataset &dataset, std::size_t batch_size,
                               std::mt19937_64 &rng)
{
    if (batch_size == 0) {
        throw DomainError("batch size must be at least 1");
    }
    if (dataset.empty()) {
        throw CapacityError("cannot draw a batch from an empty dataset");
    }
    std::uniform_int_distribution<std::size_t> pick(0, dataset.size() - 1);
    std::vector<Sample> batch;
    batch.reserve(batch_size);
    for (std::size_t k = 0; k < batch_size; ++k) {
        batch.push_back(dataset.samples[pick(rng)]);
    }
    return batch;
}

} // namespace gfoq::features
