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
 * Data ingestion for the binary classifier: MNIST IDX containers, rough-grid
 * feature reduction, a synthetic two-blob generator and batch sampling.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace gfoq::features {

inline constexpr std::uint32_t kIdxImageMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelMagic = 0x00000801;
inline constexpr std::size_t kImageSide = 28;

/// Rough-grid geometry: columns [2, 25] of the 28x28 image are kept and the
/// 28x24 window is cut into 4 x 8 cells of 7 rows by 3 columns.
inline constexpr std::size_t kCropFirstColumn = 2;
inline constexpr std::size_t kGridRows = 4;
inline constexpr std::size_t kGridCols = 8;
inline constexpr std::size_t kCellHeight = 7;
inline constexpr std::size_t kCellWidth = 3;
inline constexpr std::size_t kRoughGridDimension = kGridRows * kGridCols;

/// Row-major grayscale image.
struct ImageGrid {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::uint8_t> pixels;

    std::uint8_t at(std::size_t row, std::size_t col) const { return pixels[row * cols + col]; }

    static ImageGrid filled(std::size_t rows, std::size_t cols, std::uint8_t value)
    {
        return {rows, cols, std::vector<std::uint8_t>(rows * cols, value)};
    }

    friend bool operator==(const ImageGrid &, const ImageGrid &) = default;
};

struct Sample {
    std::vector<double> features;
    int label = 0;
};

/// Labelled samples of one shared dimension. `class_map` records which
/// original label became 0 and 1 (empty for synthetic data).
struct Dataset {
    std::size_t dimension = 0;
    std::vector<Sample> samples;
    std::map<int, int> class_map;

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
    bool has_both_classes() const;
    /// Throws ShapeError or DomainError if any sample breaks the invariants.
    void validate() const;
};

/// Throws FormatError on a wrong magic, non-28 dimensions, or a payload that
/// is shorter or longer than the header declares.
std::vector<ImageGrid> parse_idx_images(std::span<const std::uint8_t> bytes);
std::vector<int> parse_idx_labels(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> write_idx_images(std::span<const ImageGrid> grids);
std::vector<std::uint8_t> write_idx_labels(std::span<const int> labels);

/// 32 cell means scaled to [0, 1]. Throws ShapeError unless the grid is 28x28.
std::vector<double> rough_grid_features(const ImageGrid &grid);

/// Samples `train_per_class` + `test_per_class` images of each digit without
/// replacement. class_a becomes label 0 and class_b label 1. Throws
/// CapacityError when a digit has too few images.
std::pair<Dataset, Dataset> build_binary_dataset(std::span<const ImageGrid> images,
                                                 std::span<const int> labels, int class_a,
                                                 int class_b, std::size_t train_per_class,
                                                 std::size_t test_per_class,
                                                 std::mt19937_64 &rng);

/// Half-width of the uniform box around each synthetic class center.
inline constexpr double kBlobHalfWidth = 0.03;

/// Two uniform boxes, class 0 centered at 0.3 and class 1 at
/// 0.3 + 0.4 * separation in every coordinate, clipped to [0, 1]. Samples
/// alternate 0, 1, 0, 1, ...
Dataset synth_blobs(std::size_t n_dim, std::size_t per_class, double separation,
                    std::mt19937_64 &rng, double half_width = kBlobHalfWidth);

/// Uniform sampling with replacement. Throws CapacityError on an empty dataset
/// and DomainError on batch_size == 0.
std::vector<Sample> draw_batch(const Dataset &dataset, std::size_t batch_size,
                               std::mt19937_64 &rng);

} // namespace gfoq::features
