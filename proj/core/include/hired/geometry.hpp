// Copyright (C) 2026 The hired-engine Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hired {

/// Width x height in cells (sub-images or patches).
struct GridSize {
    std::size_t width = 0;
    std::size_t height = 0;

    std::size_t area() const noexcept { return width * height; }
    friend bool operator==(const GridSize&, const GridSize&) = default;
};

/// Parses "WxH" (e.g. "2x2").
GridSize parse_grid(std::string_view text);
std::string format_grid(GridSize grid);

/// Image partitioning: a full-image plus `grid` sub-images, each encoded on `patch_grid`.
struct PartitionLayout {
    GridSize grid;
    GridSize patch_grid;
    std::size_t image_width = 0;
    std::size_t image_height = 0;
    /// token_index_sets[i-1] = full-image token indices covered by sub-image i, ascending.
    std::vector<std::vector<std::size_t>> token_index_sets;

    std::size_t sub_image_count() const noexcept { return token_index_sets.size(); }
    std::size_t tokens_per_partition() const noexcept { return patch_grid.area(); }
};

/// Default anyres candidates: 1x1, 1x2, 2x1, 2x2, 1x3, 3x1, 1x4, 4x1.
std::vector<GridSize> default_grid_candidates();

/// Full-image token indices whose patch centre falls in sub-image `index`
/// (1-based, row-major over the grid). Independent of pixel size.
std::vector<std::size_t> map_subimage_tokens(GridSize grid, GridSize patch_grid, std::size_t index);

/// Layout for a known grid; grid {0,0} yields a layout with no sub-images.
PartitionLayout make_layout(GridSize grid, GridSize patch_grid, std::size_t image_width = 0,
                            std::size_t image_height = 0);

/// Picks the candidate grid that preserves the most source pixels when the
/// image is fitted into (g_w*base, g_h*base); ties go to the least padding,
/// then to the earlier candidate.
PartitionLayout plan_partitions(std::size_t image_width, std::size_t image_height,
                                std::span<const GridSize> candidates, std::size_t base_resolution,
                                GridSize patch_grid);

/// Most square factorization of n with width >= height (e.g. 576 -> 24x24, 2 -> 2x1).
GridSize square_factorization(std::size_t n);

}  // namespace hired
