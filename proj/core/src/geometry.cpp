// Copyright (C) 2026 The hired-engine Authors
// SPDX-License-Identifier: Apache-2.0

#include "hired/geometry.hpp"

#include <charconv>
#include <cstdint>
#include <string>

#include "hired/error.hpp"

namespace hired {

namespace {

std::size_t parse_dim(std::string_view text, std::string_view whole) {
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        throw Error(ErrorCode::InvalidConfig, std::string(whole), "expected a grid of the form WxH");
    }
    return value;
}

// Column (or row) of the sub-image owning patch `cell` on an axis of
// `patches` patches split into `parts` sub-images: floor(((cell + 0.5) / patches) * parts).
std::size_t owner_along_axis(std::size_t cell, std::size_t patches, std::size_t parts) {
    return ((2 * cell + 1) * parts) / (2 * patches);
}

}  // namespace

GridSize parse_grid(std::string_view text) {
    const auto sep = text.find_first_of("xX");
    if (sep == std::string_view::npos) {
        throw Error(ErrorCode::InvalidConfig, std::string(text), "expected a grid of the form WxH");
    }
    return {parse_dim(text.substr(0, sep), text), parse_dim(text.substr(sep + 1), text)};
}

std::string format_grid(GridSize grid) {
    return std::to_string(grid.width) + "x" + std::to_string(grid.height);
}

std::vector<GridSize> default_grid_candidates() {
    return {{1, 1}, {1, 2}, {2, 1}, {2, 2}, {1, 3}, {3, 1}, {1, 4}, {4, 1}};
}

std::vector<std::size_t> map_subimage_tokens(GridSize grid, GridSize patch_grid, std::size_t index) {
    if (index < 1 || index > grid.area()) {
        throw Error(ErrorCode::IndexOutOfRange, "sub-image " + std::to_string(index),
                    "grid " + format_grid(grid) + " has " + std::to_string(grid.area()) + " sub-images");
    }
    const std::size_t grid_row = (index - 1) / grid.width;
    const std::size_t grid_col = (index - 1) % grid.width;

    std::vector<std::size_t> tokens;
    for (std::size_t r = 0; r < patch_grid.height; ++r) {
        if (owner_along_axis(r, patch_grid.height, grid.height) != grid_row) {
            continue;
        }
        for (std::size_t c = 0; c < patch_grid.width; ++c) {
            if (owner_along_axis(c, patch_grid.width, grid.width) == grid_col) {
                tokens.push_back(r * patch_grid.width + c);
            }
        }
    }
    return tokens;
}

PartitionLayout make_layout(GridSize grid, GridSize patch_grid, std::size_t image_width, std::size_t image_height) {
    if ((grid.width == 0) != (grid.height == 0)) {
        throw Error(ErrorCode::InvalidConfig, "grid", "grid " + format_grid(grid) + " is empty in one dimension");
    }
    if (patch_grid.area() == 0) {
        throw Error(ErrorCode::InvalidConfig, "patch_grid", "patch grid must be at least 1x1");
    }
    PartitionLayout layout{grid, patch_grid, image_width, image_height, {}};
    layout.token_index_sets.reserve(grid.area());
    for (std::size_t i = 1; i <= grid.area(); ++i) {
        layout.token_index_sets.push_back(map_subimage_tokens(grid, patch_grid, i));
    }
    return layout;
}

PartitionLayout plan_partitions(std::size_t image_width, std::size_t image_height, std::span<const GridSize> candidates,
                                std::size_t base_resolution, GridSize patch_grid) {
    if (candidates.empty()) {
        throw Error(ErrorCode::EmptyCandidateList, "candidates", "no candidate grids given");
    }
    if (image_width == 0 || image_height == 0) {
        throw Error(ErrorCode::InvalidConfig, "image", "image dimensions must be positive");
    }

    const std::uint64_t w = image_width;
    const std::uint64_t h = image_height;
    const std::uint64_t source_area = w * h;

    const GridSize* best = nullptr;
    std::uint64_t best_covered = 0;
    std::uint64_t best_padding = 0;
    for (const GridSize& candidate : candidates) {
        if (candidate.width == 0 || candidate.height == 0) {
            throw Error(ErrorCode::InvalidConfig, format_grid(candidate), "candidate grid must be at least 1x1");
        }
        const std::uint64_t target_w = candidate.width * base_resolution;
        const std::uint64_t target_h = candidate.height * base_resolution;
        // Fit preserving aspect ratio: the tighter of the two scale factors wins.
        std::uint64_t fitted_w = 0;
        std::uint64_t fitted_h = 0;
        if (target_w * h <= target_h * w) {
            fitted_w = target_w;
            fitted_h = h * target_w / w;
        } else {
            fitted_h = target_h;
            fitted_w = w * target_h / h;
        }
        const std::uint64_t covered = std::min(fitted_w * fitted_h, source_area);
        const std::uint64_t padding = target_w * target_h - covered;
        if (best == nullptr || covered > best_covered || (covered == best_covered && padding < best_padding)) {
            best = &candidate;
            best_covered = covered;
            best_padding = padding;
        }
    }
    return make_layout(*best, patch_grid, image_width, image_height);
}

GridSize square_factorization(std::size_t n) {
    if (n == 0) {
        return {0, 0};
    }
    std::size_t height = 1;
    for (std::size_t d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            height = d;
        }
    }
    return {n / height, height};
}

}  // namespace hired
