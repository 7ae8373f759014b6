// Copyright (C) 2026 The hired-engine Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hired/config.hpp"
#include "hired/dump.hpp"
#include "hired/geometry.hpp"

namespace hired {

/// Visual content score per sub-image (index i-1 <-> sub-image i).
using VisualContentScores = std::vector<float>;

struct BudgetPlan {
    std::uint64_t budget = 0;       // resolved N_budget
    std::uint64_t n_full = 0;       // full-image budget
    std::uint64_t n_sub_total = 0;  // budget handed to the sub-images
    std::vector<std::uint64_t> n_sub;
    VisualContentScores scores;
    /// Distribution actually used (content-scored falls back to even when all scores are 0).
    Distribution distribution = Distribution::ContentScored;
    /// clamped[0] is the full-image, clamped[i] sub-image i.
    std::vector<bool> clamped;
    /// Sub-image budget that could not be placed because every sub-image is full.
    std::uint64_t unallocated = 0;

    std::uint64_t total() const noexcept;
    /// Budget of partition `id` (0 = full-image).
    std::uint64_t allocated(std::size_t id) const;
};

/// Absolute budgets are clamped to capacity (k+1)*N_ViT; fractions are floored.
std::uint64_t resolve_budget(const Budget& budget, std::size_t sub_images, std::size_t tokens_per_partition);

/// Per-head aggregate of one attention slice at `token`; heads visited in ascending order.
float aggregate_heads(const Tensor3& attention, std::size_t layer_slot, std::size_t token,
                      const Aggregation& aggregation);

/// s_i = sum over j in T_{p_i} of agg_h a^{p_0}_{init_layer,h}[j]; tokens in ascending order.
VisualContentScores visual_content_scores(const AttentionDump& dump, const PartitionLayout& layout,
                                          int init_layer, const Aggregation& aggregation);

/// Largest-remainder apportionment of `total` proportional to `weights`,
/// exact for any nonnegative finite f32 weights. Leftover tokens go to the
/// largest fractional remainders, lower index first on ties. All-zero
/// weights split evenly.
std::vector<std::uint64_t> apportion(std::span<const float> weights, std::uint64_t total);

/// Phase 1: split the budget between the full-image and the sub-images.
BudgetPlan allocate_budget(const VisualContentScores& scores, std::uint64_t budget, double alpha,
                           std::size_t tokens_per_partition, std::size_t sub_images,
                           Distribution distribution);

}  // namespace hired
