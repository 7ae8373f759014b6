// Copyright (C) 2026 The hired-engine Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hired/allocator.hpp"
#include "hired/config.hpp"
#include "hired/dump.hpp"
#include "hired/geometry.hpp"

namespace hired {

using FeatureImportance = std::vector<float>;

struct PartitionSelection {
    std::size_t partition_id = 0;
    std::uint64_t allocated = 0;
    std::vector<std::size_t> kept_indices;  // ascending raster order
    std::optional<FeatureImportance> importance;
};

struct SelectionResult {
    std::vector<PartitionSelection> partitions;
    std::uint64_t total_kept = 0;
};

/// f[j] = agg_h a^{p}_{final_layer,h}[j].
FeatureImportance feature_importance(const AttentionDump& dump, std::size_t partition_id, int final_layer,
                                     const Aggregation& aggregation);

/// Indices of the `count` largest scores (ties -> lower index), returned ascending.
std::vector<std::size_t> select_tokens(std::span<const float> importance, std::uint64_t count);

struct HiredOutput {
    BudgetPlan plan;
    SelectionResult selection;
};

/// Both phases end to end. `layout` must match the dump's grid and patch grid.
HiredOutput run_hired(const AttentionDump& dump, const PartitionLayout& layout, const EngineConfig& config);

/// Convenience overload using the dump's own layout.
HiredOutput run_hired(const AttentionDump& dump, const EngineConfig& config);

}  // namespace hired
