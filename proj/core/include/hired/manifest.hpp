// Copyright (C) 2026 The hired-engine Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hired/allocator.hpp"
#include "hired/config.hpp"
#include "hired/selector.hpp"

namespace hired {

inline constexpr int kSelectionManifestVersion = 1;

/// In-memory form of a selection manifest, as written by write_selection_manifest.
struct SelectionManifest {
    struct Entry {
        std::size_t id = 0;
        std::uint64_t allocated = 0;
        std::vector<std::size_t> kept_indices;
        std::optional<std::vector<float>> importance;

        friend bool operator==(const Entry&, const Entry&) = default;
    };

    int version = kSelectionManifestVersion;
    std::uint64_t budget = 0;
    double alpha = 0.5;
    int init_layer = 0;
    int final_layer = 22;
    std::string aggregation = "sum";
    std::vector<Entry> partitions;
    std::uint64_t total_kept = 0;

    friend bool operator==(const SelectionManifest&, const SelectionManifest&) = default;
};

SelectionManifest make_selection_manifest(const SelectionResult& result, const BudgetPlan& plan,
                                          const EngineConfig& config);

/// Keys in fixed order: version, budget, alpha, init_layer, final_layer,
/// aggregation, partitions[{id, allocated, kept_indices[, importance]}], total_kept.
std::string serialize_selection_manifest(const SelectionManifest& manifest);
SelectionManifest parse_selection_manifest(std::string_view json_text, const std::string& origin = "<memory>");

void write_selection_manifest(const SelectionResult& result, const BudgetPlan& plan, const EngineConfig& config,
                              const std::filesystem::path& path);
SelectionManifest read_selection_manifest(const std::filesystem::path& path);

}  // namespace hired
