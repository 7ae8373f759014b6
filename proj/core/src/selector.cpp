// Copyright (C) 2026 The hired-engine Authors
// SPDX-License-Identifier: Apache-2.0

#include "hired/selector.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "hired/error.hpp"

namespace hired {

FeatureImportance feature_importance(const AttentionDump& dump, std::size_t partition_id, int final_layer,
                                     const Aggregation& aggregation) {
    const Tensor3& attention = dump.partition(partition_id).attention;
    const std::size_t slot = dump.layer_slot(final_layer);
    FeatureImportance f(attention.shape().tokens);
    for (std::size_t j = 0; j < f.size(); ++j) {
        f[j] = aggregate_heads(attention, slot, j, aggregation);
    }
    return f;
}

std::vector<std::size_t> select_tokens(std::span<const float> importance, std::uint64_t count) {
    const std::size_t n = importance.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (count >= n) {
        return order;
    }
    const auto keep = static_cast<std::ptrdiff_t>(count);
    // Strict weak order: higher score first, lower index on ties.
    std::nth_element(order.begin(), order.begin() + keep, order.end(), [&](std::size_t a, std::size_t b) {
        return importance[a] > importance[b] || (importance[a] == importance[b] && a < b);
    });
    order.resize(count);
    std::sort(order.begin(), order.end());
    return order;
}

HiredOutput run_hired(const AttentionDump& dump, const PartitionLayout& layout, const EngineConfig& config) {
    config.validate();
    const std::size_t k = dump.sub_image_count();
    const std::size_t tokens = dump.tokens_per_partition();
    if (layout.sub_image_count() != k || layout.tokens_per_partition() != tokens) {
        throw Error(ErrorCode::ShapeMismatch, "layout",
                    "layout has " + std::to_string(layout.sub_image_count()) + " sub-images over " +
                        std::to_string(layout.tokens_per_partition()) + " tokens; dump has " + std::to_string(k) +
                        " over " + std::to_string(tokens));
    }
    // Fail on a missing layer before doing any work, even when k == 0 skips phase 1.
    dump.layer_slot(config.init_layer);
    dump.layer_slot(config.final_layer);

    HiredOutput out;
    const std::uint64_t budget = resolve_budget(config.budget, k, tokens);
    const VisualContentScores scores = visual_content_scores(dump, layout, config.init_layer, config.aggregation);
    out.plan = allocate_budget(scores, budget, config.alpha, tokens, k, config.distribution);

    out.selection.partitions.reserve(k + 1);
    for (std::size_t id = 0; id <= k; ++id) {
        PartitionSelection sel;
        sel.partition_id = id;
        sel.allocated = out.plan.allocated(id);
        FeatureImportance f = feature_importance(dump, id, config.final_layer, config.aggregation);
        sel.kept_indices = select_tokens(f, sel.allocated);
        if (config.emit_scores) {
            sel.importance = std::move(f);
        }
        out.selection.total_kept += sel.kept_indices.size();
        out.selection.partitions.push_back(std::move(sel));
    }
    return out;
}

HiredOutput run_hired(const AttentionDump& dump, const EngineConfig& config) {
    return run_hired(dump, dump.layout(), config);
}

}  // namespace hired
