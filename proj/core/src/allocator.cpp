// Copyright (C) 2026 The hired-engine Authors
// SPDX-License-Identifier: Apache-2.0

#include "hired/allocator.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <numeric>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "hired/error.hpp"

namespace hired {

namespace {

using boost::multiprecision::cpp_int;

// Scales every weight onto a common power-of-two grid so that the weights
// become exact integers with the same ratios as the f32 inputs.
std::vector<cpp_int> exact_weights(std::span<const float> weights) {
    int min_exponent = INT_MAX;
    for (const float w : weights) {
        if (w > 0.0f) {
            int exponent = 0;
            std::frexp(w, &exponent);
            min_exponent = std::min(min_exponent, exponent);
        }
    }
    std::vector<cpp_int> out(weights.size());
    if (min_exponent == INT_MAX) {
        return out;
    }
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] <= 0.0f) {
            continue;
        }
        int exponent = 0;
        const float mantissa = std::frexp(weights[i], &exponent);
        // mantissa in [0.5, 1) carries at most 24 significant bits
        const auto integral = static_cast<std::uint32_t>(std::ldexp(mantissa, 24));
        out[i] = cpp_int(integral) << (exponent - min_exponent);
    }
    return out;
}

}  // namespace

std::vector<std::uint64_t> apportion(std::span<const float> weights, std::uint64_t total) {
    for (const float w : weights) {
        if (!std::isfinite(w) || w < 0.0f) {
            throw Error(ErrorCode::InvalidConfig, "scores", "weights must be finite and nonnegative");
        }
    }
    const std::size_t n = weights.size();
    std::vector<std::uint64_t> result(n, 0);
    if (n == 0) {
        return result;
    }

    std::vector<cpp_int> exact = exact_weights(weights);
    cpp_int denominator = std::accumulate(exact.begin(), exact.end(), cpp_int(0));
    if (denominator == 0) {
        std::fill(exact.begin(), exact.end(), cpp_int(1));
        denominator = static_cast<unsigned>(n);
    }

    // share_i = total * w_i / W = quotient_i + remainder_i / W
    std::vector<cpp_int> remainders(n);
    std::uint64_t placed = 0;
    for (std::size_t i = 0; i < n; ++i) {
        cpp_int quotient;
        boost::multiprecision::divide_qr(cpp_int(total) * exact[i], denominator, quotient, remainders[i]);
        result[i] = static_cast<std::uint64_t>(quotient);
        placed += result[i];
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return remainders[a] > remainders[b]; });
    const std::uint64_t leftover = total - placed;  // < n
    for (std::uint64_t i = 0; i < leftover; ++i) {
        ++result[order[i]];
    }
    return result;
}

std::uint64_t BudgetPlan::total() const noexcept {
    return std::accumulate(n_sub.begin(), n_sub.end(), n_full);
}

std::uint64_t BudgetPlan::allocated(std::size_t id) const {
    if (id == 0) {
        return n_full;
    }
    if (id > n_sub.size()) {
        throw Error(ErrorCode::UnknownPartition, "partition " + std::to_string(id),
                    "plan covers " + std::to_string(n_sub.size() + 1) + " partitions");
    }
    return n_sub[id - 1];
}

std::uint64_t resolve_budget(const Budget& budget, std::size_t sub_images, std::size_t tokens_per_partition) {
    const std::uint64_t capacity = static_cast<std::uint64_t>(sub_images + 1) * tokens_per_partition;
    if (budget.is_fraction()) {
        return std::min(floor_scaled(budget.fraction_value(), capacity), capacity);
    }
    return std::min(budget.tokens(), capacity);
}

float aggregate_heads(const Tensor3& attention, std::size_t layer_slot, std::size_t token,
                      const Aggregation& aggregation) {
    const std::size_t heads = attention.shape().heads;
    switch (aggregation.kind) {
    case AggregationKind::Sum:
    case AggregationKind::Mean: {
        float acc = 0.0f;
        for (std::size_t h = 0; h < heads; ++h) {
            acc += attention.at(layer_slot, h, token);
        }
        return aggregation.kind == AggregationKind::Mean ? acc / static_cast<float>(heads) : acc;
    }
    case AggregationKind::Max: {
        float acc = 0.0f;
        for (std::size_t h = 0; h < heads; ++h) {
            acc = std::max(acc, attention.at(layer_slot, h, token));
        }
        return acc;
    }
    case AggregationKind::SingleHead:
        if (aggregation.head >= heads) {
            throw Error(ErrorCode::InvalidConfig, "aggregation",
                        "head " + std::to_string(aggregation.head) + " out of range for " + std::to_string(heads) +
                            " heads");
        }
        return attention.at(layer_slot, aggregation.head, token);
    }
    return 0.0f;
}

VisualContentScores visual_content_scores(const AttentionDump& dump, const PartitionLayout& layout, int init_layer,
                                          const Aggregation& aggregation) {
    const std::size_t slot = dump.layer_slot(init_layer);
    const Tensor3& full = dump.partition(0).attention;
    if (layout.tokens_per_partition() != full.shape().tokens) {
        throw Error(ErrorCode::ShapeMismatch, "layout",
                    "patch grid " + format_grid(layout.patch_grid) + " does not match " +
                        std::to_string(full.shape().tokens) + " tokens");
    }

    VisualContentScores scores;
    scores.reserve(layout.sub_image_count());
    for (const auto& tokens : layout.token_index_sets) {
        float s = 0.0f;
        for (const std::size_t j : tokens) {
            s += aggregate_heads(full, slot, j, aggregation);
        }
        scores.push_back(s);
    }
    return scores;
}

BudgetPlan allocate_budget(const VisualContentScores& scores, std::uint64_t budget, double alpha,
                           std::size_t tokens_per_partition, std::size_t sub_images, Distribution distribution) {
    const std::uint64_t cap = tokens_per_partition;
    const std::uint64_t capacity = static_cast<std::uint64_t>(sub_images + 1) * cap;
    if (budget > capacity) {
        throw Error(ErrorCode::BudgetExceedsCapacity, "budget",
                    std::to_string(budget) + " exceeds capacity " + std::to_string(capacity));
    }
    if (scores.size() != sub_images) {
        throw Error(ErrorCode::InvalidConfig, "scores",
                    "expected " + std::to_string(sub_images) + " scores, got " + std::to_string(scores.size()));
    }
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw Error(ErrorCode::InvalidConfig, "alpha", "must lie in [0, 1]");
    }

    BudgetPlan plan;
    plan.budget = budget;
    plan.scores = scores;
    plan.distribution = distribution;
    plan.clamped.assign(sub_images + 1, false);

    if (sub_images == 0) {
        plan.n_full = std::min(budget, cap);
        plan.clamped[0] = budget > cap;
        plan.unallocated = budget - plan.n_full;
        return plan;
    }

    const std::uint64_t wanted_full = floor_scaled(alpha, budget);
    plan.n_full = std::min(wanted_full, cap);
    plan.clamped[0] = wanted_full > cap;
    plan.n_sub_total = budget - plan.n_full;

    std::vector<float> weights(sub_images, 1.0f);
    if (distribution == Distribution::ContentScored) {
        const bool all_zero = std::all_of(scores.begin(), scores.end(), [](float s) { return s == 0.0f; });
        if (all_zero) {
            plan.distribution = Distribution::Even;
        } else {
            weights = scores;
        }
    }

    // Apportion over the still-open sub-images; any share above the cap is
    // pinned at the cap and the rest is re-apportioned until nothing overflows.
    plan.n_sub.assign(sub_images, 0);
    std::vector<std::size_t> open(sub_images);
    std::iota(open.begin(), open.end(), std::size_t{0});
    std::uint64_t remaining = plan.n_sub_total;
    while (!open.empty()) {
        std::vector<float> open_weights;
        open_weights.reserve(open.size());
        for (const std::size_t i : open) {
            open_weights.push_back(weights[i]);
        }
        const std::vector<std::uint64_t> shares = apportion(open_weights, remaining);

        std::vector<std::size_t> still_open;
        for (std::size_t pos = 0; pos < open.size(); ++pos) {
            if (shares[pos] > cap) {
                plan.n_sub[open[pos]] = cap;
                plan.clamped[open[pos] + 1] = true;
                remaining -= cap;
            } else {
                still_open.push_back(open[pos]);
            }
        }
        if (still_open.size() == open.size()) {
            for (std::size_t pos = 0; pos < open.size(); ++pos) {
                plan.n_sub[open[pos]] = shares[pos];
            }
            remaining = 0;
            break;
        }
        open = std::move(still_open);
    }
    plan.unallocated = remaining;
    return plan;
}

}  // namespace hired
