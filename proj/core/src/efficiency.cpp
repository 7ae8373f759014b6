// Copyright (C) 2026 The hired-engine Authors
// SPDX-License-Identifier: Apache-2.0

#include "hired/efficiency.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include <nlohmann/json.hpp>

#include "hired/error.hpp"

namespace hired {

namespace {

__extension__ typedef unsigned __int128 uint128;

}  // namespace

void ModelProfile::validate() const {
    if (llm_layers == 0 || kv_heads == 0 || head_dim == 0 || bytes_per_element == 0) {
        throw Error(ErrorCode::InvalidConfig, "profile", "layers, kv heads, head dim and element size must be positive");
    }
}

double TokenUsageStats::mean() const noexcept {
    return sample_count == 0 ? 0.0 : static_cast<double>(sum) / static_cast<double>(sample_count);
}

double TokenUsageStats::stddev() const noexcept {
    if (sample_count == 0) {
        return 0.0;
    }
    // n*sum(x^2) - sum(x)^2 is exact in 128-bit integers
    const auto n = static_cast<uint128>(sample_count);
    const uint128 numerator = n * sum_squares - static_cast<uint128>(sum) * static_cast<uint128>(sum);
    return std::sqrt(static_cast<double>(numerator)) / static_cast<double>(sample_count);
}

TokenUsageStats corpus_stats(std::span<const SelectionManifest> manifests, std::uint64_t budget) {
    TokenUsageStats stats;
    stats.budget = budget;
    for (const SelectionManifest& m : manifests) {
        const std::uint64_t kept = m.total_kept;
        if (stats.sample_count == 0) {
            stats.min = kept;
            stats.max = kept;
        } else {
            stats.min = std::min(stats.min, kept);
            stats.max = std::max(stats.max, kept);
        }
        ++stats.sample_count;
        stats.sum += kept;
        stats.sum_squares += kept * kept;
        if (kept > budget) {
            ++stats.violations;
        }
    }
    return stats;
}

CostEstimate estimate_cost(std::uint64_t visual_tokens, std::uint64_t full_visual_tokens, const ModelProfile& profile) {
    CostEstimate cost;
    const std::uint64_t sequence = visual_tokens + profile.extra_tokens;
    cost.kv_bytes =
        2 * profile.llm_layers * profile.kv_heads * profile.head_dim * profile.bytes_per_element * sequence;
    const std::uint64_t full_sequence = full_visual_tokens + profile.extra_tokens;
    if (full_sequence > 0) {
        cost.linear_ratio = static_cast<double>(sequence) / static_cast<double>(full_sequence);
        cost.quadratic_ratio = cost.linear_ratio * cost.linear_ratio;
    }
    return cost;
}

namespace {

std::string fixed(double value, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
    return buf;
}

}  // namespace

std::string format_stats_table(const TokenUsageStats& stats, const CostEstimate& mean_cost,
                               const CostEstimate& budget_cost) {
    const std::pair<std::string, std::string> rows[] = {
        {"samples", std::to_string(stats.sample_count)},
        {"budget", std::to_string(stats.budget)},
        {"min", std::to_string(stats.min)},
        {"max", std::to_string(stats.max)},
        {"mean", fixed(stats.mean(), 3)},
        {"stddev", fixed(stats.stddev(), 3)},
        {"violations", std::to_string(stats.violations)},
        {"kv_bytes@mean (proxy)", std::to_string(mean_cost.kv_bytes)},
        {"kv_bytes@budget (proxy)", std::to_string(budget_cost.kv_bytes)},
        {"prefill linear ratio@mean (proxy)", fixed(mean_cost.linear_ratio, 6)},
        {"prefill quadratic ratio@mean (proxy)", fixed(mean_cost.quadratic_ratio, 6)},
    };
    std::size_t width = 0;
    for (const auto& [name, value] : rows) {
        width = std::max(width, name.size());
    }
    std::string out;
    for (const auto& [name, value] : rows) {
        out += name;
        out.append(width - name.size() + 2, ' ');
        out += value;
        out += '\n';
    }
    return out;
}

std::string stats_to_json(const TokenUsageStats& stats, const CostEstimate& mean_cost, const CostEstimate& budget_cost,
                          const ModelProfile& profile) {
    nlohmann::ordered_json root;
    root["samples"] = stats.sample_count;
    root["budget"] = stats.budget;
    root["min"] = stats.min;
    root["max"] = stats.max;
    root["mean"] = stats.mean();
    root["stddev"] = stats.stddev();
    root["violations"] = stats.violations;
    nlohmann::ordered_json proxies;
    proxies["profile"] = {{"llm_layers", profile.llm_layers},
                          {"kv_heads", profile.kv_heads},
                          {"head_dim", profile.head_dim},
                          {"bytes_per_element", profile.bytes_per_element},
                          {"extra_tokens", profile.extra_tokens}};
    proxies["kv_bytes_at_mean"] = mean_cost.kv_bytes;
    proxies["kv_bytes_at_budget"] = budget_cost.kv_bytes;
    proxies["prefill_linear_ratio_at_mean"] = mean_cost.linear_ratio;
    proxies["prefill_quadratic_ratio_at_mean"] = mean_cost.quadratic_ratio;
    root["cost_proxies"] = std::move(proxies);
    return root.dump(2) + "\n";
}

}  // namespace hired
