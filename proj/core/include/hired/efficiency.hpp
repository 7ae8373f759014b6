// Copyright (C) 2026 The hired-engine Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

#include "hired/manifest.hpp"

namespace hired {

/// LLM dimensions used for analytic cost proxies.
struct ModelProfile {
    std::uint64_t llm_layers = 32;
    std::uint64_t kv_heads = 32;
    std::uint64_t head_dim = 128;
    std::uint64_t bytes_per_element = 2;
    std::uint64_t extra_tokens = 0;  // system + text tokens per request

    void validate() const;
};

struct TokenUsageStats {
    std::uint64_t sample_count = 0;
    std::uint64_t budget = 0;
    std::uint64_t min = 0;
    std::uint64_t max = 0;
    std::uint64_t sum = 0;
    std::uint64_t sum_squares = 0;
    std::uint64_t violations = 0;  // samples with total_kept > budget

    double mean() const noexcept;
    /// Population standard deviation.
    double stddev() const noexcept;
};

TokenUsageStats corpus_stats(std::span<const SelectionManifest> manifests, std::uint64_t budget);

struct CostEstimate {
    std::uint64_t kv_bytes = 0;
    double linear_ratio = 0.0;     // (v+e)/(v_full+e)
    double quadratic_ratio = 0.0;  // linear_ratio^2, attention-dominated prefill proxy
};

/// KV bytes = 2 * layers * kv_heads * head_dim * bytes * (visual + extra).
CostEstimate estimate_cost(std::uint64_t visual_tokens, std::uint64_t full_visual_tokens,
                           const ModelProfile& profile);

/// Aligned-column text table of stats plus cost proxies at the mean token count.
std::string format_stats_table(const TokenUsageStats& stats, const CostEstimate& mean_cost,
                               const CostEstimate& budget_cost);
std::string stats_to_json(const TokenUsageStats& stats, const CostEstimate& mean_cost,
                          const CostEstimate& budget_cost, const ModelProfile& profile);

}  // namespace hired
