// Copyright (C) 2026 The hired-engine Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace hired {

enum class AggregationKind { Sum, Mean, Max, SingleHead };

/// How per-head attention rows are folded into one score per token.
struct Aggregation {
    AggregationKind kind = AggregationKind::Sum;
    std::size_t head = 0;  // only for SingleHead

    static Aggregation sum() { return {AggregationKind::Sum, 0}; }
    static Aggregation mean() { return {AggregationKind::Mean, 0}; }
    static Aggregation max() { return {AggregationKind::Max, 0}; }
    static Aggregation single_head(std::size_t h) { return {AggregationKind::SingleHead, h}; }

    friend bool operator==(const Aggregation&, const Aggregation&) = default;
};

/// "sum" | "mean" | "max" | "head:N"
Aggregation parse_aggregation(std::string_view text);
std::string to_string(const Aggregation& aggregation);

enum class Distribution { ContentScored, Even };

/// "content" | "even"
Distribution parse_distribution(std::string_view text);
std::string_view to_string(Distribution distribution) noexcept;

/// Token budget, either an absolute count or a fraction of (k+1)*N_ViT.
class Budget {
public:
    static Budget absolute(std::uint64_t tokens);
    /// fraction in (0, 1]
    static Budget fraction(double value);
    /// CLI convention: 0 or integers >= 2 are absolute, values in (0, 1] are fractions.
    static Budget parse(std::string_view text);

    bool is_fraction() const noexcept { return m_is_fraction; }
    std::uint64_t tokens() const noexcept { return m_tokens; }
    double fraction_value() const noexcept { return m_fraction; }

    friend bool operator==(const Budget&, const Budget&) = default;

private:
    bool m_is_fraction = true;
    std::uint64_t m_tokens = 0;
    double m_fraction = 0.2;
};

struct EngineConfig {
    Budget budget = Budget::fraction(0.2);
    double alpha = 0.5;
    int init_layer = 0;
    int final_layer = 22;
    Aggregation aggregation = Aggregation::sum();
    Distribution distribution = Distribution::ContentScored;
    bool emit_scores = false;

    /// Range checks independent of any dump; throws InvalidConfig naming the field.
    void validate() const;
};

/// floor(value * count) with values within 1e-9 of an integer snapped to it.
std::uint64_t floor_scaled(double value, std::uint64_t count);

}  // namespace hired
