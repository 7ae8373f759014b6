// Copyright (C) 2026 The hired-engine Authors
// SPDX-License-Identifier: Apache-2.0

#include "hired/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <string>

#include "hired/error.hpp"

namespace hired {

Aggregation parse_aggregation(std::string_view text) {
    if (text == "sum") {
        return Aggregation::sum();
    }
    if (text == "mean") {
        return Aggregation::mean();
    }
    if (text == "max") {
        return Aggregation::max();
    }
    if (text.starts_with("head:")) {
        const std::string_view digits = text.substr(5);
        std::size_t head = 0;
        const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), head);
        if (ec == std::errc() && ptr == digits.data() + digits.size() && !digits.empty()) {
            return Aggregation::single_head(head);
        }
    }
    throw Error(ErrorCode::InvalidConfig, "aggregation",
                "'" + std::string(text) + "' is not one of sum, mean, max, head:N");
}

std::string to_string(const Aggregation& aggregation) {
    switch (aggregation.kind) {
    case AggregationKind::Sum: return "sum";
    case AggregationKind::Mean: return "mean";
    case AggregationKind::Max: return "max";
    case AggregationKind::SingleHead: return "head:" + std::to_string(aggregation.head);
    }
    return "sum";
}

Distribution parse_distribution(std::string_view text) {
    if (text == "content") {
        return Distribution::ContentScored;
    }
    if (text == "even") {
        return Distribution::Even;
    }
    throw Error(ErrorCode::InvalidConfig, "distribution", "'" + std::string(text) + "' is not one of content, even");
}

std::string_view to_string(Distribution distribution) noexcept {
    return distribution == Distribution::Even ? "even" : "content";
}

Budget Budget::absolute(std::uint64_t tokens) {
    Budget b;
    b.m_is_fraction = false;
    b.m_tokens = tokens;
    b.m_fraction = 0.0;
    return b;
}

Budget Budget::fraction(double value) {
    if (!(value > 0.0 && value <= 1.0)) {
        throw Error(ErrorCode::InvalidConfig, "budget", "fraction must lie in (0, 1]");
    }
    Budget b;
    b.m_is_fraction = true;
    b.m_fraction = value;
    return b;
}

Budget Budget::parse(std::string_view text) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty() || !std::isfinite(value)) {
        throw Error(ErrorCode::InvalidConfig, "budget", "'" + std::string(text) + "' is not a number");
    }
    if (value < 0.0) {
        throw Error(ErrorCode::InvalidConfig, "budget", "must be nonnegative");
    }
    if (value == 0.0) {
        return absolute(0);
    }
    if (value <= 1.0) {
        return fraction(value);
    }
    if (value != std::floor(value) || value > static_cast<double>(std::numeric_limits<std::uint32_t>::max())) {
        throw Error(ErrorCode::InvalidConfig, "budget", "values above 1 must be whole token counts");
    }
    return absolute(static_cast<std::uint64_t>(value));
}

void EngineConfig::validate() const {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw Error(ErrorCode::InvalidConfig, "alpha", "must lie in [0, 1]");
    }
    if (budget.is_fraction() && !(budget.fraction_value() > 0.0 && budget.fraction_value() <= 1.0)) {
        throw Error(ErrorCode::InvalidConfig, "budget", "fraction must lie in (0, 1]");
    }
    if (init_layer < 0) {
        throw Error(ErrorCode::InvalidConfig, "init_layer", "must be non-negative");
    }
    if (final_layer < 0) {
        throw Error(ErrorCode::InvalidConfig, "final_layer", "must be non-negative");
    }
}

std::uint64_t floor_scaled(double value, std::uint64_t count) {
    const double scaled = value * static_cast<double>(count);
    const double nearest = std::round(scaled);
    if (std::abs(scaled - nearest) <= 1e-9 * std::max(1.0, scaled)) {
        return static_cast<std::uint64_t>(nearest);
    }
    return static_cast<std::uint64_t>(std::floor(scaled));
}

}  // namespace hired
