// Copyright (C) 2026 The hired-engine Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "hired/config.hpp"
#include "hired/error.hpp"
#include "hired/version.hpp"

using namespace hired;

TEST_CASE("EngineConfig defaults") {
    const EngineConfig config;
    CHECK(config.budget.is_fraction());
    CHECK(config.budget.fraction_value() == 0.2);
    CHECK(config.alpha == 0.5);
    CHECK(config.init_layer == 0);
    CHECK(config.final_layer == 22);
    CHECK(config.aggregation == Aggregation::sum());
    CHECK(config.distribution == Distribution::ContentScored);
    CHECK_FALSE(config.emit_scores);
    CHECK_NOTHROW(config.validate());
}

TEST_CASE("EngineConfig::validate names the field") {
    const auto code_and_subject = [](const EngineConfig& c) {
        try {
            c.validate();
        } catch (const Error& e) {
            return std::make_pair(e.code(), e.subject());
        }
        return std::make_pair(ErrorCode::Io, std::string("none"));
    };
    EngineConfig c;
    c.alpha = 1.5;
    CHECK(code_and_subject(c).first == ErrorCode::InvalidConfig);
    CHECK(code_and_subject(c).second == "alpha");
    c = EngineConfig{};
    c.init_layer = -1;
    CHECK(code_and_subject(c).second == "init_layer");
    c = EngineConfig{};
    c.final_layer = -3;
    CHECK(code_and_subject(c).second == "final_layer");
}

TEST_CASE("Budget::parse") {
    CHECK(Budget::parse("0") == Budget::absolute(0));
    CHECK(Budget::parse("0.2").is_fraction());
    CHECK(Budget::parse("0.2").fraction_value() == 0.2);
    CHECK(Budget::parse("1").is_fraction());
    CHECK(Budget::parse("1.0").fraction_value() == 1.0);
    CHECK(Budget::parse("576") == Budget::absolute(576));
    CHECK(Budget::parse("2") == Budget::absolute(2));
    for (const char* bad : {"", "-1", "abc", "1.5", "0.2x", "nan", "inf"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(Budget::parse(bad), Error);
    }
    CHECK_THROWS_AS(Budget::fraction(0.0), Error);
    CHECK_THROWS_AS(Budget::fraction(1.01), Error);
}

TEST_CASE("floor_scaled snaps products that are integers up to rounding") {
    CHECK(floor_scaled(0.2, 2880) == 576);
    CHECK(floor_scaled(0.1, 2880) == 288);
    CHECK(floor_scaled(0.2, 576) == 115);
    CHECK(floor_scaled(0.5, 5) == 2);
    CHECK(floor_scaled(1.0, 7) == 7);
    CHECK(floor_scaled(0.0, 7) == 0);
    // 0.7 * 10 is 6.999... in binary
    CHECK(floor_scaled(0.7, 10) == 7);
}

TEST_CASE("aggregation and distribution parsing") {
    CHECK(parse_aggregation("sum") == Aggregation::sum());
    CHECK(parse_aggregation("mean") == Aggregation::mean());
    CHECK(parse_aggregation("max") == Aggregation::max());
    CHECK(parse_aggregation("head:3") == Aggregation::single_head(3));
    CHECK(to_string(Aggregation::single_head(3)) == "head:3");
    CHECK(to_string(Aggregation::mean()) == "mean");
    for (const char* bad : {"", "avg", "head:", "head:x", "head:-1"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(parse_aggregation(bad), Error);
    }
    CHECK(parse_distribution("content") == Distribution::ContentScored);
    CHECK(parse_distribution("even") == Distribution::Even);
    CHECK(to_string(Distribution::Even) == "even");
    CHECK_THROWS_AS(parse_distribution("uniform"), Error);
}

TEST_CASE("version string") {
    CHECK(std::string(version()) == "1.0.0");
}
