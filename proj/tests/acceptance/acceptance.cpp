// Copyright (C) 2026 The hired-engine Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite: one [PASS]/[FAIL] line per criterion, nonzero exit on any failure.

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "hired/hired.hpp"
#include "reference_hired.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace hired;
using hired::testing::TempDir;

namespace {

struct Failure {
    std::string what;
};

void expect(bool condition, const std::string& what) {
    if (!condition) throw Failure{what};
}

struct Invocation {
    int code = 0;
    std::string out;
    std::string err;
};

Invocation cli_run(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

void cli_ok(const std::vector<std::string>& args) {
    const Invocation r = cli_run(args);
    expect(r.code == 0, "hired " + args.front() + " exited " + std::to_string(r.code) + ": " + r.err);
}

std::string sha256_hex(const std::vector<unsigned char>& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string text;
    for (unsigned int i = 0; i < len; ++i) {
        text += hex[digest[i] >> 4];
        text += hex[digest[i] & 15];
    }
    return text;
}

AttentionDump scaled(const AttentionDump& dump, float c) {
    std::vector<Partition> parts;
    for (const Partition& p : dump.partitions()) {
        std::vector<float> data(p.attention.data().begin(), p.attention.data().end());
        for (float& v : data) v *= c;
        parts.push_back({p.id, p.role, Tensor3(p.attention.shape(), std::move(data))});
    }
    return AttentionDump(dump.metadata(), std::move(parts));
}

std::vector<std::vector<std::size_t>> kept_of(const HiredOutput& out) {
    std::vector<std::vector<std::size_t>> kept;
    for (const auto& p : out.selection.partitions) kept.push_back(p.kept_indices);
    return kept;
}

// Patch grid at least as large as `grid` in each direction with at most `max_tokens` cells.
GridSize random_patch_grid(std::mt19937_64& rng, GridSize grid, std::size_t max_tokens) {
    const std::size_t min_w = std::max<std::size_t>(grid.width, 1);
    const std::size_t min_h = std::max<std::size_t>(grid.height, 1);
    std::vector<GridSize> options;
    for (std::size_t w = min_w; w <= max_tokens; ++w) {
        for (std::size_t h = min_h; w * h <= max_tokens; ++h) options.push_back({w, h});
    }
    return options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
}

// -- criteria -------------------------------------------------------------------

void ac1_budget_fractions() {
    TempDir dir("hired-ac1");
    cli_ok({"synth", "--seed", "1", "--out", (dir / "dump").string()});
    for (const auto& [budget, expected] : {std::pair{"0.10", 288}, std::pair{"0.20", 576}}) {
        const std::string sel = (dir / (std::string(budget) + ".json")).string();
        cli_ok({"run", "--dump", (dir / "dump").string(), "--out", sel, "--budget", budget});
        const SelectionManifest m = read_selection_manifest(sel);
        expect(m.total_kept == static_cast<std::uint64_t>(expected),
               std::string("--budget ") + budget + " kept " + std::to_string(m.total_kept));
    }
}

void ac2_budget_enforcement() {
    TempDir dir("hired-ac2");
    for (int seed = 1; seed <= 100; ++seed) {
        const std::string dump = (dir / ("dump" + std::to_string(seed))).string();
        cli_ok({"synth", "--seed", std::to_string(seed), "--partitions", "5", "--heads", "16", "--tokens", "576",
                "--out", dump});
        cli_ok({"run", "--dump", dump, "--out", (dir / ("sel" + std::to_string(seed) + ".json")).string(),
                "--budget", "0.2"});
        fs::remove_all(dump);
    }
    const std::string report = (dir / "stats.json").string();
    cli_ok({"stats", "--manifests", (dir / "sel*.json").string(), "--budget", "576", "--json-out", report});
    const nlohmann::json stats = nlohmann::json::parse(testing::read_text(report));
    expect(stats["samples"] == 100, "samples " + stats["samples"].dump());
    expect(stats["violations"] == 0, "violations " + stats["violations"].dump());
    expect(stats["max"] == 576, "max " + stats["max"].dump());
    expect(stats["mean"].get<double>() == 576.0, "mean " + stats["mean"].dump());
}

void ac3_oracle_equivalence() {
    std::mt19937_64 rng(2024);
    const double alphas[] = {0.0, 0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875, 1.0};
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t k = std::uniform_int_distribution<std::size_t>(0, 5)(rng);
        const std::size_t heads = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
        const GridSize grid = testing::random_grid(rng, k);
        const GridSize patches = random_patch_grid(rng, grid, 16);
        const std::vector<int> layers = {0, 11, 22};
        // small unit range makes ties in scores and importance common
        const std::uint32_t max_units = std::uniform_int_distribution<std::uint32_t>(0, 1)(rng) ? 4 : 1024;
        const AttentionDump dump = testing::dyadic_dump(rng, k, grid, patches, heads, layers, max_units);

        EngineConfig config;
        const std::uint64_t capacity = (k + 1) * patches.area();
        config.budget = Budget::absolute(std::uniform_int_distribution<std::uint64_t>(0, capacity + 3)(rng));
        config.alpha = alphas[std::uniform_int_distribution<std::size_t>(0, 8)(rng)];
        config.init_layer = layers[std::uniform_int_distribution<std::size_t>(0, 2)(rng)];
        config.final_layer = layers[std::uniform_int_distribution<std::size_t>(0, 2)(rng)];
        switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
            case 0: config.aggregation = Aggregation::sum(); break;
            case 1: config.aggregation = Aggregation::max(); break;
            default:
                config.aggregation =
                    Aggregation::single_head(std::uniform_int_distribution<std::size_t>(0, heads - 1)(rng));
        }
        config.distribution =
            std::uniform_int_distribution<int>(0, 3)(rng) == 0 ? Distribution::Even : Distribution::ContentScored;

        const HiredOutput out = run_hired(dump, config);
        const testing::ReferenceResult ref =
            testing::reference_hired(dump, config.budget.tokens(), config.alpha, config.init_layer,
                                     config.final_layer, config.aggregation, config.distribution);
        const std::string label = "instance " + std::to_string(trial);
        expect(out.plan.budget == ref.budget, label + ": budget");
        expect(out.plan.n_full == ref.n_full, label + ": n_full");
        expect(out.plan.n_sub == ref.n_sub, label + ": n_sub");
        expect(kept_of(out) == ref.kept, label + ": kept_indices");
    }
}

void ac4_apportionment() {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 10000; ++trial) {
        const std::string label = "vector " + std::to_string(trial);
        // 12-bit mantissas: c * s stays exact in f32 for c in {0.5, 2, 10}
        const std::size_t k = std::uniform_int_distribution<std::size_t>(1, 12)(rng);
        std::vector<float> scores(k);
        for (float& s : scores) {
            const int mantissa = std::uniform_int_distribution<int>(0, 4095)(rng);
            const int exponent = std::uniform_int_distribution<int>(-24, -8)(rng);
            s = std::ldexp(static_cast<float>(mantissa), exponent);
        }
        const std::uint64_t total = std::uniform_int_distribution<std::uint64_t>(0, 5000)(rng);
        const std::vector<std::uint64_t> n = apportion(scores, total);

        std::uint64_t sum = 0;
        long double weight_sum = 0.0L;
        for (const float s : scores) weight_sum += s;
        for (std::size_t i = 0; i < k; ++i) {
            sum += n[i];
            const long double share = weight_sum == 0.0L
                                          ? static_cast<long double>(total) / static_cast<long double>(k)
                                          : static_cast<long double>(total) * scores[i] / weight_sum;
            expect(std::fabs(static_cast<long double>(n[i]) - share) < 1.0L, label + ": |n - share| >= 1");
        }
        expect(sum == total, label + ": sum != total");

        // allocate_budget with capacity to spare never clamps, so it conserves too
        const BudgetPlan plan = allocate_budget(scores, total, 0.5, 5001, k, Distribution::ContentScored);
        expect(plan.total() == total && plan.unallocated == 0, label + ": plan does not conserve budget");

        for (const float c : {0.5f, 2.0f, 10.0f}) {
            std::vector<float> scaled_scores(scores);
            for (float& s : scaled_scores) s *= c;
            expect(apportion(scaled_scores, total) == n, label + ": not scale invariant");
        }
    }

    // engine level: scaling every attention value changes neither budgets nor kept indices
    for (int trial = 0; trial < 2000; ++trial) {
        const std::size_t k = std::uniform_int_distribution<std::size_t>(0, 5)(rng);
        const GridSize grid = testing::random_grid(rng, k);
        const GridSize patches = random_patch_grid(rng, grid, 36);
        const AttentionDump dump = testing::dyadic_dump(rng, k, grid, patches, 3, {0, 22}, 1024);
        EngineConfig config;
        config.budget =
            Budget::absolute(std::uniform_int_distribution<std::uint64_t>(0, (k + 1) * patches.area())(rng));
        config.alpha = std::uniform_int_distribution<int>(0, 4)(rng) / 4.0;
        const HiredOutput base = run_hired(dump, config);
        for (const float c : {0.5f, 2.0f, 10.0f}) {
            const HiredOutput other = run_hired(scaled(dump, c), config);
            const std::string label = "dump " + std::to_string(trial) + " c=" + std::to_string(c);
            expect(other.plan.n_full == base.plan.n_full && other.plan.n_sub == base.plan.n_sub,
                   label + ": budgets differ");
            expect(kept_of(other) == kept_of(base), label + ": kept indices differ");
        }
    }
}

void ac5_geometry() {
    for (std::size_t gw = 1; gw <= 6; ++gw) {
        for (std::size_t gh = 1; gh <= 6; ++gh) {
            for (const std::size_t pw : {8u, 16u, 24u, 27u}) {
                for (const std::size_t ph : {8u, 16u, 24u, 27u}) {
                    const PartitionLayout layout = make_layout({gw, gh}, {pw, ph});
                    std::vector<int> owners(pw * ph, 0);
                    for (const auto& tokens : layout.token_index_sets) {
                        for (const std::size_t t : tokens) {
                            expect(t < owners.size(), "token out of range");
                            ++owners[t];
                        }
                    }
                    for (const int o : owners) {
                        expect(o == 1, "grid " + format_grid({gw, gh}) + " on " + format_grid({pw, ph}) +
                                           ": token owned " + std::to_string(o) + " times");
                    }
                }
            }
        }
    }
    const PartitionLayout quad = make_layout({2, 2}, {24, 24});
    for (const auto& tokens : quad.token_index_sets) {
        expect(tokens.size() == 144, "2x2 on 24x24 region of " + std::to_string(tokens.size()));
    }
}

void ac6_defaults() {
    const EngineConfig config;
    expect(config.alpha == 0.5, "alpha");
    expect(config.init_layer == 0, "init_layer");
    expect(config.final_layer == 22, "final_layer");
    expect(config.aggregation == Aggregation::sum(), "aggregation");

    // the CLI with no engine flags resolves to the same values
    TempDir dir("hired-ac6");
    cli_ok({"synth", "--out", (dir / "dump").string(), "--tokens", "16", "--heads", "2"});
    cli_ok({"run", "--dump", (dir / "dump").string(), "--out", (dir / "sel.json").string()});
    const SelectionManifest m = read_selection_manifest(dir / "sel.json");
    expect(m.alpha == 0.5 && m.init_layer == 0 && m.final_layer == 22 && m.aggregation == "sum",
           "CLI defaults differ from EngineConfig");
}

std::vector<unsigned char> npy_file(const std::string& header_dict, const std::vector<unsigned char>& payload,
                                    unsigned char major = 1) {
    std::string header = header_dict;
    const std::size_t prefix = major == 1 ? 10 : 12;
    while ((prefix + header.size() + 1) % 64 != 0) header += ' ';
    header += '\n';
    std::vector<unsigned char> bytes = {0x93, 'N', 'U', 'M', 'P', 'Y', major, 0};
    const std::size_t len = header.size();
    bytes.push_back(static_cast<unsigned char>(len & 0xff));
    bytes.push_back(static_cast<unsigned char>((len >> 8) & 0xff));
    if (major != 1) {
        bytes.push_back(0);
        bytes.push_back(0);
    }
    bytes.insert(bytes.end(), header.begin(), header.end());
    bytes.insert(bytes.end(), payload.begin(), payload.end());
    return bytes;
}

std::vector<unsigned char> f32_payload(const std::vector<float>& values) {
    std::vector<unsigned char> bytes(values.size() * 4);
    if (!values.empty()) std::memcpy(bytes.data(), values.data(), bytes.size());
    return bytes;
}

void ac7_npy() {
    TempDir dir("hired-ac7");
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 1000; ++trial) {
        const Shape3 shape{std::uniform_int_distribution<std::size_t>(1, 4)(rng),
                           std::uniform_int_distribution<std::size_t>(1, 8)(rng),
                           std::uniform_int_distribution<std::size_t>(0, 64)(rng)};
        std::vector<float> data(shape.size());
        for (float& v : data) {
            std::uint32_t bits = 0;
            do {
                bits = static_cast<std::uint32_t>(rng()) & 0x7fffffffu;  // non-negative, any exponent
            } while ((bits >> 23) == 0xff);                                // finite only
            std::memcpy(&v, &bits, 4);
        }
        const Tensor3 tensor(shape, data);
        const fs::path path = dir / "t.npy";
        write_npy(tensor, path);
        const Tensor3 back = read_npy(path);
        expect(back.shape() == shape, "roundtrip " + std::to_string(trial) + ": shape");
        expect(data.empty() || std::memcmp(back.data().data(), data.data(), data.size() * 4) == 0,
               "roundtrip " + std::to_string(trial) + ": bits differ");
        write_npy(back, dir / "u.npy");
        expect(testing::read_bytes(path) == testing::read_bytes(dir / "u.npy"),
               "roundtrip " + std::to_string(trial) + ": file bytes differ");
    }

    const std::vector<unsigned char> eight = f32_payload(std::vector<float>(8, 0.125f));
    const std::string ok_dict = "{'descr': '<f4', 'fortran_order': False, 'shape': (1, 2, 4), }";
    std::vector<std::vector<unsigned char>> corpus;
    corpus.push_back({});
    corpus.push_back({0x93, 'N', 'U'});
    corpus.push_back({'P', 'K', 0x03, 0x04, 1, 0, 0, 0, 0, 0});
    {
        auto bytes = npy_file(ok_dict, eight);
        bytes[6] = 3;  // version 3.0
        corpus.push_back(bytes);
    }
    {
        auto bytes = npy_file(ok_dict, eight);
        bytes[8] = 0xff;  // header length past the end of file
        bytes[9] = 0xff;
        corpus.push_back(bytes);
    }
    {
        auto bytes = npy_file(ok_dict, eight, 2);
        bytes.resize(10);  // v2 length field cut short
        corpus.push_back(bytes);
    }
    corpus.push_back(npy_file("[1, 2, 3]", eight));
    corpus.push_back(npy_file("{'fortran_order': False, 'shape': (1, 2, 4), }", eight));
    corpus.push_back(npy_file("{'descr': '<i4', 'fortran_order': False, 'shape': (1, 2, 4), }", eight));
    corpus.push_back(npy_file("{'descr': '>f4', 'fortran_order': False, 'shape': (1, 2, 4), }", eight));
    corpus.push_back(npy_file("{'descr': '|u1', 'fortran_order': False, 'shape': (1, 2, 4), }", eight));
    corpus.push_back(npy_file("{'descr': '<f4', 'fortran_order': True, 'shape': (1, 2, 4), }", eight));
    corpus.push_back(npy_file("{'descr': '<f4', 'fortran_order': False, 'shape': (2, 4), }", eight));
    corpus.push_back(npy_file("{'descr': '<f4', 'fortran_order': False, 'shape': (1, 1, 2, 4), }", eight));
    corpus.push_back(npy_file("{'descr': '<f4', 'fortran_order': False, 'shape': (1, -2, 4), }", eight));
    corpus.push_back(npy_file("{'descr': '<f4', 'fortran_order': False, 'shape': (1, 'a', 4), }", eight));
    corpus.push_back(npy_file("{'descr': '<f4', 'fortran_order': False, 'shape': (1, 2, 4), }",
                              f32_payload(std::vector<float>(7, 0.1f))));
    corpus.push_back(npy_file("{'descr': '<f4', 'fortran_order': False, 'shape': (1, 2, 4), }",
                              f32_payload(std::vector<float>(9, 0.1f))));
    corpus.push_back(npy_file(
        "{'descr': '<f4', 'fortran_order': False, 'shape': (4611686018427387904, 4611686018427387904, 4), }", eight));
    corpus.push_back(npy_file("{'descr': '<f4', 'fortran_order': False, 'shape': (1, 2, 4)", eight));
    corpus.push_back(npy_file("{'descr': '<f4, 'fortran_order': False, 'shape': (1, 2, 4), }", eight));
    corpus.push_back(npy_file("{'descr': '<f4', 'fortran_order': Maybe, 'shape': (1, 2, 4), }", eight));
    {
        std::vector<float> v(8, 0.1f);
        v[3] = std::nanf("");
        corpus.push_back(npy_file(ok_dict, f32_payload(v)));
        v[3] = INFINITY;
        corpus.push_back(npy_file(ok_dict, f32_payload(v)));
        v[3] = -0.5f;
        corpus.push_back(npy_file(ok_dict, f32_payload(v)));
    }
    expect(corpus.size() >= 20, "corpus too small");
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        bool typed = false;
        try {
            parse_npy(corpus[i], "case " + std::to_string(i));
        } catch (const Error&) {
            typed = true;
        } catch (...) {
        }
        expect(typed, "malformed case " + std::to_string(i) + " did not raise a typed error");
    }

    // random byte mutations of a valid file: either parse or raise a typed error
    const std::vector<unsigned char> valid = npy_file(ok_dict, eight);
    for (int trial = 0; trial < 5000; ++trial) {
        std::vector<unsigned char> bytes = valid;
        const int edits = std::uniform_int_distribution<int>(1, 4)(rng);
        for (int e = 0; e < edits; ++e) {
            const std::size_t at = std::uniform_int_distribution<std::size_t>(0, bytes.size() - 1)(rng);
            bytes[at] = static_cast<unsigned char>(rng());
        }
        if (std::uniform_int_distribution<int>(0, 3)(rng) == 0) {
            bytes.resize(std::uniform_int_distribution<std::size_t>(0, bytes.size())(rng));
        }
        try {
            parse_npy(bytes, "mutation");
        } catch (const Error&) {
        } catch (const std::exception& e) {
            throw Failure{"mutation " + std::to_string(trial) + " raised an untyped error: " + e.what()};
        }
    }
}

void ac8_determinism() {
    std::vector<std::string> digests[2];
    for (int pass = 0; pass < 2; ++pass) {
        TempDir dir("hired-ac8");
        const std::string dump = (dir / "dump").string();
        const std::string sel = (dir / "sel.json").string();
        const std::string report = (dir / "stats.json").string();
        cli_ok({"synth", "--seed", "7", "--out", dump});
        cli_ok({"run", "--dump", dump, "--out", sel, "--budget", "0.2", "--emit-scores"});
        const Invocation stats = cli_run({"stats", "--manifests", sel, "--budget", "576", "--json-out", report});
        expect(stats.code == 0, "stats exited " + std::to_string(stats.code));
        for (const fs::path& file : {fs::path(dump) / "manifest.json", fs::path(dump) / "partition_0.npy",
                                     fs::path(dump) / "partition_1.npy", fs::path(dump) / "partition_2.npy",
                                     fs::path(dump) / "partition_3.npy", fs::path(dump) / "partition_4.npy",
                                     fs::path(sel), fs::path(report)}) {
            digests[pass].push_back(sha256_hex(testing::read_bytes(file)));
        }
        digests[pass].push_back(sha256_hex(std::vector<unsigned char>(stats.out.begin(), stats.out.end())));
    }
    expect(digests[0] == digests[1], "artifact digests differ between runs");
    expect(digests[0].size() == 9, "missing artifacts");
}

}  // namespace

int main() {
    struct Criterion {
        const char* id;
        const char* title;
        double limit_seconds;  // 0 = untimed
        std::function<void()> body;
    };
    const Criterion criteria[] = {
        {"AC1", "budget fractions 0.10/0.20 on 5x576 keep 288/576 tokens", 1.0, ac1_budget_fractions},
        {"AC2", "100 synthetic dumps at 20%: no violations, max = mean = 576", 30.0, ac2_budget_enforcement},
        {"AC3", "engine matches the reference implementation on 1000 instances", 60.0, ac3_oracle_equivalence},
        {"AC4", "apportionment conserves, stays within 1 of the share, is scale invariant", 0.0,
         ac4_apportionment},
        {"AC5", "sub-image token sets partition every patch grid", 0.0, ac5_geometry},
        {"AC6", "defaults: alpha 0.5, init layer 0, final layer 22, sum aggregation", 0.0, ac6_defaults},
        {"AC7", "NPY roundtrip is bit exact; malformed files raise typed errors", 0.0, ac7_npy},
        {"AC8", "synth -> run -> stats twice gives identical SHA-256 digests", 0.0, ac8_determinism},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        std::string detail;
        bool passed = true;
        const auto start = std::chrono::steady_clock::now();
        try {
            c.body();
        } catch (const Failure& f) {
            passed = false;
            detail = f.what;
        } catch (const std::exception& e) {
            passed = false;
            detail = std::string("unexpected exception: ") + e.what();
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (passed && c.limit_seconds > 0.0 && seconds >= c.limit_seconds) {
            passed = false;
            detail = "exceeded " + std::to_string(c.limit_seconds) + " s";
        }
        char timing[32];
        std::snprintf(timing, sizeof(timing), "%.3f s", seconds);
        std::cout << (passed ? "[PASS] " : "[FAIL] ") << c.id << " " << c.title << " (" << timing << ")";
        if (!detail.empty()) std::cout << ": " << detail;
        std::cout << "\n";
        failures += passed ? 0 : 1;
    }
    std::cout << (failures == 0 ? "all acceptance criteria passed" : std::to_string(failures) + " criteria failed")
              << "\n";
    return failures == 0 ? 0 : 1;
}
