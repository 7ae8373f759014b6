// Copyright (C) 2026 The hired-engine Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <glob.h>

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hired/hired.hpp"

namespace hired::cli {

namespace {

namespace fs = std::filesystem;

constexpr std::string_view kBudgetHelp =
    "Token budget. Values in (0,1) are fractions of (k+1)*N_ViT; exactly 1 (or 1.0) means 100% "
    "(full capacity, not one token); whole numbers >= 2 are absolute token counts; 0 keeps nothing.";

/// A failure that already knows its exit code and "flag-or-file" subject.
struct CliError {
    int code;
    std::string subject;
    std::string reason;
};

[[noreturn]] void fail(int code, std::string subject, std::string reason) {
    throw CliError{code, std::move(subject), std::move(reason)};
}

int exit_code_for(const Error& e) {
    return e.is_io() ? kIoError : kValidationError;
}

// Engine field names -> the flag a user would have to fix.
std::string flag_for_field(const std::string& field) {
    if (field == "alpha") return "--alpha";
    if (field == "budget") return "--budget";
    if (field == "aggregation") return "--agg";
    if (field == "distribution") return "--distribution";
    if (field == "init_layer") return "--init-layer";
    if (field == "final_layer") return "--final-layer";
    return field;
}

std::vector<int> parse_int_list(const std::string& text, const std::string& flag) {
    std::vector<int> values;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        int value = 0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
        if (ec != std::errc() || ptr != item.data() + item.size() || item.empty()) {
            fail(kValidationError, flag, "'" + item + "' is not an integer");
        }
        values.push_back(value);
    }
    if (values.empty()) {
        fail(kValidationError, flag, "expected a comma-separated list");
    }
    return values;
}

GridSize grid_flag(const std::string& text, const std::string& flag) {
    try {
        return parse_grid(text);
    } catch (const Error& e) {
        fail(kValidationError, flag, e.reason());
    }
}

nlohmann::json read_json_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        fail(kIoError, path.string(), "cannot open file");
    }
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        fail(kValidationError, path.string(), std::string("invalid JSON: ") + e.what());
    }
}

// -- run ------------------------------------------------------------------------

struct RunOptions {
    std::string dump;
    std::string out;
    std::string config_file;
    std::string budget;
    double alpha = 0.5;
    int init_layer = 0;
    int final_layer = 22;
    std::string aggregation = "sum";
    std::string distribution = "content";
    bool emit_scores = false;

    CLI::Option* budget_opt = nullptr;
    CLI::Option* alpha_opt = nullptr;
    CLI::Option* init_opt = nullptr;
    CLI::Option* final_opt = nullptr;
    CLI::Option* agg_opt = nullptr;
    CLI::Option* dist_opt = nullptr;
    CLI::Option* emit_opt = nullptr;
};

void apply_config_file(const fs::path& path, EngineConfig& config) {
    const nlohmann::json root = read_json_file(path);
    if (!root.is_object()) {
        fail(kValidationError, path.string(), "config must be a JSON object");
    }
    const auto field_error = [&](const std::string& key, const std::string& reason) {
        fail(kValidationError, path.string(), key + ": " + reason);
    };
    try {
        if (const auto it = root.find("budget"); it != root.end()) {
            if (it->is_string()) {
                config.budget = Budget::parse(it->get<std::string>());
            } else if (it->is_number()) {
                config.budget = Budget::parse(it->dump());
            } else {
                field_error("budget", "expected a number");
            }
        }
        if (const auto it = root.find("alpha"); it != root.end()) {
            if (!it->is_number()) field_error("alpha", "expected a number");
            config.alpha = it->get<double>();
        }
        if (const auto it = root.find("init_layer"); it != root.end()) {
            if (!it->is_number_integer()) field_error("init_layer", "expected an integer");
            config.init_layer = it->get<int>();
        }
        if (const auto it = root.find("final_layer"); it != root.end()) {
            if (!it->is_number_integer()) field_error("final_layer", "expected an integer");
            config.final_layer = it->get<int>();
        }
        if (const auto it = root.find("aggregation"); it != root.end()) {
            if (!it->is_string()) field_error("aggregation", "expected a string");
            config.aggregation = parse_aggregation(it->get<std::string>());
        }
        if (const auto it = root.find("distribution"); it != root.end()) {
            if (!it->is_string()) field_error("distribution", "expected a string");
            config.distribution = parse_distribution(it->get<std::string>());
        }
        if (const auto it = root.find("emit_scores"); it != root.end()) {
            if (!it->is_boolean()) field_error("emit_scores", "expected true or false");
            config.emit_scores = it->get<bool>();
        }
    } catch (const Error& e) {
        fail(kValidationError, path.string(), e.subject() + ": " + e.reason());
    }
}

EngineConfig build_config(const RunOptions& o) {
    EngineConfig config;
    if (!o.config_file.empty()) {
        apply_config_file(o.config_file, config);
    }
    try {
        if (o.budget_opt->count() > 0) config.budget = Budget::parse(o.budget);
        if (o.alpha_opt->count() > 0) config.alpha = o.alpha;
        if (o.init_opt->count() > 0) config.init_layer = o.init_layer;
        if (o.final_opt->count() > 0) config.final_layer = o.final_layer;
        if (o.agg_opt->count() > 0) config.aggregation = parse_aggregation(o.aggregation);
        if (o.dist_opt->count() > 0) config.distribution = parse_distribution(o.distribution);
        if (o.emit_opt->count() > 0) config.emit_scores = o.emit_scores;
        config.validate();
    } catch (const Error& e) {
        fail(kValidationError, flag_for_field(e.subject()), e.reason());
    }
    return config;
}

int cmd_run(const RunOptions& o, std::ostream& out) {
    const EngineConfig config = build_config(o);
    const AttentionDump dump = load_attention_dump(o.dump);

    if (!dump.has_layer(config.init_layer)) {
        fail(kValidationError, "--init-layer", "layer " + std::to_string(config.init_layer) + " not captured in dump");
    }
    if (!dump.has_layer(config.final_layer)) {
        fail(kValidationError, "--final-layer",
             "layer " + std::to_string(config.final_layer) + " not captured in dump");
    }
    if (config.aggregation.kind == AggregationKind::SingleHead && config.aggregation.head >= dump.num_heads()) {
        fail(kValidationError, "--agg",
             "head " + std::to_string(config.aggregation.head) + " out of range for " +
                 std::to_string(dump.num_heads()) + " heads");
    }

    const HiredOutput result = run_hired(dump, config);
    write_selection_manifest(result.selection, result.plan, config, o.out);

    out << "total_kept=" << result.selection.total_kept << " budget=" << result.plan.budget
        << " n_full=" << result.plan.n_full << " n_sub=[";
    for (std::size_t i = 0; i < result.plan.n_sub.size(); ++i) {
        out << (i ? "," : "") << result.plan.n_sub[i];
    }
    out << "]";
    if (result.plan.unallocated > 0) {
        out << " unallocated=" << result.plan.unallocated;
    }
    out << "\n";
    return kSuccess;
}

// -- stats ----------------------------------------------------------------------

struct StatsOptions {
    std::vector<std::string> patterns;
    std::uint64_t budget = 0;
    std::uint64_t full_tokens = 2880;
    ModelProfile profile;
    std::string json_out;
};

std::vector<std::string> expand_globs(const std::vector<std::string>& patterns) {
    std::vector<std::string> files;
    for (const std::string& pattern : patterns) {
        glob_t matches{};
        const int rc = ::glob(pattern.c_str(), 0, nullptr, &matches);
        if (rc == 0) {
            for (std::size_t i = 0; i < matches.gl_pathc; ++i) {
                files.emplace_back(matches.gl_pathv[i]);
            }
        }
        ::globfree(&matches);
        if (rc != 0 && rc != GLOB_NOMATCH) {
            fail(kIoError, pattern, "glob expansion failed");
        }
    }
    std::sort(files.begin(), files.end());
    files.erase(std::unique(files.begin(), files.end()), files.end());
    return files;
}

int cmd_stats(const StatsOptions& o, std::ostream& out, std::ostream& err) {
    const std::vector<std::string> files = expand_globs(o.patterns);
    if (files.empty()) {
        fail(kValidationError, "--manifests", "no manifests matched");
    }
    try {
        o.profile.validate();
    } catch (const Error& e) {
        fail(kValidationError, "--llm-layers/--kv-heads/--head-dim/--bytes-per-element", e.reason());
    }

    std::vector<SelectionManifest> manifests;
    manifests.reserve(files.size());
    for (const std::string& file : files) {
        manifests.push_back(read_selection_manifest(file));
    }

    const TokenUsageStats stats = corpus_stats(manifests, o.budget);
    const CostEstimate mean_cost = estimate_cost(stats.sum / stats.sample_count, o.full_tokens, o.profile);
    const CostEstimate budget_cost = estimate_cost(o.budget, o.full_tokens, o.profile);
    const std::string json = stats_to_json(stats, mean_cost, budget_cost, o.profile);

    out << format_stats_table(stats, mean_cost, budget_cost) << json;
    if (!o.json_out.empty()) {
        std::ofstream file(o.json_out, std::ios::binary | std::ios::trunc);
        file << json;
        if (!file) {
            fail(kIoError, o.json_out, "write failed");
        }
    }
    if (stats.violations > 0) {
        err << "error: --budget: " << stats.violations << " of " << stats.sample_count << " manifests exceed budget "
            << o.budget << "\n";
        return kValidationError;
    }
    return kSuccess;
}

// -- synth ----------------------------------------------------------------------

struct SynthOptions {
    std::uint64_t seed = 1;
    std::size_t partitions = 5;
    std::size_t heads = 16;
    std::size_t tokens = 576;
    std::string layers = "0,11,22";
    std::string out;
    std::string grid;
    std::string patch_grid;
    std::string image;
    std::string candidates;
    std::size_t base_resolution = 336;

    CLI::Option* partitions_opt = nullptr;
};

int cmd_synth(const SynthOptions& o, std::ostream& out) {
    SyntheticSpec spec;
    spec.seed = o.seed;
    spec.heads = o.heads;
    spec.tokens = o.tokens;
    spec.base_resolution = o.base_resolution;
    spec.layers_captured = parse_int_list(o.layers, "--layers");
    if (o.heads == 0) {
        fail(kValidationError, "--heads", "must be at least 1");
    }
    if (o.tokens == 0) {
        fail(kValidationError, "--tokens", "must be at least 1");
    }
    if (!o.patch_grid.empty()) {
        spec.patch_grid = grid_flag(o.patch_grid, "--patch-grid");
        if (spec.patch_grid.area() != o.tokens) {
            fail(kValidationError, "--patch-grid", "patch grid does not hold --tokens tokens");
        }
    }
    const GridSize patch_grid = spec.patch_grid.area() != 0 ? spec.patch_grid : square_factorization(o.tokens);

    if (!o.image.empty()) {
        const GridSize image = grid_flag(o.image, "--image");
        std::vector<GridSize> candidates = default_grid_candidates();
        if (!o.candidates.empty()) {
            candidates.clear();
            std::stringstream stream(o.candidates);
            std::string item;
            while (std::getline(stream, item, ',')) {
                candidates.push_back(grid_flag(item, "--candidates"));
            }
        }
        try {
            const PartitionLayout layout =
                plan_partitions(image.width, image.height, candidates, o.base_resolution, patch_grid);
            spec.grid = layout.grid;
            spec.sub_images = layout.grid.area();
        } catch (const Error& e) {
            fail(kValidationError, e.code() == ErrorCode::EmptyCandidateList ? "--candidates" : "--image", e.reason());
        }
        if (o.partitions_opt->count() > 0 && o.partitions != spec.sub_images + 1) {
            fail(kValidationError, "--partitions", "conflicts with the grid chosen for --image");
        }
    } else {
        if (o.partitions < 1) {
            fail(kValidationError, "--partitions", "must be at least 1");
        }
        spec.sub_images = o.partitions - 1;
        if (!o.grid.empty()) {
            spec.grid = grid_flag(o.grid, "--grid");
            if (spec.grid.area() != spec.sub_images) {
                fail(kValidationError, "--grid", "grid does not hold --partitions minus one sub-images");
            }
        }
    }

    AttentionDump dump = [&] {
        try {
            return generate_synthetic_dump(spec);
        } catch (const Error& e) {
            fail(kValidationError, e.subject() == "grid" ? "--grid" : "--layers", e.reason());
        }
    }();
    try {
        save_attention_dump(dump, o.out);
    } catch (const Error& e) {
        throw e.with_subject_prefix(o.out);
    }
    out << "wrote " << dump.partitions().size() << " partitions (" << format_grid(dump.metadata().grid) << " grid, "
        << dump.num_heads() << " heads, " << dump.tokens_per_partition() << " tokens) to " << o.out << "\n";
    return kSuccess;
}

// -- viz ------------------------------------------------------------------------

struct VizOptions {
    std::string manifest;
    std::string dump;
    std::size_t partition = 0;
    std::string out;
};

int cmd_viz(const VizOptions& o, std::ostream& out) {
    const SelectionManifest manifest = read_selection_manifest(o.manifest);
    const AttentionDump dump = load_attention_dump(o.dump);

    const auto entry = std::find_if(manifest.partitions.begin(), manifest.partitions.end(),
                                    [&](const SelectionManifest::Entry& e) { return e.id == o.partition; });
    if (entry == manifest.partitions.end()) {
        fail(kValidationError, "--partition", "partition " + std::to_string(o.partition) + " not in manifest");
    }
    if (o.partition >= dump.partitions().size()) {
        fail(kValidationError, "--partition", "partition " + std::to_string(o.partition) + " not in dump");
    }
    if (manifest.partitions.size() != dump.partitions().size()) {
        fail(kValidationError, o.manifest, "manifest and dump disagree on the number of partitions");
    }
    const GridSize grid = dump.metadata().patch_grid;
    std::string pixels(grid.area(), '\0');
    for (const std::size_t idx : entry->kept_indices) {
        if (idx >= pixels.size()) {
            fail(kValidationError, o.manifest, "kept index " + std::to_string(idx) + " outside the patch grid");
        }
        pixels[idx] = static_cast<char>(255);
    }

    std::ofstream file(o.out, std::ios::binary | std::ios::trunc);
    if (!file) {
        fail(kIoError, o.out, "cannot open file for writing");
    }
    file << "P5\n" << grid.width << " " << grid.height << "\n255\n";
    file.write(pixels.data(), static_cast<std::streamsize>(pixels.size()));
    if (!file) {
        fail(kIoError, o.out, "write failed");
    }
    out << "wrote " << grid.width << "x" << grid.height << " mask with " << entry->kept_indices.size()
        << " kept tokens to " << o.out << "\n";
    return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Token budgeting and early dropping of visual tokens from captured ViT CLS attention.", "hired"};
    app.set_version_flag("--version", std::string(version()));
    app.require_subcommand(1);

    RunOptions run_opts;
    CLI::App* run_cmd = app.add_subcommand("run", "Allocate the budget and select tokens for one attention dump");
    run_cmd->add_option("--dump", run_opts.dump, "Attention dump directory (manifest.json + NPY files)")->required();
    run_cmd->add_option("--out", run_opts.out, "Selection manifest to write")->required();
    run_cmd->add_option("--config", run_opts.config_file, "JSON engine config; flags override its values");
    run_opts.budget_opt = run_cmd->add_option("--budget", run_opts.budget, std::string(kBudgetHelp));
    run_opts.alpha_opt = run_cmd->add_option("--alpha", run_opts.alpha, "Full-image share of the budget, in [0,1]")
                             ->capture_default_str();
    run_opts.init_opt = run_cmd->add_option("--init-layer", run_opts.init_layer, "Layer scoring sub-image content")
                            ->capture_default_str();
    run_opts.final_opt = run_cmd->add_option("--final-layer", run_opts.final_layer, "Layer ranking tokens for dropping")
                             ->capture_default_str();
    run_opts.agg_opt = run_cmd->add_option("--agg", run_opts.aggregation, "Head aggregation: sum|mean|max|head:N")
                           ->capture_default_str();
    run_opts.dist_opt =
        run_cmd->add_option("--distribution", run_opts.distribution, "Sub-image split: content|even")
            ->capture_default_str();
    run_opts.emit_opt = run_cmd->add_flag("--emit-scores", run_opts.emit_scores, "Embed importance scores in manifest");

    StatsOptions stats_opts;
    CLI::App* stats_cmd = app.add_subcommand("stats", "Audit token usage across selection manifests");
    stats_cmd->add_option("--manifests", stats_opts.patterns, "Manifest files or glob patterns")->required();
    stats_cmd->add_option("--budget", stats_opts.budget, "Token budget every manifest must respect")->required();
    stats_cmd->add_option("--full-tokens", stats_opts.full_tokens, "Visual tokens without dropping (cost baseline)")
        ->capture_default_str();
    stats_cmd->add_option("--llm-layers", stats_opts.profile.llm_layers, "LLM layers (cost proxy)")
        ->capture_default_str();
    stats_cmd->add_option("--kv-heads", stats_opts.profile.kv_heads, "KV heads (cost proxy)")->capture_default_str();
    stats_cmd->add_option("--head-dim", stats_opts.profile.head_dim, "Head dimension (cost proxy)")
        ->capture_default_str();
    stats_cmd->add_option("--bytes-per-element", stats_opts.profile.bytes_per_element, "KV element size in bytes")
        ->capture_default_str();
    stats_cmd->add_option("--extra-tokens", stats_opts.profile.extra_tokens, "System + text tokens per request")
        ->capture_default_str();
    stats_cmd->add_option("--json-out", stats_opts.json_out, "Also write the JSON report to this file");

    SynthOptions synth_opts;
    CLI::App* synth_cmd = app.add_subcommand("synth", "Write a deterministic synthetic attention dump");
    synth_cmd->add_option("--seed", synth_opts.seed, "RNG seed")->capture_default_str();
    synth_opts.partitions_opt =
        synth_cmd->add_option("--partitions", synth_opts.partitions, "Partitions including the full-image")
            ->capture_default_str();
    synth_cmd->add_option("--heads", synth_opts.heads, "Attention heads")->capture_default_str();
    synth_cmd->add_option("--tokens", synth_opts.tokens, "Patch tokens per partition")->capture_default_str();
    synth_cmd->add_option("--layers", synth_opts.layers, "Captured layer indices")->capture_default_str();
    synth_cmd->add_option("--out", synth_opts.out, "Output dump directory")->required();
    synth_cmd->add_option("--grid", synth_opts.grid, "Sub-image grid WxH (default: most square)");
    synth_cmd->add_option("--patch-grid", synth_opts.patch_grid, "Patch grid WxH (default: most square)");
    synth_cmd->add_option("--image", synth_opts.image, "Image size WxH in pixels; picks the grid from --candidates");
    synth_cmd->add_option("--candidates", synth_opts.candidates, "Comma-separated WxH grid candidates");
    synth_cmd->add_option("--base-resolution", synth_opts.base_resolution, "Sub-image side in pixels")
        ->capture_default_str();

    VizOptions viz_opts;
    CLI::App* viz_cmd = app.add_subcommand("viz", "Render one partition's kept-token mask as a PGM image");
    viz_cmd->add_option("--manifest", viz_opts.manifest, "Selection manifest")->required();
    viz_cmd->add_option("--dump", viz_opts.dump, "Attention dump directory")->required();
    viz_cmd->add_option("--partition", viz_opts.partition, "Partition id (0 = full-image)")->required();
    viz_cmd->add_option("--out", viz_opts.out, "Output .pgm file")->required();

    std::vector<const char*> argv{"hired"};
    for (const std::string& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForVersion& e) {
        out << e.what() << "\n";
        return kSuccess;
    } catch (const CLI::CallForHelp&) {
        const auto subs = app.get_subcommands();
        out << (subs.empty() ? app.help() : subs.front()->help());
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        const auto subs = app.get_subcommands();
        err << "error: arguments: " << e.what() << "\n" << (subs.empty() ? app.help() : subs.front()->help());
        return kValidationError;
    }

    try {
        if (run_cmd->parsed()) return cmd_run(run_opts, out);
        if (stats_cmd->parsed()) return cmd_stats(stats_opts, out, err);
        if (synth_cmd->parsed()) return cmd_synth(synth_opts, out);
        if (viz_cmd->parsed()) return cmd_viz(viz_opts, out);
    } catch (const CliError& e) {
        err << "error: " << e.subject << ": " << e.reason << "\n";
        return e.code;
    } catch (const Error& e) {
        err << "error: " << (e.subject().empty() ? "hired" : e.subject()) << ": " << e.reason() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        err << "error: hired: " << e.what() << "\n";
        return kIoError;
    }
    return kValidationError;
}

}  // namespace hired::cli
