// Copyright (C) 2026 The hired-engine Authors
// SPDX-License-Identifier: Apache-2.0

#include "hired/manifest.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hired/error.hpp"

namespace hired {

namespace {

using ordered_json = nlohmann::ordered_json;

class Reader {
public:
    explicit Reader(const std::string& origin) : m_origin(origin) {}

    [[noreturn]] void fail(const std::string& field, const std::string& reason) const {
        throw Error(ErrorCode::ParseError, m_origin, field + ": " + reason);
    }

    const ordered_json& require(const ordered_json& obj, const char* key, const std::string& field) const {
        const auto it = obj.find(key);
        if (it == obj.end()) {
            fail(field + "/" + key, "missing field");
        }
        return *it;
    }

    std::uint64_t count(const ordered_json& value, const std::string& field) const {
        if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<std::int64_t>() >= 0)) {
            fail(field, "expected a nonnegative integer");
        }
        return value.get<std::uint64_t>();
    }

    int integer(const ordered_json& value, const std::string& field) const {
        if (!value.is_number_integer()) {
            fail(field, "expected an integer");
        }
        return value.get<int>();
    }

private:
    const std::string& m_origin;
};

}  // namespace

SelectionManifest make_selection_manifest(const SelectionResult& result, const BudgetPlan& plan,
                                          const EngineConfig& config) {
    SelectionManifest m;
    m.budget = plan.budget;
    m.alpha = config.alpha;
    m.init_layer = config.init_layer;
    m.final_layer = config.final_layer;
    m.aggregation = to_string(config.aggregation);
    for (const PartitionSelection& p : result.partitions) {
        m.partitions.push_back({p.partition_id, p.allocated, p.kept_indices, p.importance});
    }
    m.total_kept = result.total_kept;
    return m;
}

std::string serialize_selection_manifest(const SelectionManifest& manifest) {
    ordered_json root;
    root["version"] = manifest.version;
    root["budget"] = manifest.budget;
    root["alpha"] = manifest.alpha;
    root["init_layer"] = manifest.init_layer;
    root["final_layer"] = manifest.final_layer;
    root["aggregation"] = manifest.aggregation;
    root["partitions"] = ordered_json::array();
    for (const auto& p : manifest.partitions) {
        ordered_json entry;
        entry["id"] = p.id;
        entry["allocated"] = p.allocated;
        entry["kept_indices"] = p.kept_indices;
        if (p.importance) {
            entry["importance"] = *p.importance;
        }
        root["partitions"].push_back(std::move(entry));
    }
    root["total_kept"] = manifest.total_kept;
    return root.dump() + "\n";
}

SelectionManifest parse_selection_manifest(std::string_view json_text, const std::string& origin) {
    const Reader r(origin);
    ordered_json root;
    try {
        root = ordered_json::parse(json_text);
    } catch (const ordered_json::parse_error& e) {
        r.fail("/", std::string("not valid JSON: ") + e.what());
    }
    if (!root.is_object()) {
        r.fail("/", "expected a JSON object");
    }

    SelectionManifest m;
    m.version = r.integer(r.require(root, "version", ""), "/version");
    if (m.version != kSelectionManifestVersion) {
        r.fail("/version", "unsupported selection manifest version");
    }
    m.budget = r.count(r.require(root, "budget", ""), "/budget");
    const ordered_json& alpha = r.require(root, "alpha", "");
    if (!alpha.is_number()) {
        r.fail("/alpha", "expected a number");
    }
    m.alpha = alpha.get<double>();
    m.init_layer = r.integer(r.require(root, "init_layer", ""), "/init_layer");
    m.final_layer = r.integer(r.require(root, "final_layer", ""), "/final_layer");
    const ordered_json& aggregation = r.require(root, "aggregation", "");
    if (!aggregation.is_string()) {
        r.fail("/aggregation", "expected a string");
    }
    m.aggregation = aggregation.get<std::string>();

    const ordered_json& parts = r.require(root, "partitions", "");
    if (!parts.is_array()) {
        r.fail("/partitions", "expected an array");
    }
    std::uint64_t kept = 0;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        const std::string field = "/partitions/" + std::to_string(i);
        const ordered_json& entry = parts[i];
        if (!entry.is_object()) {
            r.fail(field, "expected an object");
        }
        SelectionManifest::Entry e;
        e.id = r.count(r.require(entry, "id", field), field + "/id");
        e.allocated = r.count(r.require(entry, "allocated", field), field + "/allocated");
        const ordered_json& indices = r.require(entry, "kept_indices", field);
        if (!indices.is_array()) {
            r.fail(field + "/kept_indices", "expected an array");
        }
        for (std::size_t j = 0; j < indices.size(); ++j) {
            const std::uint64_t idx = r.count(indices[j], field + "/kept_indices/" + std::to_string(j));
            if (!e.kept_indices.empty() && idx <= e.kept_indices.back()) {
                r.fail(field + "/kept_indices", "indices must be strictly ascending");
            }
            e.kept_indices.push_back(idx);
        }
        if (const auto it = entry.find("importance"); it != entry.end()) {
            if (!it->is_array()) {
                r.fail(field + "/importance", "expected an array");
            }
            std::vector<float> importance;
            for (const auto& v : *it) {
                if (!v.is_number()) {
                    r.fail(field + "/importance", "expected numbers");
                }
                importance.push_back(v.get<float>());
            }
            e.importance = std::move(importance);
        }
        kept += e.kept_indices.size();
        m.partitions.push_back(std::move(e));
    }
    m.total_kept = r.count(r.require(root, "total_kept", ""), "/total_kept");
    if (m.total_kept != kept) {
        r.fail("/total_kept", "does not match the number of kept indices (" + std::to_string(kept) + ")");
    }
    return m;
}

void write_selection_manifest(const SelectionResult& result, const BudgetPlan& plan, const EngineConfig& config,
                              const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::Io, path.string(), "cannot open file for writing");
    }
    out << serialize_selection_manifest(make_selection_manifest(result, plan, config));
    if (!out) {
        throw Error(ErrorCode::Io, path.string(), "write failed");
    }
}

SelectionManifest read_selection_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Io, path.string(), "cannot open file");
    }
    std::stringstream text;
    text << in.rdbuf();
    if (in.bad()) {
        throw Error(ErrorCode::Io, path.string(), "read failed");
    }
    return parse_selection_manifest(text.str(), path.string());
}

}  // namespace hired
