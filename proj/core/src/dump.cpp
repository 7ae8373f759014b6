// Copyright (C) 2026 The hired-engine Authors
// SPDX-License-Identifier: Apache-2.0

#include "hired/dump.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "hired/error.hpp"
#include "hired/npy.hpp"

namespace hired {

namespace {

using nlohmann::json;

std::string partition_tag(std::size_t id) {
    return "partition " + std::to_string(id);
}

void check_metadata(const DumpMetadata& m, std::size_t partition_count, ErrorCode code) {
    if (partition_count == 0) {
        throw Error(code, "partitions", "a dump needs at least the full-image partition");
    }
    const std::size_t k = partition_count - 1;
    if ((m.grid.width == 0) != (m.grid.height == 0)) {
        throw Error(code, "grid", "grid " + format_grid(m.grid) + " is empty in one dimension");
    }
    if (m.grid.area() != k) {
        throw Error(code, "grid",
                    "grid " + format_grid(m.grid) + " does not match " + std::to_string(k) + " sub-images");
    }
    if (m.patch_grid.area() == 0) {
        throw Error(code, "patch_grid", "patch grid must be at least 1x1");
    }
    if (m.num_heads == 0) {
        throw Error(code, "num_heads", "must be at least 1");
    }
    if (m.layers_captured.empty()) {
        throw Error(code, "layers_captured", "must list at least one layer");
    }
    for (std::size_t i = 0; i < m.layers_captured.size(); ++i) {
        if (m.layers_captured[i] < 0 || (i > 0 && m.layers_captured[i] <= m.layers_captured[i - 1])) {
            throw Error(code, "layers_captured", "must be nonnegative and strictly increasing");
        }
    }
}

Shape3 expected_shape(const DumpMetadata& m) {
    return {m.layers_captured.size(), m.num_heads, m.patch_grid.area()};
}

std::string describe(const Shape3& s) {
    return "(" + std::to_string(s.layers) + ", " + std::to_string(s.heads) + ", " + std::to_string(s.tokens) + ")";
}

PartitionRole role_for(std::size_t id) {
    return id == 0 ? PartitionRole::Full : PartitionRole::Sub;
}

// Uniform in (0, 1] from the top 24 bits; exact in f32 and platform independent.
float unit_interval(std::mt19937_64& rng) {
    return static_cast<float>((rng() >> 40) + 1) * 0x1p-24f;
}

}  // namespace

std::string_view to_string(PartitionRole role) noexcept {
    return role == PartitionRole::Full ? "full" : "sub";
}

AttentionDump::AttentionDump(DumpMetadata metadata, std::vector<Partition> partitions)
    : m_metadata(std::move(metadata)), m_partitions(std::move(partitions)) {
    check_metadata(m_metadata, m_partitions.size(), ErrorCode::ShapeMismatch);
    const Shape3 shape = expected_shape(m_metadata);
    for (std::size_t i = 0; i < m_partitions.size(); ++i) {
        const Partition& p = m_partitions[i];
        if (p.id != i) {
            throw Error(ErrorCode::ShapeMismatch, partition_tag(i), "partition ids must be contiguous from 0");
        }
        if (p.role != role_for(i)) {
            throw Error(ErrorCode::ShapeMismatch, partition_tag(i),
                        i == 0 ? "partition 0 must be the full-image" : "only partition 0 may be the full-image");
        }
        if (p.attention.shape() != shape) {
            throw Error(ErrorCode::ShapeMismatch, partition_tag(i),
                        "tensor shape " + describe(p.attention.shape()) + " does not match " + describe(shape));
        }
        try {
            p.attention.validate_attention();
        } catch (const Error& e) {
            throw Error(e.code(), partition_tag(i), e.reason());
        }
    }
}

const Partition& AttentionDump::partition(std::size_t id) const {
    if (id >= m_partitions.size()) {
        throw Error(ErrorCode::UnknownPartition, partition_tag(id),
                    "dump has " + std::to_string(m_partitions.size()) + " partitions");
    }
    return m_partitions[id];
}

std::size_t AttentionDump::layer_slot(int layer) const {
    const auto& layers = m_metadata.layers_captured;
    const auto it = std::find(layers.begin(), layers.end(), layer);
    if (it == layers.end()) {
        throw Error(ErrorCode::MissingLayer, "layer " + std::to_string(layer), "layer was not captured in the dump");
    }
    return static_cast<std::size_t>(it - layers.begin());
}

bool AttentionDump::has_layer(int layer) const noexcept {
    const auto& layers = m_metadata.layers_captured;
    return std::find(layers.begin(), layers.end(), layer) != layers.end();
}

PartitionLayout AttentionDump::layout() const {
    return make_layout(m_metadata.grid, m_metadata.patch_grid, m_metadata.image_width, m_metadata.image_height);
}

AttentionDump dump_from_buffers(DumpMetadata metadata, std::span<const PartitionBuffer> buffers) {
    check_metadata(metadata, buffers.size(), ErrorCode::ShapeMismatch);
    const Shape3 shape = expected_shape(metadata);
    std::vector<Partition> partitions;
    partitions.reserve(buffers.size());
    for (std::size_t i = 0; i < buffers.size(); ++i) {
        const PartitionBuffer& buffer = buffers[i];
        if (buffer.shape != shape) {
            throw Error(ErrorCode::ShapeMismatch, partition_tag(i),
                        "buffer shape " + describe(buffer.shape) + " does not match " + describe(shape));
        }
        if (buffer.data.size() != shape.size()) {
            throw Error(ErrorCode::ShapeMismatch, partition_tag(i),
                        "buffer holds " + std::to_string(buffer.data.size()) + " values, shape needs " +
                            std::to_string(shape.size()));
        }
        partitions.push_back(
            {i, role_for(i), Tensor3(shape, std::vector<float>(buffer.data.begin(), buffer.data.end()))});
    }
    return AttentionDump(std::move(metadata), std::move(partitions));
}

// -- manifest -----------------------------------------------------------------

namespace {

[[noreturn]] void invalid(const std::string& field, const std::string& reason) {
    throw Error(ErrorCode::ManifestInvalid, field, reason);
}

const json& require(const json& obj, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        invalid(std::string("/") + key, "missing field");
    }
    return *it;
}

std::size_t as_count(const json& value, const std::string& field) {
    if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<std::int64_t>() >= 0)) {
        invalid(field, "expected a nonnegative integer");
    }
    return value.get<std::size_t>();
}

GridSize as_grid(const json& value, const std::string& field) {
    if (!value.is_array() || value.size() != 2) {
        invalid(field, "expected [width, height]");
    }
    return {as_count(value[0], field + "/0"), as_count(value[1], field + "/1")};
}

}  // namespace

DumpManifest parse_dump_manifest(std::string_view json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        invalid("manifest.json", std::string("not valid JSON: ") + e.what());
    }
    if (!root.is_object()) {
        invalid("/", "manifest must be a JSON object");
    }

    DumpManifest manifest;
    const json& version = require(root, "version");
    if (!version.is_number_integer() || version.get<int>() != kDumpManifestVersion) {
        invalid("/version", "unsupported manifest version (expected 1)");
    }
    manifest.version = kDumpManifestVersion;

    DumpMetadata& m = manifest.metadata;
    m.image_width = as_count(require(root, "image_width"), "/image_width");
    m.image_height = as_count(require(root, "image_height"), "/image_height");
    m.grid = as_grid(require(root, "grid"), "/grid");
    m.patch_grid = as_grid(require(root, "patch_grid"), "/patch_grid");
    m.num_heads = as_count(require(root, "num_heads"), "/num_heads");

    const json& layers = require(root, "layers_captured");
    if (!layers.is_array()) {
        invalid("/layers_captured", "expected an array of layer indices");
    }
    for (std::size_t i = 0; i < layers.size(); ++i) {
        m.layers_captured.push_back(static_cast<int>(as_count(layers[i], "/layers_captured/" + std::to_string(i))));
    }

    const json& parts = require(root, "partitions");
    if (!parts.is_array()) {
        invalid("/partitions", "expected an array");
    }
    for (std::size_t i = 0; i < parts.size(); ++i) {
        const std::string field = "/partitions/" + std::to_string(i);
        const json& entry = parts[i];
        if (!entry.is_object()) {
            invalid(field, "expected an object");
        }
        ManifestEntry e;
        e.id = as_count(require(entry, "id"), field + "/id");
        const json& role = require(entry, "role");
        if (role == "full") {
            e.role = PartitionRole::Full;
        } else if (role == "sub") {
            e.role = PartitionRole::Sub;
        } else {
            invalid(field + "/role", "expected \"full\" or \"sub\"");
        }
        const json& path = require(entry, "path");
        if (!path.is_string() || path.get<std::string>().empty()) {
            invalid(field + "/path", "expected a nonempty relative path");
        }
        e.path = path.get<std::string>();
        manifest.partitions.push_back(std::move(e));
    }
    std::sort(manifest.partitions.begin(), manifest.partitions.end(),
              [](const ManifestEntry& a, const ManifestEntry& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < manifest.partitions.size(); ++i) {
        const ManifestEntry& e = manifest.partitions[i];
        if (e.id != i) {
            invalid("/partitions", "partition ids must be contiguous from 0");
        }
        if (e.role != role_for(i)) {
            invalid("/partitions", partition_tag(i) + (i == 0 ? " must have role full" : " must have role sub"));
        }
    }

    check_metadata(m, manifest.partitions.size(), ErrorCode::ManifestInvalid);
    return manifest;
}

std::string serialize_dump_manifest(const DumpManifest& manifest) {
    const DumpMetadata& m = manifest.metadata;
    nlohmann::ordered_json root;
    root["version"] = manifest.version;
    root["image_width"] = m.image_width;
    root["image_height"] = m.image_height;
    root["grid"] = {m.grid.width, m.grid.height};
    root["patch_grid"] = {m.patch_grid.width, m.patch_grid.height};
    root["num_heads"] = m.num_heads;
    root["layers_captured"] = m.layers_captured;
    root["partitions"] = nlohmann::ordered_json::array();
    for (const ManifestEntry& e : manifest.partitions) {
        nlohmann::ordered_json entry;
        entry["id"] = e.id;
        entry["role"] = std::string(to_string(e.role));
        entry["path"] = e.path;
        root["partitions"].push_back(std::move(entry));
    }
    return root.dump(2) + "\n";
}

AttentionDump load_attention_dump(const std::filesystem::path& dir) {
    const std::filesystem::path manifest_path = dir / kDumpManifestName;
    std::ifstream in(manifest_path);
    if (!in) {
        throw Error(ErrorCode::ManifestMissing, manifest_path.string(), "cannot open dump manifest");
    }
    std::stringstream text;
    text << in.rdbuf();
    DumpManifest manifest = parse_dump_manifest(text.str());

    const Shape3 shape = expected_shape(manifest.metadata);
    std::vector<Partition> partitions;
    partitions.reserve(manifest.partitions.size());
    for (const ManifestEntry& entry : manifest.partitions) {
        Tensor3 tensor;
        try {
            tensor = read_npy(dir / entry.path);
        } catch (const Error& e) {
            throw e.with_subject_prefix(partition_tag(entry.id));
        }
        if (tensor.shape() != shape) {
            throw Error(ErrorCode::ManifestInvalid, partition_tag(entry.id),
                        entry.path + " has shape " + describe(tensor.shape()) + " but the manifest declares " +
                            describe(shape));
        }
        partitions.push_back({entry.id, entry.role, std::move(tensor)});
    }
    return AttentionDump(std::move(manifest.metadata), std::move(partitions));
}

void save_attention_dump(const AttentionDump& dump, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw Error(ErrorCode::Io, dir.string(), "cannot create directory: " + ec.message());
    }
    DumpManifest manifest;
    manifest.metadata = dump.metadata();
    for (const Partition& p : dump.partitions()) {
        const std::string name = "partition_" + std::to_string(p.id) + ".npy";
        write_npy(p.attention, dir / name);
        manifest.partitions.push_back({p.id, p.role, name});
    }
    std::ofstream out(dir / kDumpManifestName, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::Io, (dir / kDumpManifestName).string(), "cannot open file for writing");
    }
    out << serialize_dump_manifest(manifest);
    if (!out) {
        throw Error(ErrorCode::Io, (dir / kDumpManifestName).string(), "write failed");
    }
}

// -- synthetic ----------------------------------------------------------------

AttentionDump generate_synthetic_dump(const SyntheticSpec& spec) {
    if (spec.heads == 0 || spec.tokens == 0) {
        throw Error(ErrorCode::InvalidConfig, "synthetic", "heads and tokens must be at least 1");
    }
    DumpMetadata m;
    m.grid = spec.grid.area() != 0 ? spec.grid : square_factorization(spec.sub_images);
    m.patch_grid = spec.patch_grid.area() != 0 ? spec.patch_grid : square_factorization(spec.tokens);
    if (m.grid.area() != spec.sub_images) {
        throw Error(ErrorCode::InvalidConfig, "grid", "grid " + format_grid(m.grid) + " does not hold " +
                                                          std::to_string(spec.sub_images) + " sub-images");
    }
    if (m.patch_grid.area() != spec.tokens) {
        throw Error(ErrorCode::InvalidConfig, "patch_grid",
                    "patch grid " + format_grid(m.patch_grid) + " does not hold " + std::to_string(spec.tokens) +
                        " tokens");
    }
    m.image_width = std::max<std::size_t>(m.grid.width, 1) * spec.base_resolution;
    m.image_height = std::max<std::size_t>(m.grid.height, 1) * spec.base_resolution;
    m.num_heads = spec.heads;
    m.layers_captured = spec.layers_captured;

    const Shape3 shape{m.layers_captured.size(), m.num_heads, spec.tokens};
    std::mt19937_64 rng(spec.seed);
    std::vector<Partition> partitions;
    partitions.reserve(spec.sub_images + 1);
    std::vector<double> raw(spec.tokens);
    for (std::size_t id = 0; id <= spec.sub_images; ++id) {
        Tensor3 tensor(shape);
        for (std::size_t layer = 0; layer < shape.layers; ++layer) {
            for (std::size_t head = 0; head < shape.heads; ++head) {
                // Cubing skews rows toward a few dominant patches, like real CLS attention.
                double total = 0.0;
                for (double& v : raw) {
                    const double u = unit_interval(rng);
                    v = u * u * u;
                    total += v;
                }
                auto row = tensor.row(layer, head);
                for (std::size_t j = 0; j < raw.size(); ++j) {
                    row[j] = static_cast<float>(raw[j] / total);
                }
            }
        }
        partitions.push_back({id, role_for(id), std::move(tensor)});
    }
    return AttentionDump(std::move(m), std::move(partitions));
}

AttentionDump generate_synthetic_dump(std::uint64_t seed, std::size_t sub_images, std::size_t heads, std::size_t tokens,
                                      std::vector<int> layers_captured) {
    SyntheticSpec spec;
    spec.seed = seed;
    spec.sub_images = sub_images;
    spec.heads = heads;
    spec.tokens = tokens;
    spec.layers_captured = std::move(layers_captured);
    return generate_synthetic_dump(spec);
}

}  // namespace hired
