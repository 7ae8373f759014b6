// Copyright (C) 2026 The hired-engine Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hired/geometry.hpp"
#include "hired/tensor.hpp"

namespace hired {

enum class PartitionRole { Full, Sub };

std::string_view to_string(PartitionRole role) noexcept;

struct Partition {
    std::size_t id = 0;
    PartitionRole role = PartitionRole::Full;
    Tensor3 attention;
};

/// Geometry and capture metadata shared by every partition of a dump.
struct DumpMetadata {
    std::size_t image_width = 0;
    std::size_t image_height = 0;
    GridSize grid;        // sub-image grid; {0,0} when there are no sub-images
    GridSize patch_grid;  // ViT patch grid of one partition
    std::size_t num_heads = 0;
    std::vector<int> layers_captured;  // tensor slot -> model layer index
};

/// Per-partition CLS->patch attention for one image, validated on construction.
class AttentionDump {
public:
    AttentionDump(DumpMetadata metadata, std::vector<Partition> partitions);

    const DumpMetadata& metadata() const noexcept { return m_metadata; }
    const std::vector<Partition>& partitions() const noexcept { return m_partitions; }

    /// Number of sub-images k (partitions minus the full-image).
    std::size_t sub_image_count() const noexcept { return m_partitions.size() - 1; }
    std::size_t num_heads() const noexcept { return m_metadata.num_heads; }
    std::size_t tokens_per_partition() const noexcept { return m_metadata.patch_grid.area(); }
    const std::vector<int>& layers_captured() const noexcept { return m_metadata.layers_captured; }

    const Partition& partition(std::size_t id) const;

    /// Tensor slot holding `layer`; throws MissingLayer if it was not captured.
    std::size_t layer_slot(int layer) const;
    bool has_layer(int layer) const noexcept;

    PartitionLayout layout() const;

private:
    DumpMetadata m_metadata;
    std::vector<Partition> m_partitions;
};

/// Borrowed view of one partition's (layers, heads, tokens) f32 buffer.
struct PartitionBuffer {
    std::span<const float> data;
    Shape3 shape;
};

/// Builds a dump from host-owned buffers (partition 0 is the full-image).
/// Buffers are copied; shapes are checked against `metadata`.
AttentionDump dump_from_buffers(DumpMetadata metadata, std::span<const PartitionBuffer> buffers);

// -- on-disk format -----------------------------------------------------------

inline constexpr int kDumpManifestVersion = 1;
inline constexpr std::string_view kDumpManifestName = "manifest.json";

struct ManifestEntry {
    std::size_t id = 0;
    PartitionRole role = PartitionRole::Full;
    std::string path;  // relative to the dump directory
};

struct DumpManifest {
    int version = kDumpManifestVersion;
    DumpMetadata metadata;
    std::vector<ManifestEntry> partitions;
};

/// Parses manifest.json text. Field paths in errors follow JSON pointer style ("/grid/0").
DumpManifest parse_dump_manifest(std::string_view json_text);
std::string serialize_dump_manifest(const DumpManifest& manifest);

AttentionDump load_attention_dump(const std::filesystem::path& dir);

/// Writes manifest.json plus partition_<id>.npy files into `dir` (created if needed).
void save_attention_dump(const AttentionDump& dump, const std::filesystem::path& dir);

// -- synthetic data -----------------------------------------------------------

struct SyntheticSpec {
    std::uint64_t seed = 1;
    std::size_t sub_images = 4;  // k
    std::size_t heads = 16;
    std::size_t tokens = 576;  // N_ViT
    std::vector<int> layers_captured = {0, 11, 22};
    /// Optional explicit geometry; zero means "pick the most square factorization".
    GridSize grid{0, 0};
    GridSize patch_grid{0, 0};
    std::size_t base_resolution = 336;
};

/// Deterministic in every field of `spec`. Each (layer, head) row is strictly
/// positive and sums to 1 within 1e-5.
AttentionDump generate_synthetic_dump(const SyntheticSpec& spec);

AttentionDump generate_synthetic_dump(std::uint64_t seed, std::size_t sub_images, std::size_t heads,
                                      std::size_t tokens, std::vector<int> layers_captured);

}  // namespace hired
