// Copyright (C) 2026 The hired-engine Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "hired/tensor.hpp"

namespace hired {

/// Reads a 3-D little-endian f32/f64 C-order NPY array (format 1.0 or 2.0).
/// f64 data is narrowed to f32. Values must be finite and nonnegative.
Tensor3 read_npy(const std::filesystem::path& path);

/// Same as read_npy over an in-memory file image; `origin` labels errors.
Tensor3 parse_npy(std::span<const unsigned char> bytes, const std::string& origin = "<memory>");

/// Writes `tensor` as NPY 1.0, dtype "<f4", C order.
void write_npy(const Tensor3& tensor, const std::filesystem::path& path);

}  // namespace hired
