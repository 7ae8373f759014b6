// Copyright (C) 2026 The hired-engine Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace hired {

/// Shape of a captured attention tensor: (layers captured, heads, tokens).
struct Shape3 {
    std::size_t layers = 0;
    std::size_t heads = 0;
    std::size_t tokens = 0;

    std::size_t size() const noexcept { return layers * heads * tokens; }
    friend bool operator==(const Shape3&, const Shape3&) = default;
};

/// Dense row-major f32 tensor, token index fastest-varying.
class Tensor3 {
public:
    Tensor3() = default;
    explicit Tensor3(Shape3 shape);
    Tensor3(Shape3 shape, std::vector<float> data);

    const Shape3& shape() const noexcept { return m_shape; }
    std::span<const float> data() const noexcept { return m_data; }
    std::span<float> data() noexcept { return m_data; }

    /// Attention row for one (layer slot, head): `tokens` contiguous values.
    std::span<const float> row(std::size_t layer_slot, std::size_t head) const;
    std::span<float> row(std::size_t layer_slot, std::size_t head);

    float at(std::size_t layer_slot, std::size_t head, std::size_t token) const {
        return m_data[(layer_slot * m_shape.heads + head) * m_shape.tokens + token];
    }

    /// Throws NonFiniteValue / NegativeValue on the first offending element.
    void validate_attention() const;

    friend bool operator==(const Tensor3&, const Tensor3&) = default;

private:
    Shape3 m_shape;
    std::vector<float> m_data;
};

}  // namespace hired
