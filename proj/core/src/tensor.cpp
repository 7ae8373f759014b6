// Copyright (C) 2026 The hired-engine Authors
// SPDX-License-Identifier: Apache-2.0

#include "hired/tensor.hpp"

#include <cmath>
#include <string>

#include "hired/error.hpp"

namespace hired {

Tensor3::Tensor3(Shape3 shape) : m_shape(shape), m_data(shape.size(), 0.0f) {}

Tensor3::Tensor3(Shape3 shape, std::vector<float> data) : m_shape(shape), m_data(std::move(data)) {
    if (m_data.size() != m_shape.size()) {
        throw Error(ErrorCode::ShapeMismatch, "tensor",
                    "data holds " + std::to_string(m_data.size()) + " values, shape needs " +
                        std::to_string(m_shape.size()));
    }
}

std::span<const float> Tensor3::row(std::size_t layer_slot, std::size_t head) const {
    if (layer_slot >= m_shape.layers || head >= m_shape.heads) {
        throw Error(ErrorCode::IndexOutOfRange, "tensor", "row (" + std::to_string(layer_slot) + ", " +
                                                              std::to_string(head) + ") out of range");
    }
    return std::span<const float>(m_data).subspan((layer_slot * m_shape.heads + head) * m_shape.tokens,
                                                  m_shape.tokens);
}

std::span<float> Tensor3::row(std::size_t layer_slot, std::size_t head) {
    if (layer_slot >= m_shape.layers || head >= m_shape.heads) {
        throw Error(ErrorCode::IndexOutOfRange, "tensor", "row (" + std::to_string(layer_slot) + ", " +
                                                              std::to_string(head) + ") out of range");
    }
    return std::span<float>(m_data).subspan((layer_slot * m_shape.heads + head) * m_shape.tokens,
                                            m_shape.tokens);
}

void Tensor3::validate_attention() const {
    for (std::size_t i = 0; i < m_data.size(); ++i) {
        const float v = m_data[i];
        if (!std::isfinite(v)) {
            throw Error(ErrorCode::NonFiniteValue, "tensor", "element " + std::to_string(i) + " is not finite");
        }
        if (v < 0.0f) {
            throw Error(ErrorCode::NegativeValue, "tensor", "element " + std::to_string(i) + " is negative");
        }
    }
}

}  // namespace hired
