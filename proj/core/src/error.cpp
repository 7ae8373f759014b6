// Copyright (C) 2026 The hired-engine Authors
// SPDX-License-Identifier: Apache-2.0

#include "hired/error.hpp"

#include "hired/version.hpp"

namespace hired {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::UnsupportedDtype: return "UnsupportedDtype";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::NegativeValue: return "NegativeValue";
    case ErrorCode::Io: return "Io";
    case ErrorCode::ManifestMissing: return "ManifestMissing";
    case ErrorCode::ManifestInvalid: return "ManifestInvalid";
    case ErrorCode::EmptyCandidateList: return "EmptyCandidateList";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::MissingLayer: return "MissingLayer";
    case ErrorCode::UnknownPartition: return "UnknownPartition";
    case ErrorCode::BudgetExceedsCapacity: return "BudgetExceedsCapacity";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, std::string subject, const std::string& reason)
    : std::runtime_error(subject.empty() ? reason : subject + ": " + reason),
      m_code(code),
      m_subject(std::move(subject)),
      m_reason(reason) {}

Error Error::with_subject_prefix(std::string_view prefix) const {
    std::string subject(prefix);
    if (!m_subject.empty()) {
        subject += ": ";
        subject += m_subject;
    }
    return Error(m_code, std::move(subject), m_reason);
}

std::string_view version() noexcept {
    return kVersion;
}

}  // namespace hired
