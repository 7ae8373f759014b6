// Copyright (C) 2026 The hired-engine Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hired {

enum class ErrorCode {
    // NPY / tensor ingestion
    MalformedHeader,
    UnsupportedDtype,
    ShapeMismatch,
    NonFiniteValue,
    NegativeValue,
    Io,
    // dump manifests
    ManifestMissing,
    ManifestInvalid,
    // geometry
    EmptyCandidateList,
    IndexOutOfRange,
    // engine
    MissingLayer,
    UnknownPartition,
    BudgetExceedsCapacity,
    InvalidConfig,
    // selection manifests
    ParseError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the engine. `subject()` names the offending file,
/// field path, flag or partition so callers can print "error: <subject>: <reason>".
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string subject, const std::string& reason);

    ErrorCode code() const noexcept { return m_code; }
    const std::string& subject() const noexcept { return m_subject; }
    const std::string& reason() const noexcept { return m_reason; }

    bool is_io() const noexcept { return m_code == ErrorCode::Io || m_code == ErrorCode::ManifestMissing; }

    /// Same error with `prefix` prepended to the subject (e.g. a partition tag).
    Error with_subject_prefix(std::string_view prefix) const;

private:
    ErrorCode m_code;
    std::string m_subject;
    std::string m_reason;
};

}  // namespace hired
