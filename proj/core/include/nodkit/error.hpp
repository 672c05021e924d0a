#pragma once

#include <stdexcept>
#include <string>

namespace nodkit {

/// Malformed or unsupported file content (bad magic, unknown datatype, bad CSV row).
struct FormatError : std::runtime_error {
    explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Filesystem-level failure (missing file, truncated payload, write failure).
struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Violated operation precondition (empty mask, geometry mismatch, single-class AUC input).
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace nodkit
