#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace augopt {

// Base for everything thrown by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid configuration or contract violation by the caller (bad ranges,
// malformed policy documents, mismatched resume configs). CLI exit code 2.
struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Problems with external data: unreadable files, parse failures, sizing
// constraints that the input cannot satisfy. CLI exit code 3.
struct DataError : Error {
    explicit DataError(const std::string& msg) : Error(msg) {}
};

// Trial log ends in an unparseable record; offset is the byte position of
// the offending line start.
struct TruncatedRecordError : DataError {
    TruncatedRecordError(const std::string& msg, std::uint64_t offset)
        : DataError(msg), byte_offset(offset) {}
    std::uint64_t byte_offset;
};

}  // namespace augopt
