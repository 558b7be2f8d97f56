#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bks {

enum class ErrorCode {
    ZeroVector,
    DimensionMismatch,
    SizeMismatch,
    TooLarge,
    NonFinite,
    BadOutcome,
    InvalidEvent,
    InvalidObservable,
    IncompatibleEvent,
    NotDichotomic,
    UnknownObservable,
    OverlappingPartition,
    InvalidContext,
    InternalConsistency,
    ParseFailed,
    IoError,
};

std::string_view to_string(ErrorCode code);

/// Exception carried by every failure in the toolkit. The code lets callers
/// (the CLI in particular) map failures onto exit statuses.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace bks
