#include "bks/error.hpp"

namespace bks {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::ZeroVector: return "ZeroVector";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::SizeMismatch: return "SizeMismatch";
        case ErrorCode::TooLarge: return "TooLarge";
        case ErrorCode::NonFinite: return "NonFinite";
        case ErrorCode::BadOutcome: return "BadOutcome";
        case ErrorCode::InvalidEvent: return "InvalidEvent";
        case ErrorCode::InvalidObservable: return "InvalidObservable";
        case ErrorCode::IncompatibleEvent: return "IncompatibleEvent";
        case ErrorCode::NotDichotomic: return "NotDichotomic";
        case ErrorCode::UnknownObservable: return "UnknownObservable";
        case ErrorCode::OverlappingPartition: return "OverlappingPartition";
        case ErrorCode::InvalidContext: return "InvalidContext";
        case ErrorCode::InternalConsistency: return "InternalConsistency";
        case ErrorCode::ParseFailed: return "ParseFailed";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace bks
