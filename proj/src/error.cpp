#include "hrvkit/error.hpp"

namespace hrvkit {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::NegativeValue: return "NegativeValue";
    case ErrorCode::NonNumeric: return "NonNumeric";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::RaggedRows: return "RaggedRows";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::LevelOutOfRange: return "LevelOutOfRange";
    case ErrorCode::KTooLarge: return "KTooLarge";
    case ErrorCode::NonPositiveData: return "NonPositiveData";
    case ErrorCode::DegenerateData: return "DegenerateData";
    case ErrorCode::AllZeroLevel: return "AllZeroLevel";
    case ErrorCode::NotInSimplex: return "NotInSimplex";
    case ErrorCode::NoMass: return "NoMass";
    case ErrorCode::BadBandwidth: return "BadBandwidth";
    case ErrorCode::NoAtoms: return "NoAtoms";
    case ErrorCode::BadAlpha: return "BadAlpha";
    case ErrorCode::InfiniteAtom: return "InfiniteAtom";
    case ErrorCode::UnknownExample: return "UnknownExample";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

} // namespace hrvkit
