#include "onehot_nb/error.hpp"

namespace onehot_nb {

std::string_view error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NegativeEntry: return "NegativeEntry";
        case ErrorCode::BadSum: return "BadSum";
        case ErrorCode::TooShort: return "TooShort";
        case ErrorCode::BadAlpha: return "BadAlpha";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::ZeroEvidence: return "ZeroEvidence";
        case ErrorCode::EmptyData: return "EmptyData";
        case ErrorCode::LabelOutOfRange: return "LabelOutOfRange";
        case ErrorCode::BadSmoothing: return "BadSmoothing";
        case ErrorCode::OutOfUnitInterval: return "OutOfUnitInterval";
        case ErrorCode::BadK: return "BadK";
        case ErrorCode::ZeroTheta: return "ZeroTheta";
        case ErrorCode::UndefinedRho: return "UndefinedRho";
        case ErrorCode::BadStep: return "BadStep";
        case ErrorCode::BadConfig: return "BadConfig";
        case ErrorCode::NotOneHot: return "NotOneHot";
        case ErrorCode::Parse: return "Parse";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

}  // namespace onehot_nb
