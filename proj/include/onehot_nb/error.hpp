#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace onehot_nb {

enum class ErrorCode {
    NegativeEntry,
    BadSum,
    TooShort,
    BadAlpha,
    IndexOutOfRange,
    LengthMismatch,
    ZeroEvidence,
    EmptyData,
    LabelOutOfRange,
    BadSmoothing,
    OutOfUnitInterval,
    BadK,
    ZeroTheta,
    UndefinedRho,
    BadStep,
    BadConfig,
    NotOneHot,
    Parse,
    Io,
};

std::string_view error_code_name(ErrorCode code) noexcept;

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace onehot_nb
