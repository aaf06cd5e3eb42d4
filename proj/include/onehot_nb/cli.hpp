#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace onehot_nb::cli {

inline constexpr std::string_view kToolName = "onehot_nb";
inline constexpr std::string_view kToolVersion = "1.0.0";

enum ExitCode : int { kOk = 0, kInputError = 2, kIoError = 3 };

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name, e.g. {"simulate", "--values", "3", "--out", "run"}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace onehot_nb::cli
