#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pairedk {

enum class ErrorCode {
    PoleOnCircle,
    ZeroDenominator,
    DegreeOverflow,
    NotInHardySpace,
    ZeroFunction,
    ZeroOrPoleOnCircle,
    SymbolNotBounded,
    DomainMismatch,
    WindowOverflow,
    DegenerateSymbol,
    DegenerateInput,
    TrivialKernel,
    NotInKernel,
    PartitionOfUnityFails,
    NotInner,
    Indeterminate,
    UnknownProperty,
    MalformedConfig,
    MalformedSymbol,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported through this exception; the code is the
// stable identifier, the message carries context for humans.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace pairedk
