#pragma once

#include <stdexcept>
#include <string>

namespace gok {

enum class Err {
    Disconnected,
    SelfLoop,
    Asymmetric,
    NegativeWeight,
    IsolatedNode,
    TooSmall,
    TooLarge,
    NotSquare,
    UnsupportedSize,
    ParseError,
    DisconnectedAfterRetries,
    MassOutOfRange,
    FullSubset,
    EmptySet,
    NotAStar,
    RequiresRZero,
    NotInCgamma,
    NonpositiveEpsilon,
    EigensolverFailure,
    NumericallyDisconnected,
    StepSizeUnderflow,
    ConfigError,
};

const char* err_name(Err code);

/// Library-wide exception carrying a machine-checkable error code.
class Error : public std::runtime_error {
public:
    Error(Err code, const std::string& what)
        : std::runtime_error(std::string(err_name(code)) + ": " + what), code_(code) {}

    Err code() const noexcept { return code_; }

private:
    Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& what) { throw Error(code, what); }

} // namespace gok
