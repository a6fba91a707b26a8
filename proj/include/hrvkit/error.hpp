#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hrvkit {

enum class ErrorCode {
    NegativeValue,
    NonNumeric,
    EmptySample,
    RaggedRows,
    EmptyInput,
    LevelOutOfRange,
    KTooLarge,
    NonPositiveData,
    DegenerateData,
    AllZeroLevel,
    NotInSimplex,
    NoMass,
    BadBandwidth,
    NoAtoms,
    BadAlpha,
    InfiniteAtom,
    UnknownExample,
    InvalidArgument,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so the
// CLI can emit a structured message.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

} // namespace hrvkit
