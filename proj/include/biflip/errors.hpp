#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace biflip {

// Error names are part of the external interface: the CLI and the HTTP
// service report them verbatim.
enum class ErrorCode {
    DegenerateRestriction,
    SpaceMismatch,
    OutOfDomain,
    InvalidFlipper,
    InvalidIsometry,
    NotInvolution,
    EmptyFixedSet,
    NotCommuting,
    NotInCentralizer,
    NotCompatible,
    NotInvolutionCompatible,
    IdentityHasNoPencil,
    NonEuclideanFactor,
    NotLinked,
    DegenerateAxes,
    NotPerpendicular,
    NonUnit,
    WrongFlipperKind,
    UnsupportedSpace,
    MalformedInput,
};

constexpr std::string_view error_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::DegenerateRestriction: return "DegenerateRestriction";
    case ErrorCode::SpaceMismatch: return "SpaceMismatch";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::InvalidFlipper: return "InvalidFlipper";
    case ErrorCode::InvalidIsometry: return "InvalidIsometry";
    case ErrorCode::NotInvolution: return "NotInvolution";
    case ErrorCode::EmptyFixedSet: return "EmptyFixedSet";
    case ErrorCode::NotCommuting: return "NotCommuting";
    case ErrorCode::NotInCentralizer: return "NotInCentralizer";
    case ErrorCode::NotCompatible: return "NotCompatible";
    case ErrorCode::NotInvolutionCompatible: return "NotInvolutionCompatible";
    case ErrorCode::IdentityHasNoPencil: return "IdentityHasNoPencil";
    case ErrorCode::NonEuclideanFactor: return "NonEuclideanFactor";
    case ErrorCode::NotLinked: return "NotLinked";
    case ErrorCode::DegenerateAxes: return "DegenerateAxes";
    case ErrorCode::NotPerpendicular: return "NotPerpendicular";
    case ErrorCode::NonUnit: return "NonUnit";
    case ErrorCode::WrongFlipperKind: return "WrongFlipperKind";
    case ErrorCode::UnsupportedSpace: return "UnsupportedSpace";
    case ErrorCode::MalformedInput: return "MalformedInput";
    }
    return "Unknown";
}

class GeometryError : public std::runtime_error {
public:
    GeometryError(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }
    std::string_view name() const noexcept { return error_name(code_); }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw GeometryError(code, message);
}

} // namespace biflip
