#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace regen {

enum class ErrorKind {
    InvalidArgument,
    FileTooSmall,
    NotARegenFile,
    UnsupportedVersion,
    TruncatedFile,
    MalformedSidecar,
    MissingSidecar,
    MissingRegenFile,
    GeometryMismatch,
    PlacementFailure,
    PartialWrite,
    Io,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind kind, std::string message) {
    throw Error(kind, std::move(message));
}

} // namespace regen
