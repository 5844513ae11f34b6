#pragma once

#include <stdexcept>
#include <string>

namespace roverlay {

// Base for all library failures; command-line code maps these to exit codes.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ParseError : Error {
    using Error::Error;
};

struct UnsupportedGeometry : Error {
    using Error::Error;
};

struct DegenerateRing : Error {
    using Error::Error;
};

struct UnclosedRing : Error {
    using Error::Error;
};

struct InvalidTransform : Error {
    using Error::Error;
};

struct TriangulationFailure : Error {
    using Error::Error;
};

struct MissingStyle : Error {
    using Error::Error;
};

struct OpenMesh : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct InsufficientData : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace roverlay
