#pragma once

#include <stdexcept>
#include <string>

namespace miniq {

// Base class for every domain error the library raises. `name()` is the
// stable identifier surfaced on the CLI and in error JSON; `what()` carries
// the human-readable detail.
class Error : public std::runtime_error {
  public:
    Error(const char *name, const std::string &what)
        : std::runtime_error(what), name_(name) {}
    const char *name() const noexcept { return name_; }

  private:
    const char *name_;
};

struct UnreachableError : Error {
    explicit UnreachableError(const std::string &what) : Error("Unreachable", what) {}
};

struct InvalidParamsError : Error {
    explicit InvalidParamsError(const std::string &what) : Error("InvalidParams", what) {}
};

struct SpeedViolationError : Error {
    explicit SpeedViolationError(const std::string &what) : Error("SpeedViolation", what) {}
};

struct OverTorqueError : Error {
    explicit OverTorqueError(const std::string &what) : Error("OverTorque", what) {}
};

struct GridMismatchError : Error {
    explicit GridMismatchError(const std::string &what) : Error("GridMismatch", what) {}
};

struct DegenerateGeometryError : Error {
    explicit DegenerateGeometryError(const std::string &what) : Error("DegenerateGeometry", what) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string &what) : Error("ParseError", what) {}
};

struct EmptyError : Error {
    explicit EmptyError(const std::string &what) : Error("Empty", what) {}
};

struct ZeroVelocityError : Error {
    explicit ZeroVelocityError(const std::string &what) : Error("ZeroVelocity", what) {}
};

} // namespace miniq
