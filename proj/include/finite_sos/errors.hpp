#pragma once

#include <stdexcept>
#include <string>

namespace finite_sos {

enum class ErrorKind {
    DuplicatePoint,
    PointNotInSet,
    NotACubePoint,
    InvalidShape,
    DegreeCapExceeded,
    ZeroPolynomial,
    InvalidProblem,
    NotSymmetric,
    RequiresOddN,
    SearchFailed,
    InternalConsistency,
    Parse,
    InvalidArgument,
};

const char* to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` carries the failure category.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace finite_sos
