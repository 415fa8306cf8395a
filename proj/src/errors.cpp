#include "finite_sos/errors.hpp"

namespace finite_sos {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::DuplicatePoint: return "DuplicatePoint";
        case ErrorKind::PointNotInSet: return "PointNotInSet";
        case ErrorKind::NotACubePoint: return "NotACubePoint";
        case ErrorKind::InvalidShape: return "InvalidShape";
        case ErrorKind::DegreeCapExceeded: return "DegreeCapExceeded";
        case ErrorKind::ZeroPolynomial: return "ZeroPolynomial";
        case ErrorKind::InvalidProblem: return "InvalidProblem";
        case ErrorKind::NotSymmetric: return "NotSymmetric";
        case ErrorKind::RequiresOddN: return "RequiresOddN";
        case ErrorKind::SearchFailed: return "SearchFailed";
        case ErrorKind::InternalConsistency: return "InternalConsistency";
        case ErrorKind::Parse: return "Parse";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

}  // namespace finite_sos
